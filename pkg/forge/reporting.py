"""Structured verification messages.

Log records emitted while a check runs are buffered by StructuredMessageLogHandler and returned
alongside the verdict, so a caller gets one JSON document with the outcome and the reasons.
"""

import logging
from collections.abc import Mapping
from contextlib import contextmanager
from dataclasses import dataclass, field
from logging import LogRecord
from typing import Any


@dataclass
class VerificationMessage:
    severity: str
    code: str
    message: str

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
        }


@dataclass
class VerificationResult:
    valid: bool
    messages: list[VerificationMessage] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        errors = sum(1 for m in self.messages if m.severity == "error")
        warnings = sum(1 for m in self.messages if m.severity == "warning")
        info = sum(1 for m in self.messages if m.severity == "info")

        result = {
            "valid": self.valid,
            "summary": {"errors": errors, "warnings": warnings, "info": info},
            "messages": [m.to_dict() for m in self.messages],
        }
        result.update(self.data)
        return result


class StructuredMessageLogHandler(logging.Handler):
    """Log handler that keeps records as VerificationMessages.

    Records may carry a ``messageCode`` extra; without one the logger name is used.
    """

    def __init__(self, level=logging.INFO):
        super().__init__(level)
        self.messages: list[VerificationMessage] = []

    def emit(self, logRecord: LogRecord) -> None:
        code = getattr(logRecord, "messageCode", "") or logRecord.name
        self.messages.append(
            VerificationMessage(
                severity=_normalize_severity(logRecord.levelname),
                code=code,
                message=str(self._safe_get_message(logRecord)),
            )
        )

    @staticmethod
    def _safe_get_message(log_record: LogRecord) -> str | tuple[object, ...] | Mapping[str, object]:
        """Format the record, falling back to the raw message on bad arguments."""
        if not log_record.args:
            return log_record.msg
        try:
            return log_record.msg % log_record.args
        except (TypeError, ValueError, KeyError):
            return log_record.msg


@contextmanager
def capture_messages(logger_name: str = "forge", level=logging.INFO):
    """Attach a StructuredMessageLogHandler to a logger for the duration of the block."""
    handler = StructuredMessageLogHandler(level)
    logger = logging.getLogger(logger_name)
    previous_level = logger.level
    logger.addHandler(handler)
    if logger.getEffectiveLevel() > level:
        logger.setLevel(level)
    try:
        yield handler
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous_level)


def _normalize_severity(level: str) -> str:
    level = level.lower()
    if level in ("error", "critical", "fatal"):
        return "error"
    if level in ("warning", "warn"):
        return "warning"
    return "info"
