"""Errors

Exception classes raised by the forge library. Only the command line front end turns them into
exit codes.
"""
from . import constants as fc


class ForgeException(Exception):
    exit_code = fc.EXIT_FAILURE


class ForgeError(ForgeException):
    def __init__(self, msg, operation=None):
        super().__init__(msg)
        self.msg = msg
        self.operation = operation

    def __str__(self):
        if self.operation:
            return "%s - %s" % (self.operation, self.msg)
        return self.msg


class ForgeInputError(ForgeError):
    """Arguments violate an operation's precondition."""
    exit_code = fc.EXIT_INPUT


class ForgeStructuralError(ForgeError):
    """A path, label or copy does not have the shape it claims to have."""
    exit_code = fc.EXIT_INPUT


class ForgeCapacityError(ForgeError):
    """The instance is larger than the configured limit of an exact method."""
    exit_code = fc.EXIT_CAPACITY


class ForgeContradictionError(ForgeError):
    """A construction that is guaranteed to exist was not found.

    Seeing this means the implementation is wrong, not the input.
    """
    exit_code = fc.EXIT_FAILURE


class ForgeVerificationError(ForgeError):
    exit_code = fc.EXIT_FAILURE
