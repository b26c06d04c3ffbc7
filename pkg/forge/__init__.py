"""forge: q-bookpile graphs, their connectivity certificates and commonality of graphs over step graphons."""

__version__ = "1.0.0"
