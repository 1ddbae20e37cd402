"""citescape: citation-network clustering and interactive exploration."""

__version__ = "0.1.0"
