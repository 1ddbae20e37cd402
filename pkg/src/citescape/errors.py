"""Shared exception types."""


class CitescapeError(Exception):
    """Base class for all citescape errors."""


class InputError(CitescapeError):
    """Bad user input: malformed files, invalid parameters, unknown ids."""


class EmptyTermMapError(InputError):
    """No term meets the occurrence threshold for a term map."""


class EmptyDrillError(CitescapeError):
    """A drill-down selection produced an empty publication set."""
