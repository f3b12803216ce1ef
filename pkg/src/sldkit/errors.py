"""Exception hierarchy shared by every sldkit module.

The CLI maps these onto exit codes (validation 2, numeric 3, I/O 4) and the
HTTP service maps them onto status codes, so raising the right class matters.
"""


class SldError(Exception):
    """Base class for all sldkit errors."""


class InvalidGeometryError(SldError):
    """Tool geometry violates its invariants (non-positive dimension, overhang too long, ...)."""


class InvalidInputError(SldError):
    """An argument or document violates a precondition or invariant."""


class ParseError(InvalidInputError):
    """A document could not be parsed; message names the offending row/field."""

    def __init__(self, message: str, *, row: int | None = None, field: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.field = field


class NotFoundError(SldError):
    """A referenced entity (material, file, cached computation) does not exist."""


class NumericError(SldError):
    """A numerical procedure failed to meet its accuracy contract."""


class OutOfRangeError(InvalidInputError):
    """A query point lies outside the computed speed window."""
