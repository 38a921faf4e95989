"""Exception hierarchy shared by the library and the CLI."""


class PosetMineError(Exception):
    """Base class for all library errors."""


class InvalidElementError(PosetMineError, ValueError):
    """A coordinate is not an element of its factor poset."""


class PosetStructureError(PosetMineError, ValueError):
    """A factor poset violates its structural invariants."""


class NotDualizableError(PosetMineError):
    """A factor has no unique maximum, so its dual has no bottom."""


class PreconditionError(PosetMineError, ValueError):
    """Inputs violate an operation's precondition."""


class ResourceLimitError(PosetMineError):
    """A configured resource cap (width, depth, space size) was exceeded."""


class DecodeError(PosetMineError):
    """A lattice node cannot be decoded into a concrete interval."""


class IngestError(PosetMineError, ValueError):
    """Input data could not be parsed. Carries the offending row/column."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
