"""Exception hierarchy. Each class maps to a CLI exit code."""


class GPosetError(Exception):
    exit_code = 2


class InvalidInputError(GPosetError, ValueError):
    """Malformed or mathematically invalid input (exit code 2)."""


class PreconditionError(InvalidInputError):
    """An operation was called on an object outside its domain."""


class NoSharedElementError(PreconditionError):
    """Two cyclic subgroups intersect trivially, so no product path exists."""


class ResourceGuardError(GPosetError):
    """A size guard refused to build or search an instance (exit code 3)."""

    exit_code = 3
