"""Exception types shared across the toolkit."""


class GallagherLabError(Exception):
    """Base class for all toolkit errors."""


class ParameterDomainError(GallagherLabError, ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class DegenerateInputError(GallagherLabError, ValueError):
    pass


class PreconditionError(GallagherLabError, ValueError):
    pass


class RangeCoverageError(GallagherLabError, IndexError):
    """An arithmetic-function table does not cover the integers an integral touches."""


class ResourceError(GallagherLabError, MemoryError):
    pass


class UnsupportedClosedFormError(GallagherLabError, TypeError):
    pass
