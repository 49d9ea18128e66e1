class NeedleColorError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(NeedleColorError, ValueError):
    pass


class InvalidLatticeError(InvalidArgumentError):
    pass


class InvalidConstructionError(InvalidArgumentError):
    pass


class ResourceLimitError(NeedleColorError):
    """Raised when an exact search would exceed its configured budget."""


class NoInformationError(NeedleColorError, ValueError):
    """Raised when an estimate is too loose to support any inference."""
