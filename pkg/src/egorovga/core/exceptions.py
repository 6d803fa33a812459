class EgorovError(Exception):
    """Base exception for egorov-ga."""


class ScalarError(EgorovError):
    pass


class DivisionByZeroError(ScalarError, ZeroDivisionError):
    pass


class NotOrderedError(ScalarError):
    """Comparison requested on a scalar with a nonzero imaginary part."""


class NotFiniteError(ScalarError):
    """Standard part requested for an infinitely large scalar."""


class DomainError(EgorovError):
    pass


class OutsideDomainError(DomainError):
    pass


class EmptyDomainError(DomainError):
    pass


class DimensionMismatchError(DomainError):
    pass


class NotSubdomainError(DomainError):
    pass


class KernelError(EgorovError):
    pass


class ConditioningError(KernelError):
    pass


class QuadratureError(EgorovError):
    pass


class UnsupportedTermError(EgorovError):
    pass


class ConfigurationError(EgorovError):
    pass


class ScenarioError(EgorovError):
    pass


class ReportingError(EgorovError):
    pass
