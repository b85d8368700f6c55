"""Exception hierarchy shared across the package."""


class QutilError(Exception):
    """Base class for all package errors."""


class ParameterArityError(QutilError, ValueError):
    pass


class UnsupportedGateError(QutilError, ValueError):
    pass


class UnsupportedTranslationError(QutilError, ValueError):
    pass


class CapacityError(QutilError, ValueError):
    """Circuit (or verifier request) is wider than the target allows."""


class ConfigurationError(QutilError, ValueError):
    pass


class ConsistencyError(QutilError, ValueError):
    pass


class RenderError(QutilError, RuntimeError):
    pass
