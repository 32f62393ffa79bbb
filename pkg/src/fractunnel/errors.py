"""Exception hierarchy shared by the library and the command line."""


class FractunnelError(Exception):
    """Base class. ``param`` names the offending input when there is one."""

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class ParameterError(FractunnelError, ValueError):
    pass


class AlphaOutOfRange(ParameterError):
    pass


class NonPositive(ParameterError):
    pass


class NegativeWidth(ParameterError):
    pass


class EnergyAtBarrierTop(ParameterError):
    """E == V: the decay wavenumber vanishes and eps diverges."""


class RegimeMismatch(ParameterError):
    pass


class AsymptoteNotValid(FractunnelError):
    pass


class InvalidRange(FractunnelError, ValueError):
    pass


class StencilOutOfDomain(FractunnelError, ValueError):
    pass


class NoInteriorMaximum(FractunnelError):
    pass


class BracketTooNarrow(FractunnelError, ValueError):
    pass


class ConfigError(FractunnelError, ValueError):
    pass


class UnknownKey(ConfigError):
    pass


class MalformedLine(ConfigError):
    def __init__(self, message, lineno):
        super().__init__(message)
        self.lineno = lineno
