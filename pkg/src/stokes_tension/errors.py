"""Exception and warning types raised by the solver."""


class StokesTensionError(Exception):
    """Base class for all errors raised by this package."""


class CurveError(StokesTensionError, ValueError):
    pass


class ZeroSpeed(CurveError):
    """The parametrization degenerates: ``|dX/dtheta|`` vanishes somewhere."""


class SelfIntersecting(CurveError):
    """The discrete star norm is (numerically) zero."""


class Orientation(CurveError):
    """The curve is traversed clockwise; counter-clockwise is required."""


class SingularPoint(StokesTensionError, ValueError):
    """A free-space kernel was evaluated at ``r = 0``."""


class TooCloseToInterface(StokesTensionError, ValueError):
    """Target point lies inside the near-field band where plain trapezoid is inaccurate."""


class NumericalError(StokesTensionError):
    pass


class SingularOperator(NumericalError):
    """The tension operator has a nullspace (circle) and the plain solve was requested."""


class NotSingular(NumericalError):
    """A nullspace vector was requested for an invertible operator."""


class ConfigError(StokesTensionError, ValueError):
    pass


class IllConditioned(UserWarning):
    """Near-circular interface: the tension solve is ill-conditioned."""
