"""Exception hierarchy shared by all modules."""


class OamSwiptError(Exception):
    """Base class for every error raised by this package."""


class DegenerateOrientation(OamSwiptError):
    """Tilt angles leave the array normal or its in-plane axes undefined."""


class InvalidGeometry(OamSwiptError):
    pass


class CoincidentElements(OamSwiptError):
    """Two elements that exchange a channel coefficient share a position."""


class DimensionMismatch(OamSwiptError, ValueError):
    pass


class ShapeMismatch(DimensionMismatch):
    """The trace algebra of the reflection subproblem needs N_t == N_r."""


class InvalidSplit(OamSwiptError, ValueError):
    """A power-splitting ratio lies outside [0, 1]."""


class SplitSaturated(OamSwiptError):
    """Some rho_l == 1, so the decoding branch receives no power."""


class ZeroDiagonal(OamSwiptError):
    pass


class SingularMse(OamSwiptError):
    pass


class ZeroHomogenizer(OamSwiptError):
    pass


class SolverDiverged(OamSwiptError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class Infeasible(OamSwiptError):
    """The harvested-power requirement cannot be met even with rho == 1."""


class ConfigError(OamSwiptError):
    pass
