"""Exception hierarchy shared by the numerical and combinatorial layers."""


class MonodromyError(Exception):
    """Base class for every failure raised by this package."""


# polynomial kernel
class NonConvergence(MonodromyError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class DerivativeVanishes(MonodromyError):
    pass


class IllConditioned(MonodromyError):
    pass


class ResidualTooLarge(MonodromyError):
    pass


# pencil
class DegenerateConfig(MonodromyError):
    pass


class DegreeViolation(MonodromyError):
    pass


# tracking
class TrackingError(MonodromyError):
    pass


class StepUnderflow(TrackingError):
    pass


class AmbiguousMatch(TrackingError):
    pass


class BranchTooClose(TrackingError):
    pass


class SimultaneousCrossing(TrackingError):
    pass


# surface model
class SurfaceError(MonodromyError):
    pass


class BasisArcsCross(SurfaceError):
    pass


class NonAdjacentCollision(SurfaceError):
    pass


class UnequalLocalMonodromy(SurfaceError):
    pass


class NotTransitive(SurfaceError):
    pass


class EulerMismatch(SurfaceError):
    pass


class RankMismatch(SurfaceError):
    pass


class NotClosed(SurfaceError):
    pass


class LiftMismatch(SurfaceError):
    pass


class NullClass(SurfaceError):
    pass


# symplectic layer
class FormViolation(MonodromyError):
    pass


class NeverCloses(MonodromyError):
    pass


class ExplosionGuard(MonodromyError):
    pass


class ConfigError(MonodromyError):
    pass
