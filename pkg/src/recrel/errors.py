"""Exception types shared across the package.

The CLI maps all of these to exit code 2 (usage / impossible input) except
where a command explicitly converts a residual into a pass/fail verdict.
"""


class RecrelError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(RecrelError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class DecompositionError(RecrelError, ValueError):
    """A matrix does not decompose into the expected coordinate pattern.

    Raised when the residual between a matrix and its reconstruction from
    extracted coordinates exceeds the decomposition tolerance.
    """


class SymplecticViolationError(RecrelError, ValueError):
    """A matrix required to be symplectic fails A^T zeta A = zeta."""


class NonTimelikeStateError(RecrelError, ValueError):
    """Kinematic state lies on or outside the causal cone (gamma undefined)."""


class NoNullVelocityError(RecrelError, ValueError):
    """No real null velocity exists for the given force and power inputs."""


class NonRotationError(RecrelError, ValueError):
    """A matrix required to be a proper rotation is not one."""


class MetricViolationError(RecrelError, ValueError):
    """A matrix fails to preserve the metric (or block structure) it must."""


class IntegrationFailureError(RecrelError, RuntimeError):
    """Numerical flow integration produced a non-finite value.

    Carries the last finite state reached so callers can inspect where the
    trajectory left the valid domain.
    """

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state
