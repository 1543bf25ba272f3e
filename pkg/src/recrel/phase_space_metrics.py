"""Line elements on extended phase space and their causal structure.

Coordinates are always ordered (t, q^1..q^n, e, p^1..p^n).  Three metric
kinds are supported on that space:

  born       diag(1, -1/c^2 1_n, 1/(b^2 c^2), -1/b^2 1_n), nondegenerate
  minkowski  diag(1, -1/c^2 1_n, 0, 0_n), the b -> infinity limit
  newton     diag(1, 0, ..., 0), the additional c -> infinity limit

c is a speed scale (length/time) and b a force scale (momentum/time); both
are plain positive reals, natural units c = b = 1 by default.  A state
moving with velocity v, force f, and power r sweeps the displacement
(dt, v dt, r dt, f dt), which turns the squared interval into
dt^2 (1 - v^2/c^2 - f^2/b^2 + r^2/(c^2 b^2)) and makes the interior of the
null hypersurface the domain of the time-dilation factor.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonTimelikeStateError,
    NoNullVelocityError,
)

DEFAULT_NULL_TOL = 1e-10

_KINDS = ("born", "minkowski", "newton")


def _finite_vector(x, name):
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise DimensionMismatchError(f"{name} must have length >= 1")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    v = v.copy()
    v.setflags(write=False)
    return v


def _finite_scalar(x, name):
    v = float(x)
    if not np.isfinite(v):
        raise ValueError(f"{name} must be finite")
    return v


@dataclass(frozen=True)
class MetricSpec:
    """One of the three extended phase space metrics with its matrix."""

    kind: str
    n: int = 1
    c: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        n = int(self.n)
        if n < 1:
            raise DimensionMismatchError("n must be a positive integer")
        c = _finite_scalar(self.c, "c")
        b = _finite_scalar(self.b, "b")
        if kind in ("born", "minkowski") and c <= 0:
            raise ValueError("c must be positive")
        if kind == "born" and b <= 0:
            raise ValueError("b must be positive")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)

    @classmethod
    def born(cls, n=1, c=1.0, b=1.0):
        return cls("born", n, c, b)

    @classmethod
    def minkowski(cls, n=1, c=1.0):
        return cls("minkowski", n, c)

    @classmethod
    def newton(cls, n=1):
        return cls("newton", n)

    def matrix(self) -> np.ndarray:
        n, c, b = self.n, self.c, self.b
        diag = np.zeros(2 * n + 2)
        diag[0] = 1.0
        if self.kind in ("born", "minkowski"):
            diag[1 : n + 1] = -1.0 / c**2
        if self.kind == "born":
            diag[n + 1] = 1.0 / (b**2 * c**2)
            diag[n + 2 :] = -1.0 / b**2
        return np.diag(diag)


@dataclass(frozen=True)
class Displacement:
    """Extended phase space displacement (dt, dq, de, dp)."""

    dt: float
    dq: np.ndarray
    de: float
    dp: np.ndarray

    def __post_init__(self):
        dq = _finite_vector(self.dq, "dq")
        dp = _finite_vector(self.dp, "dp")
        if dq.shape != dp.shape:
            raise DimensionMismatchError("dq and dp must have the same length")
        object.__setattr__(self, "dt", _finite_scalar(self.dt, "dt"))
        object.__setattr__(self, "dq", dq)
        object.__setattr__(self, "de", _finite_scalar(self.de, "de"))
        object.__setattr__(self, "dp", dp)

    @property
    def n(self):
        return self.dq.shape[0]

    def vector(self) -> np.ndarray:
        """Coordinates in the canonical (dt, dq, de, dp) order."""
        return np.concatenate([[self.dt], self.dq, [self.de], self.dp])

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float).reshape(-1)
        if vec.size < 4 or vec.size % 2 != 0:
            raise DimensionMismatchError("vector length must be 2n+2 with n >= 1")
        n = (vec.size - 2) // 2
        return cls(vec[0], vec[1 : n + 1], vec[n + 1], vec[n + 2 :])


@dataclass(frozen=True)
class KinematicState:
    """Velocity, force, and power of a noninertial state."""

    v: np.ndarray
    f: np.ndarray
    r: float = 0.0

    def __post_init__(self):
        v = _finite_vector(self.v, "v")
        f = _finite_vector(self.f, "f")
        if v.shape != f.shape:
            raise DimensionMismatchError("v and f must have the same length")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "r", _finite_scalar(self.r, "r"))

    @property
    def n(self):
        return self.v.shape[0]

    def displacement(self, dt=1.0) -> Displacement:
        """Displacement swept in coordinate time dt: (dt, v dt, r dt, f dt)."""
        dt = _finite_scalar(dt, "dt")
        return Displacement(dt, self.v * dt, self.r * dt, self.f * dt)


def line_element(m: MetricSpec, d: Displacement) -> float:
    """Squared interval d^T G d."""
    if m.n != d.n:
        raise DimensionMismatchError(f"metric n={m.n} does not match displacement n={d.n}")
    vec = d.vector()
    return float(vec @ m.matrix() @ vec)


def interval_class(m: MetricSpec, d: Displacement, tol: float = DEFAULT_NULL_TOL) -> str:
    """Classify a displacement as timelike, null, or spacelike.

    |ds^2| <= tol maps to null; the sign decides otherwise.
    """
    ds2 = line_element(m, d)
    if abs(ds2) <= tol:
        return "null"
    return "timelike" if ds2 > 0 else "spacelike"


def null_surface_residual(s: KinematicState, c: float = 1.0, b: float = 1.0) -> float:
    """1 - v^2/c^2 - f^2/b^2 + r^2/(c^2 b^2); zero on the null hypersurface."""
    v2 = float(s.v @ s.v)
    f2 = float(s.f @ s.f)
    return 1.0 - v2 / c**2 - f2 / b**2 + s.r**2 / (c**2 * b**2)


def gamma_factor(s: KinematicState, c: float = 1.0, b: float = 1.0) -> float:
    """Time-dilation factor 1/sqrt(1 - v^2/c^2 - f^2/b^2 + r^2/(c^2 b^2)).

    Unlike the velocity-only factor this can drop below 1: power raises the
    radicand above 1 while velocity and force lower it.
    """
    residual = null_surface_residual(s, c, b)
    if residual <= 0.0:
        raise NonTimelikeStateError(
            f"state lies on or outside the null hypersurface (1/gamma^2 = {residual:.6e})"
        )
    return 1.0 / np.sqrt(residual)


def mass_rate_squared(s: KinematicState, c: float = 1.0) -> float:
    """Signed squared mass drift rate (r^2/c^2 - f^2)/c^2.

    Negative values mean the (de, dp) part of the swept displacement is
    spacelike; callers take the square root only when nonnegative.
    """
    f2 = float(s.f @ s.f)
    return (s.r**2 / c**2 - f2) / c**2


def proper_time_rate_squared(d: Displacement, c: float = 1.0) -> float:
    """Squared proper-time interval dt^2 - dq^2/c^2 of the (t, q) part."""
    return d.dt**2 - float(d.dq @ d.dq) / c**2


def mass_interval_squared(d: Displacement, c: float = 1.0) -> float:
    """Signed squared mass interval de^2/c^4 - dp^2/c^2 of the (e, p) part.

    The full squared interval splits as ds^2 = dtau^2 + (c^2/b^2) dmu^2.
    """
    return d.de**2 / c**4 - float(d.dp @ d.dp) / c**2


NULL_SPEED_DISCREPANCY_NOTE = (
    "At f = 0, r = 2bc the null-surface speed is +-sqrt(5) c: the radicand "
    "1 - f^2/b^2 + r^2/(c^2 b^2) evaluates to 1 + 4 = 5. A value of +-2c is "
    "sometimes quoted for this reference point; it would require dropping "
    "the leading 1 from the radicand and does not satisfy ds^2 = 0 for the "
    "line element used here, so this library reports +-sqrt(5) c."
)


def null_velocity(f_mag: float, r: float, c: float = 1.0, b: float = 1.0):
    """Speeds (+v, -v) on the null hypersurface at given force magnitude and power.

    v = +- c sqrt(1 - f^2/b^2 + r^2/(c^2 b^2)).  At f = 0 the speed exceeds c
    whenever r != 0 and is unbounded in r; at r = 0 it shrinks to zero as f
    approaches b.  For the r = 2bc reference point see
    NULL_SPEED_DISCREPANCY_NOTE.
    """
    radicand = 1.0 - f_mag**2 / b**2 + r**2 / (c**2 * b**2)
    if radicand < 0.0:
        raise NoNullVelocityError(
            f"no real null-surface speed at |f|={f_mag!r}, r={r!r} (radicand {radicand:.6e})"
        )
    v = c * float(np.sqrt(radicand))
    return (v, -v)


def null_cone_angles(count: int) -> np.ndarray:
    """The angle grid used by null_cone_sample: count points uniform in [0, 2 pi)."""
    count = int(count)
    if count < 1:
        raise ValueError("count must be >= 1")
    return 2.0 * np.pi * np.arange(count) / count


def null_cone_sample(r: float, c: float = 1.0, b: float = 1.0, count: int = 16):
    """Points (v, f) on the null cone v^2/c^2 + f^2/b^2 = 1 + r^2/(c^2 b^2).

    Parameterized uniformly in angle over null_cone_angles(count); every
    point satisfies the null condition to rounding.
    """
    scale = np.sqrt(1.0 + r**2 / (c**2 * b**2))
    return [
        (c * scale * np.cos(angle), b * scale * np.sin(angle))
        for angle in null_cone_angles(count)
    ]
