"""Noninertial transformations of extended phase space displacements.

The transformations preserving the nondegenerate metric form a unitary
group: real matrices Gamma with Gamma^T G Gamma = G that also commute with
the complex structure J pairing (t, e) and (q, p).  The entrywise
block-pattern statement of that pairing holds in coordinates where the
(e, p) block is rescaled; commutation with J is the coordinate-free version
and is what UnitaryElement validates.

The explicit one-dimensional transformation parameterized by a kinematic
state (v, f, r) is the primitive here.  Its matrix is extracted by applying
it to basis displacements, never assembled from a separate block formula.
The b -> infinity contraction keeps the (e, p) rows mixing into (t, q) but
removes the reciprocal back-reaction, leaving the special relativity factor.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    MetricViolationError,
    NonRotationError,
    NonTimelikeStateError,
)
from .phase_space_metrics import (
    Displacement,
    KinematicState,
    MetricSpec,
    gamma_factor,
    line_element,
)

DEFAULT_UNITARY_TOL = 1e-10


def minkowski_form(n: int, c: float = 1.0) -> np.ndarray:
    """Metric diag(1, -1/c^2 1_n) on (t, q) with t in plain time units."""
    diag = np.full(n + 1, -1.0 / c**2)
    diag[0] = 1.0
    return np.diag(diag)


def lorentz_boost(v, c: float = 1.0) -> np.ndarray:
    """Boost on (dt, dq) with velocity v, |v| < c.

    Satisfies Lambda^T eta Lambda = eta for eta = minkowski_form(n, c).
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    n = v.shape[0]
    speed2 = float(v @ v)
    if speed2 >= c**2:
        raise NonTimelikeStateError(f"boost speed |v|={np.sqrt(speed2)!r} must be below c={c!r}")
    gamma = 1.0 / np.sqrt(1.0 - speed2 / c**2)
    lam = np.eye(n + 1)
    lam[0, 0] = gamma
    lam[0, 1:] = gamma * v / c**2
    lam[1:, 0] = gamma * v
    if speed2 > 0.0:
        lam[1:, 1:] += (gamma - 1.0) * np.outer(v, v) / speed2
    return lam


def momentum_scale(n: int, c: float = 1.0) -> np.ndarray:
    """Diagonal map from a (p^0, p) four-momentum block to (e, p), e = c^2 p^0."""
    diag = np.ones(n + 1)
    diag[0] = c**2
    return np.diag(diag)


def complex_structure(n: int, c: float = 1.0, b: float = 1.0) -> np.ndarray:
    """The J with J^2 = -1 pairing t with e and q with p in canonical order."""
    j = np.zeros((2 * n + 2, 2 * n + 2))
    j[0, n + 1] = -1.0 / (b * c)
    j[n + 1, 0] = b * c
    for i in range(n):
        j[1 + i, n + 2 + i] = -c / b
        j[n + 2 + i, 1 + i] = b / c
    return j


@dataclass(frozen=True)
class UnitaryElement:
    """A metric-preserving transformation on (dt, dq, de, dp) vectors."""

    Gamma: np.ndarray
    c: float = 1.0
    b: float = 1.0
    tol: float = field(default=DEFAULT_UNITARY_TOL, compare=False)

    def __post_init__(self):
        g = np.asarray(self.Gamma, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 4 or g.shape[0] % 2 != 0:
            raise DimensionMismatchError("Gamma must be square of size 2n+2 with n >= 1")
        if not np.all(np.isfinite(g)):
            raise ValueError("Gamma must be finite")
        n = g.shape[0] // 2 - 1
        metric = MetricSpec.born(n, self.c, self.b).matrix()
        invariance = float(np.max(np.abs(g.T @ metric @ g - metric)))
        if invariance > self.tol:
            raise MetricViolationError(
                f"Gamma does not preserve the metric (residual {invariance:.3e} > tol {self.tol:.3e})"
            )
        j = complex_structure(n, self.c, self.b)
        linearity = float(np.max(np.abs(g @ j - j @ g)))
        if linearity > self.tol:
            raise MetricViolationError(
                f"Gamma does not commute with the complex structure (residual {linearity:.3e})"
            )
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "Gamma", g)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "b", float(self.b))

    @property
    def n(self):
        return self.Gamma.shape[0] // 2 - 1

    def inverse(self):
        return UnitaryElement(np.linalg.inv(self.Gamma), self.c, self.b, tol=self.tol)


def unitary_apply(u: UnitaryElement, d: Displacement) -> Displacement:
    if u.n != d.n:
        raise DimensionMismatchError(f"transform n={u.n} does not match displacement n={d.n}")
    return Displacement.from_vector(u.Gamma @ d.vector())


def unitary_from_lorentz(lam, c: float = 1.0, b: float = 1.0, tol: float = DEFAULT_UNITARY_TOL) -> UnitaryElement:
    """Inertial element acting as Lambda on (t, q) and its momentum copy on (e, p)."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 2 or lam.shape[0] != lam.shape[1] or lam.shape[0] < 2:
        raise DimensionMismatchError("Lambda must be square of size n+1 with n >= 1")
    n = lam.shape[0] - 1
    eta = minkowski_form(n, c)
    residual = float(np.max(np.abs(lam.T @ eta @ lam - eta)))
    if residual > tol:
        raise MetricViolationError(
            f"Lambda is not a Lorentz transformation (residual {residual:.3e} > tol {tol:.3e})"
        )
    s = momentum_scale(n, c)
    gamma = np.zeros((2 * n + 2, 2 * n + 2))
    gamma[0 : n + 1, 0 : n + 1] = lam
    gamma[n + 1 :, n + 1 :] = s @ lam @ np.linalg.inv(s)
    return UnitaryElement(gamma, c, b, tol=tol)


def explicit_transform(s: KinematicState, d: Displacement, c: float = 1.0, b: float = 1.0) -> Displacement:
    """The one-dimensional noninertial displacement transformation.

    All four coordinates mix: velocity pairs (t, q) and (e, p), force pairs
    (t, p) and (q, e), power pairs (t, e) and (q, p).  The factor gamma uses
    the full (v, f, r) radicand, so the state must be timelike.
    """
    if s.n != 1 or d.n != 1:
        raise DimensionMismatchError("the explicit transformation is defined for n = 1")
    gamma = gamma_factor(s, c, b)
    v, f, r = s.v[0], s.f[0], s.r
    dt, dq, de, dp = d.dt, d.dq[0], d.de, d.dp[0]
    dt_new = gamma * (dt + (v / c**2) * dq + (f / b**2) * dp - (r / (b**2 * c**2)) * de)
    dq_new = gamma * (dq + v * dt + (r / b**2) * dp - (f / b**2) * de)
    dp_new = gamma * (dp + f * dt - (r / c**2) * dq + (v / c**2) * de)
    de_new = gamma * (de + v * dp - f * dq + r * dt)
    return Displacement(dt_new, [dq_new], de_new, [dp_new])


def unitary_from_state(s: KinematicState, c: float = 1.0, b: float = 1.0, tol: float = DEFAULT_UNITARY_TOL) -> UnitaryElement:
    """Matrix of explicit_transform, read off by transforming basis displacements.

    Construction re-checks metric invariance, so every state transformation
    is certified as a group element on the way out.
    """
    cols = []
    for k in range(4):
        vec = np.zeros(4)
        vec[k] = 1.0
        cols.append(explicit_transform(s, Displacement.from_vector(vec), c, b).vector())
    return UnitaryElement(np.column_stack(cols), c, b, tol=tol)


def born_invariance_residual(
    s: KinematicState, c: float = 1.0, b: float = 1.0, trials: int = 64, seed: int = 0
) -> float:
    """Max |ds^2(transformed) - ds^2(original)| over seeded random displacements."""
    rng = np.random.default_rng(seed)
    metric = MetricSpec.born(1, c, b)
    worst = 0.0
    for _ in range(int(trials)):
        d = Displacement(
            rng.standard_normal(), rng.standard_normal(1), rng.standard_normal(), rng.standard_normal(1)
        )
        before = line_element(metric, d)
        after = line_element(metric, explicit_transform(s, d, c, b))
        worst = max(worst, abs(after - before))
    return worst


def contraction_limit_matrix(s: KinematicState, c: float = 1.0) -> np.ndarray:
    """Large-b limit of the state transformation matrix.

    The (t, q) rows lose their (e, p) couplings and the factor becomes the
    velocity-only one; the (e, p) rows keep the full force and power mixing.
    The result is block-triangular: inertial on top, affine below.
    """
    if s.n != 1:
        raise DimensionMismatchError("the explicit transformation is defined for n = 1")
    v, f, r = s.v[0], s.f[0], s.r
    if v**2 >= c**2:
        raise NonTimelikeStateError(f"limit factor undefined at |v| >= c (v={v!r})")
    gamma = 1.0 / np.sqrt(1.0 - v**2 / c**2)
    rows = np.array(
        [
            [1.0, v / c**2, 0.0, 0.0],
            [v, 1.0, 0.0, 0.0],
            [r, -f, 1.0, v],
            [f, -r / c**2, v / c**2, 1.0],
        ]
    )
    return gamma * rows


def contract_b(s: KinematicState, d: Displacement, c: float, b_values):
    """Evaluate the transformation along increasing b and its limit form.

    Returns (transformed displacements, limit displacement).  Deviations from
    the limit scale as 1/b^2.
    """
    b_values = [float(b) for b in b_values]
    if any(b <= 0 for b in b_values):
        raise ValueError("b values must be positive")
    if any(b2 <= b1 for b1, b2 in zip(b_values, b_values[1:])):
        raise ValueError("b values must be strictly increasing")
    transformed = [explicit_transform(s, d, c, b) for b in b_values]
    limit = Displacement.from_vector(contraction_limit_matrix(s, c) @ d.vector())
    return transformed, limit


@dataclass(frozen=True)
class HamiltonGroupElement:
    """Rotation plus velocity, force, and power offsets acting on displacements."""

    R: np.ndarray
    v: np.ndarray
    f: np.ndarray
    r: float = 0.0
    tol: float = field(default=1e-9, compare=False)

    def __post_init__(self):
        rmat = np.asarray(self.R, dtype=float)
        v = np.asarray(self.v, dtype=float).reshape(-1)
        f = np.asarray(self.f, dtype=float).reshape(-1)
        n = v.shape[0]
        if rmat.shape != (n, n) or f.shape != (n,) or n < 1:
            raise DimensionMismatchError("R, v, f sizes must agree")
        if not (np.all(np.isfinite(rmat)) and np.all(np.isfinite(v)) and np.all(np.isfinite(f))):
            raise ValueError("entries must be finite")
        orthogonality = float(np.max(np.abs(rmat.T @ rmat - np.eye(n))))
        if orthogonality > self.tol or np.linalg.det(rmat) < 0:
            raise NonRotationError(
                f"R is not a proper rotation (orthogonality residual {orthogonality:.3e}, det {np.linalg.det(rmat):.3e})"
            )
        rmat = rmat.copy()
        rmat.setflags(write=False)
        v = v.copy()
        v.setflags(write=False)
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "R", rmat)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "r", float(self.r))

    @property
    def n(self):
        return self.v.shape[0]

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros(n), np.zeros(n), 0.0)


def hamilton_transform(g: HamiltonGroupElement, d: Displacement) -> Displacement:
    """Absolute-time transformation: rotate dq and dp, shift by rates, keep dt.

    de picks up v . dp - f . dq + r dt with the unrotated dq and dp, the
    classical counterpart of the energy mixing of explicit_transform.  With
    f = 0 and r = 0 this is the inertial Euclidean form de + v . dp.
    """
    if g.n != d.n:
        raise DimensionMismatchError(f"transform n={g.n} does not match displacement n={d.n}")
    dq_new = g.R @ d.dq + g.v * d.dt
    dp_new = g.R @ d.dp + g.f * d.dt
    de_new = d.de + float(g.v @ d.dp) - float(g.f @ d.dq) + g.r * d.dt
    return Displacement(d.dt, dq_new, de_new, dp_new)


def is_lorentz_subgroup(u: UnitaryElement, tol: float = DEFAULT_UNITARY_TOL) -> bool:
    """True when the (t,q)/(e,p) mixing blocks vanish and the top block is a boost."""
    n = u.n
    g = u.Gamma
    mixing = max(
        float(np.max(np.abs(g[0 : n + 1, n + 1 :]))),
        float(np.max(np.abs(g[n + 1 :, 0 : n + 1]))),
    )
    if mixing > tol:
        return False
    lam = g[0 : n + 1, 0 : n + 1]
    eta = minkowski_form(n, u.c)
    return float(np.max(np.abs(lam.T @ eta @ lam - eta))) <= tol
