"""Hamiltonian flows on extended phase space and their Jacobian structure.

The flow advances (t, q, e, p) by t-dot = 1, q-dot = dH/dp, e-dot = dH/dt,
p-dot = -dH/dq.  Its time-step Jacobians preserve the two-form
-de ^ dt + dp ^ dq and fix the dt row, and the displacement rates over a
short step read back the gradient of H: velocity, power, and force slots.

The finite energy map e -> e + H is realized infinitesimally as
e-dot = dH/dt along trajectories; for time-independent H the energy
coordinate is then exactly constant, including in floating point, because
the integrator adds literal zeros.

Integration is classic fixed-step fourth order.  A symplectic integrator is
deliberately not used: the object under test is the Jacobian of the exact
flow, so the step count is chosen to push truncation error below the
verification tolerance instead of conserving a shadow Hamiltonian.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, IntegrationFailureError
from .phase_space_metrics import Displacement

DEFAULT_FD_STEP = 1e-6
DEFAULT_JACOBIAN_STEP = 1e-5


@dataclass(frozen=True)
class ExtendedState:
    """A point (t, q, e, p) of extended phase space."""

    t: float
    q: np.ndarray
    e: float
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(-1)
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if q.shape != p.shape or q.size == 0:
            raise DimensionMismatchError("q and p must be same-length nonempty vectors")
        if not (
            np.isfinite(self.t)
            and np.isfinite(self.e)
            and np.all(np.isfinite(q))
            and np.all(np.isfinite(p))
        ):
            raise ValueError("state entries must be finite")
        q = q.copy()
        q.setflags(write=False)
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "e", float(self.e))
        object.__setattr__(self, "p", p)

    @property
    def n(self):
        return self.q.shape[0]

    def vector(self) -> np.ndarray:
        return np.concatenate([[self.t], self.q, [self.e], self.p])

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float).reshape(-1)
        n = (vec.size - 2) // 2
        return cls(vec[0], vec[1 : n + 1], vec[n + 1], vec[n + 2 :])


class HamiltonianSystem:
    """A scalar H(p, q, t) with gradient access.

    The callable takes (p, q, t) with p and q as length-n arrays.  When
    grad is given it must return (dH/dp, dH/dq, dH/dt) with the same
    conventions; otherwise central finite differences with a magnitude-scaled
    step stand in.  fd_gradients is always available regardless, so analytic
    claims can be cross-checked.
    """

    def __init__(self, h, n=1, grad=None, fd_step=DEFAULT_FD_STEP):
        self._h = h
        self.n = int(n)
        if self.n < 1:
            raise DimensionMismatchError("n must be positive")
        self._grad = grad
        self.fd_step = float(fd_step)

    def value(self, p, q, t) -> float:
        out = float(self._h(np.asarray(p, dtype=float), np.asarray(q, dtype=float), float(t)))
        return out

    def fd_gradients(self, p, q, t, step=None):
        """Central-difference (dH/dp, dH/dq, dH/dt), step scaled per coordinate."""
        p = np.asarray(p, dtype=float).reshape(-1)
        q = np.asarray(q, dtype=float).reshape(-1)
        base = self.fd_step if step is None else float(step)
        dp = np.empty_like(p)
        for i in range(p.size):
            h = base * max(1.0, abs(p[i]))
            probe = p.copy()
            probe[i] = p[i] + h
            hi = self._h(probe, q, t)
            probe[i] = p[i] - h
            lo = self._h(probe, q, t)
            dp[i] = (hi - lo) / (2.0 * h)
        dq = np.empty_like(q)
        for i in range(q.size):
            h = base * max(1.0, abs(q[i]))
            probe = q.copy()
            probe[i] = q[i] + h
            hi = self._h(p, probe, t)
            probe[i] = q[i] - h
            lo = self._h(p, probe, t)
            dq[i] = (hi - lo) / (2.0 * h)
        ht = base * max(1.0, abs(t))
        dt = (self._h(p, q, t + ht) - self._h(p, q, t - ht)) / (2.0 * ht)
        return dp, dq, float(dt)

    def gradients(self, p, q, t):
        if self._grad is not None:
            dp, dq, dt = self._grad(np.asarray(p, dtype=float), np.asarray(q, dtype=float), float(t))
            return np.asarray(dp, dtype=float).reshape(-1), np.asarray(dq, dtype=float).reshape(-1), float(dt)
        return self.fd_gradients(p, q, t)

    @property
    def has_analytic_gradients(self):
        return self._grad is not None

    def gradient_check(self, seed=0, probes=8, scale=1.0) -> float:
        """Max relative deviation between analytic and finite-difference gradients."""
        if self._grad is None:
            return 0.0
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(int(probes)):
            p = scale * rng.standard_normal(self.n)
            q = scale * rng.standard_normal(self.n)
            t = scale * rng.standard_normal()
            ap, aq, at = self.gradients(p, q, t)
            fp, fq, ft = self.fd_gradients(p, q, t)
            ref = max(1.0, np.max(np.abs(ap)), np.max(np.abs(aq)), abs(at))
            dev = max(np.max(np.abs(ap - fp)), np.max(np.abs(aq - fq)), abs(at - ft))
            worst = max(worst, dev / ref)
        return worst


def _parse_exponents(key):
    if isinstance(key, str):
        parts = [int(x) for x in key.split(",")]
    else:
        parts = [int(x) for x in key]
    if len(parts) != 3 or any(x < 0 for x in parts):
        raise ValueError(f"exponent key must be three nonnegative integers, got {key!r}")
    return tuple(parts)


class PolynomialHamiltonian:
    """H(p, q, t) = sum of coeff * p^a q^b t^d over exponent triples (a, b, d).

    One spatial dimension.  Keys may be (a, b, d) tuples or "a,b,d" strings,
    the form used by coefficient files.
    """

    def __init__(self, coefficients):
        terms = {}
        for key, val in dict(coefficients).items():
            exps = _parse_exponents(key)
            val = float(val)
            if not np.isfinite(val):
                raise ValueError("coefficients must be finite")
            terms[exps] = terms.get(exps, 0.0) + val
        self.terms = dict(sorted(terms.items()))

    def value(self, p, q, t):
        p = float(np.asarray(p).reshape(-1)[0])
        q = float(np.asarray(q).reshape(-1)[0])
        total = 0.0
        for (a, bdeg, d), coeff in self.terms.items():
            total += coeff * p**a * q**bdeg * t**d
        return total

    def gradients(self, p, q, t):
        p = float(np.asarray(p).reshape(-1)[0])
        q = float(np.asarray(q).reshape(-1)[0])
        dp = dq = dt = 0.0
        for (a, bdeg, d), coeff in self.terms.items():
            if a > 0:
                dp += coeff * a * p ** (a - 1) * q**bdeg * t**d
            if bdeg > 0:
                dq += coeff * bdeg * p**a * q ** (bdeg - 1) * t**d
            if d > 0:
                dt += coeff * d * p**a * q**bdeg * t ** (d - 1)
        return np.array([dp]), np.array([dq]), dt

    def system(self) -> HamiltonianSystem:
        return HamiltonianSystem(
            lambda p, q, t: self.value(p, q, t), n=1, grad=lambda p, q, t: self.gradients(p, q, t)
        )


PRESET_SYSTEMS = {
    "free": {"2,0,0": 0.5},
    "harmonic": {"2,0,0": 0.5, "0,2,0": 0.5},
    "driven": {"2,0,0": 0.5, "0,2,0": 0.5, "0,1,1": 0.1},
}


def preset_system(name: str) -> HamiltonianSystem:
    if name not in PRESET_SYSTEMS:
        raise ValueError(f"unknown system {name!r}; choose from {sorted(PRESET_SYSTEMS)}")
    return PolynomialHamiltonian(PRESET_SYSTEMS[name]).system()


def two_form_matrix(n: int) -> np.ndarray:
    """Matrix of -de ^ dt + dp ^ dq in the canonical (t, q, e, p) order."""
    omega = np.zeros((2 * n + 2, 2 * n + 2))
    omega[0, n + 1] = 1.0
    omega[n + 1, 0] = -1.0
    for i in range(n):
        omega[n + 2 + i, 1 + i] = 1.0
        omega[1 + i, n + 2 + i] = -1.0
    return omega


def symplectic_two_form(d1: Displacement, d2: Displacement) -> float:
    """-(de1 dt2 - dt1 de2) + sum_i (dp1_i dq2^i - dq1^i dp2_i)."""
    if d1.n != d2.n:
        raise DimensionMismatchError("displacements must have the same n")
    return float(d1.vector() @ two_form_matrix(d1.n) @ d2.vector())


def _flow_field(sys, y, n, out):
    dp, dq, dt = sys.gradients(y[n + 2 :], y[1 : n + 1], y[0])
    out[0] = 1.0
    out[1 : n + 1] = dp
    out[n + 1] = dt
    out[n + 2 :] = -dq
    return out


def _integrate_vector(sys, y0, t1, steps):
    n = sys.n
    y = y0.copy()
    h = t1 / steps
    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    for _ in range(steps):
        _flow_field(sys, y, n, k1)
        _flow_field(sys, y + 0.5 * h * k1, n, k2)
        _flow_field(sys, y + 0.5 * h * k2, n, k3)
        _flow_field(sys, y + h * k3, n, k4)
        step = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(step)):
            raise IntegrationFailureError(
                "flow left the finite domain", last_state=ExtendedState.from_vector(y)
            )
        y = y + step
    return y


def integrate_flow(sys: HamiltonianSystem, z0: ExtendedState, t1: float, steps: int = 1000) -> ExtendedState:
    """Advance the state by elapsed time t1 in the given number of steps."""
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if sys.n != z0.n:
        raise DimensionMismatchError(f"system n={sys.n} does not match state n={z0.n}")
    return ExtendedState.from_vector(_integrate_vector(sys, z0.vector(), float(t1), steps))


@dataclass(frozen=True)
class FlowJacobian:
    """Jacobian of the elapsed-time flow map, with its base and endpoint.

    midpoint is the state at half the elapsed time under the same flow; it
    lets later checks estimate how curved the trajectory is without access
    to the system that produced the Jacobian.
    """

    J: np.ndarray
    base: ExtendedState
    elapsed: float
    endpoint: ExtendedState
    midpoint: ExtendedState
    steps: int
    h: float

    def __post_init__(self):
        j = np.asarray(self.J, dtype=float)
        dim = 2 * self.base.n + 2
        if j.shape != (dim, dim):
            raise DimensionMismatchError("Jacobian shape does not match the base state")
        if not np.all(np.isfinite(j)):
            raise ValueError("Jacobian entries must be finite")
        j = j.copy()
        j.setflags(write=False)
        object.__setattr__(self, "J", j)
        object.__setattr__(self, "elapsed", float(self.elapsed))

    @property
    def n(self):
        return self.base.n


def flow_jacobian(
    sys: HamiltonianSystem,
    z0: ExtendedState,
    t1: float,
    steps: int = 1000,
    h: float = DEFAULT_JACOBIAN_STEP,
    richardson: bool = False,
) -> FlowJacobian:
    """Central-difference Jacobian of the flow map over all 2n+2 coordinates.

    The elapsed time is held fixed while the start state (including its
    clock) is perturbed, so the first row is (1, 0, ..., 0) up to the
    difference scheme.  richardson=True combines steps h and h/2 for a
    higher-order estimate.
    """
    if h <= 0:
        raise ValueError("h must be positive")

    def _columns(step_size):
        y0 = z0.vector()
        cols = []
        for k in range(y0.size):
            bump = np.zeros_like(y0)
            bump[k] = step_size
            plus = _integrate_vector(sys, y0 + bump, float(t1), int(steps))
            minus = _integrate_vector(sys, y0 - bump, float(t1), int(steps))
            cols.append((plus - minus) / (2.0 * step_size))
        return np.column_stack(cols)

    j = _columns(h)
    if richardson:
        j = (4.0 * _columns(h / 2.0) - j) / 3.0
    endpoint = integrate_flow(sys, z0, t1, steps)
    midpoint = integrate_flow(sys, z0, float(t1) / 2.0, max(1, int(steps) // 2))
    # the clock row carries one rounding per step through the difference quotient
    eps = np.finfo(float).eps
    rounding = int(steps) * 8.0 * eps * max(1.0, abs(z0.t), abs(float(t1))) / (2.0 * h)
    row_tol = max(1e-9, 10.0 * h * h, rounding)
    expected = np.zeros(j.shape[0])
    expected[0] = 1.0
    row_residual = float(np.max(np.abs(j[0] - expected)))
    if row_residual > row_tol:
        raise IntegrationFailureError(
            f"time row deviates from invariance (residual {row_residual:.3e})", last_state=endpoint
        )
    return FlowJacobian(j, z0, float(t1), endpoint, midpoint, int(steps), float(h))


def check_hsp_membership(jac: FlowJacobian, tol: float = 1e-5) -> dict:
    """Residuals of the two defining conditions of the Jacobian group.

    symplectic_residual: max-norm of J^T Omega J - Omega.
    time_row_residual: deviation of the first row from (1, 0, ..., 0).
    """
    j = jac.J
    omega = two_form_matrix(jac.n)
    symplectic_residual = float(np.max(np.abs(j.T @ omega @ j - omega)))
    expected = np.zeros(j.shape[0])
    expected[0] = 1.0
    time_row_residual = float(np.max(np.abs(j[0] - expected)))
    return {
        "symplectic_residual": symplectic_residual,
        "time_row_residual": time_row_residual,
        "passed": symplectic_residual <= tol and time_row_residual <= tol,
    }


def verify_hamilton_structure(jac: FlowJacobian, sys: HamiltonianSystem, tol: float = 1e-5) -> dict:
    """Compare short-time displacement rates with the gradient of H.

    The rates (q1 - q0)/dt, (e1 - e0)/dt, (p1 - p0)/dt over the Jacobian's
    elapsed time are matched against dH/dp, dH/dt, -dH/dq evaluated by
    finite differences at the base state.  The recorded midpoint gives the
    same rates at half the elapsed time; when those disagree with the full
    rates the flow is too curved for an instantaneous reading and the
    verdict is inconclusive instead of a failure.
    """
    z0, z1 = jac.base, jac.endpoint
    dt = jac.elapsed
    if dt == 0.0:
        raise ValueError("elapsed time must be nonzero")
    v_rate = (z1.q - z0.q) / dt
    r_rate = (z1.e - z0.e) / dt
    f_rate = (z1.p - z0.p) / dt
    dp, dq, dt_grad = sys.fd_gradients(z0.p, z0.q, z0.t)
    v_residual = float(np.max(np.abs(v_rate - dp)))
    f_residual = float(np.max(np.abs(f_rate - (-dq))))
    r_residual = float(abs(r_rate - dt_grad))
    half = jac.midpoint
    curvature = float(
        max(
            np.max(np.abs((half.q - z0.q) / (dt / 2.0) - v_rate)),
            np.max(np.abs((half.p - z0.p) / (dt / 2.0) - f_rate)),
            abs((half.e - z0.e) / (dt / 2.0) - r_rate),
        )
    )
    worst = max(v_residual, f_residual, r_residual)
    if worst <= tol:
        verdict = "pass"
    elif curvature > tol or curvature > 0.25 * worst:
        # rates still moving as the step shrinks: curvature, not structure
        verdict = "inconclusive"
    else:
        verdict = "fail"
    return {
        "verdict": verdict,
        "passed": verdict == "pass",
        "v_residual": v_residual,
        "f_residual": f_residual,
        "r_residual": r_residual,
        "curvature": curvature,
        "rates": {"v": v_rate.tolist(), "r": r_rate, "f": f_rate.tolist()},
        "targets": {"v": dp.tolist(), "r": dt_grad, "f": (-dq).tolist()},
    }
