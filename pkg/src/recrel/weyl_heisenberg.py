"""Weyl-Heisenberg group arithmetic, its Lie algebra, and automorphisms.

Group elements are realized as real (2n+2) x (2n+2) matrices

    Upsilon(p, q, iota) = [ 1_n   0    0    q   ]
                          [ 0    1_n   0    p   ]
                          [ p^T  -q^T  1   2iota]
                          [ 0     0    0    1   ],

which multiply as

    Upsilon(p', q', iota') Upsilon(p, q, iota)
        = Upsilon(p' + p, q' + q, iota + iota' + (p'.q - q'.p) / 2).

Algebra elements are stored as coefficients of the generator basis
(P_1..P_n, Q_1..Q_n, I).  Convention trap worth stating once: in the matrix
realization the generator P_i occupies the slots where a group element
carries q_i, and Q_i occupies the p_i slots.  With these matrices the
commutator satisfies

    [Q_i, P_j] = delta_ij I,   i.e.   [P_i, Q_j] = -delta_ij I.

A more common convention has [P_i, Q_j] = +delta_ij I; the matrices above are
authoritative here and fix the opposite sign.  See the regression test
covering the commutator sign.

Automorphisms are matrices

    U = [ delta A            0  z_q  ]
        [                    0  z_p  ]
        [ (z_p^T, -z_q^T) A  delta^2 eps  iota ]
        [ 0                  0  eps  ]

with A symplectic, z = (z_q, z_p), delta nonzero and eps = +-1, acting on the
group by conjugation g -> U Upsilon(g) U^-1.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DecompositionError,
    DimensionMismatchError,
    SymplecticViolationError,
)

DEFAULT_DECOMPOSITION_TOL = 1e-9


def _frozen_vector(x, n=None, name="vector"):
    v = np.array(x, dtype=float, copy=True).reshape(-1)
    if n is not None and v.shape != (n,):
        raise DimensionMismatchError(f"{name} must have length {n}, got {v.shape}")
    if v.size == 0:
        raise DimensionMismatchError(f"{name} must be nonempty")
    if not np.all(np.isfinite(v)):
        raise DimensionMismatchError(f"{name} must be finite")
    v.setflags(write=False)
    return v


def _frozen_matrix(x, shape=None, name="matrix"):
    m = np.array(x, dtype=float, copy=True)
    if m.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-dimensional")
    if shape is not None and m.shape != shape:
        raise DimensionMismatchError(f"{name} must have shape {shape}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatchError(f"{name} must be finite")
    m.setflags(write=False)
    return m


def _check_scalar(x, name="value"):
    x = float(x)
    if not np.isfinite(x):
        raise DimensionMismatchError(f"{name} must be finite")
    return x


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element with translation parameters p, q and central parameter iota."""

    p: np.ndarray
    q: np.ndarray
    iota: float

    def __post_init__(self):
        p = _frozen_vector(self.p, name="p")
        q = _frozen_vector(self.q, n=p.shape[0], name="q")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "iota", _check_scalar(self.iota, "iota"))

    @property
    def n(self):
        return self.p.shape[0]

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n), np.zeros(n), 0.0)

    @classmethod
    def from_matrix(cls, m, tol=DEFAULT_DECOMPOSITION_TOL):
        """Read (p, q, iota) off a group matrix; reject if the pattern residual exceeds tol."""
        m = np.asarray(m, dtype=float)
        n = _group_matrix_dim(m)
        q = m[0:n, -1]
        p = m[n : 2 * n, -1]
        iota = m[2 * n, -1] / 2.0
        elem = cls(p, q, iota)
        residual = float(np.max(np.abs(m - wh_matrix(elem))))
        if residual > tol:
            raise DecompositionError(
                f"matrix is not in the group pattern (residual {residual:.3e} > tol {tol:.3e})"
            )
        return elem

    def tangent(self):
        """Algebra element tangent to s -> Upsilon(s p, s q, s iota) at s = 0.

        Note the coefficient swap: the group's q coordinate multiplies the
        generator P, and p multiplies Q.
        """
        return HeisenbergAlgebraElement(p_coeff=self.q, q_coeff=self.p, iota_coeff=self.iota)


def _group_matrix_dim(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError("group matrix must be square")
    dim = m.shape[0]
    if dim < 4 or dim % 2 != 0:
        raise DimensionMismatchError(f"group matrix dimension must be 2n+2 >= 4, got {dim}")
    return (dim - 2) // 2


def wh_matrix(g: HeisenbergElement) -> np.ndarray:
    """Matrix realization of a group element."""
    n = g.n
    m = np.eye(2 * n + 2)
    m[0:n, -1] = g.q
    m[n : 2 * n, -1] = g.p
    m[2 * n, 0:n] = g.p
    m[2 * n, n : 2 * n] = -g.q
    m[2 * n, -1] = 2.0 * g.iota
    return m


def wh_compose(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """Group product with a as the left factor."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot compose elements with n={a.n} and n={b.n}")
    shift = 0.5 * (float(a.p @ b.q) - float(a.q @ b.p))
    return HeisenbergElement(a.p + b.p, a.q + b.q, a.iota + b.iota + shift)


def wh_inverse(g: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-g.p, -g.q, -g.iota)


@dataclass(frozen=True)
class HeisenbergAlgebraElement:
    """Algebra element sum_i p_coeff[i] P_i + sum_i q_coeff[i] Q_i + iota_coeff I."""

    p_coeff: np.ndarray
    q_coeff: np.ndarray
    iota_coeff: float

    def __post_init__(self):
        p = _frozen_vector(self.p_coeff, name="p_coeff")
        q = _frozen_vector(self.q_coeff, n=p.shape[0], name="q_coeff")
        object.__setattr__(self, "p_coeff", p)
        object.__setattr__(self, "q_coeff", q)
        object.__setattr__(self, "iota_coeff", _check_scalar(self.iota_coeff, "iota_coeff"))

    @property
    def n(self):
        return self.p_coeff.shape[0]

    def matrix(self) -> np.ndarray:
        """Strictly nilpotent matrix realization (the cube vanishes identically)."""
        n = self.n
        m = np.zeros((2 * n + 2, 2 * n + 2))
        # P_i fills the q slots of the group pattern, Q_i the p slots.
        m[0:n, -1] = self.p_coeff
        m[n : 2 * n, -1] = self.q_coeff
        m[2 * n, 0:n] = self.q_coeff
        m[2 * n, n : 2 * n] = -self.p_coeff
        m[2 * n, -1] = 2.0 * self.iota_coeff
        return m

    @classmethod
    def from_matrix(cls, m, tol=DEFAULT_DECOMPOSITION_TOL):
        m = np.asarray(m, dtype=float)
        n = _group_matrix_dim(m)
        p_coeff = m[0:n, -1]
        q_coeff = m[n : 2 * n, -1]
        iota = m[2 * n, -1] / 2.0
        elem = cls(p_coeff, q_coeff, iota)
        residual = float(np.max(np.abs(m - elem.matrix())))
        if residual > tol:
            raise DecompositionError(
                f"matrix is not in the algebra pattern (residual {residual:.3e} > tol {tol:.3e})"
            )
        return elem

    @classmethod
    def zero(cls, n):
        return cls(np.zeros(n), np.zeros(n), 0.0)


def generator_P(n, i):
    """Generator P_i (occupies the q slots of the matrix pattern)."""
    e = np.zeros(n)
    e[i] = 1.0
    return HeisenbergAlgebraElement(p_coeff=e, q_coeff=np.zeros(n), iota_coeff=0.0)


def generator_Q(n, i):
    """Generator Q_i (occupies the p slots of the matrix pattern)."""
    e = np.zeros(n)
    e[i] = 1.0
    return HeisenbergAlgebraElement(p_coeff=np.zeros(n), q_coeff=e, iota_coeff=0.0)


def generator_I(n):
    """Central generator."""
    return HeisenbergAlgebraElement(np.zeros(n), np.zeros(n), 1.0)


def wh_commutator(
    x: HeisenbergAlgebraElement, y: HeisenbergAlgebraElement
) -> HeisenbergAlgebraElement:
    """Lie bracket [x, y]; the result is always central.

    The iota coefficient is x.q_coeff . y.p_coeff - x.p_coeff . y.q_coeff,
    the sign being fixed by the matrix realization ([Q_i, P_j] = delta_ij I).
    """
    if x.n != y.n:
        raise DimensionMismatchError(f"cannot bracket elements with n={x.n} and n={y.n}")
    iota = float(x.q_coeff @ y.p_coeff) - float(x.p_coeff @ y.q_coeff)
    return HeisenbergAlgebraElement(np.zeros(x.n), np.zeros(x.n), iota)


def central_extension_dimension(m: int) -> int:
    """Dimension m(m-1)/2 of the maximal central extension of an m-dimensional abelian group."""
    if int(m) != m or m < 1:
        raise DimensionMismatchError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    return m * (m - 1) // 2


def symplectic_form(n: int) -> np.ndarray:
    """Block form zeta = [[0, 1_n], [-1_n, 0]] on vectors laid out (q-part, p-part)."""
    zeta = np.zeros((2 * n, 2 * n))
    zeta[0:n, n : 2 * n] = np.eye(n)
    zeta[n : 2 * n, 0:n] = -np.eye(n)
    return zeta


def is_symplectic(a, tol=1e-9) -> bool:
    """Check A^T zeta A = zeta in max norm.  Odd-dimensional input is rejected."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("symplectic candidate must be square")
    if a.shape[0] % 2 != 0 or a.shape[0] == 0:
        raise DimensionMismatchError(f"symplectic candidate must have even dimension, got {a.shape[0]}")
    zeta = symplectic_form(a.shape[0] // 2)
    return float(np.max(np.abs(a.T @ zeta @ a - zeta))) <= tol


def assemble_automorphism_matrix(a, z, iota, delta, epsilon) -> np.ndarray:
    """Assemble the automorphism block matrix without validating A.

    Exposed so sweeps can build would-be automorphisms from non-symplectic
    blocks and watch them fail the preservation checks.
    """
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float).reshape(-1)
    n = a.shape[0] // 2
    if a.shape != (2 * n, 2 * n) or z.shape != (2 * n,):
        raise DimensionMismatchError("block sizes do not match")
    zq, zp = z[0:n], z[n : 2 * n]
    u = np.zeros((2 * n + 2, 2 * n + 2))
    u[0 : 2 * n, 0 : 2 * n] = delta * a
    u[0:n, -1] = zq
    u[n : 2 * n, -1] = zp
    u[2 * n, 0 : 2 * n] = np.concatenate([zp, -zq]) @ a
    u[2 * n, 2 * n] = delta * delta * epsilon
    u[2 * n, -1] = iota
    u[-1, -1] = epsilon
    return u


def _same_conjugation(u1, u2, n, tol):
    # Conjugation agreement on a basis of group elements implies agreement on
    # the whole group (the action is affine in the coordinates).
    inv1 = np.linalg.inv(u1)
    inv2 = np.linalg.inv(u2)
    probes = []
    for k in range(2 * n):
        zt = np.zeros(2 * n)
        zt[k] = 1.0
        probes.append(HeisenbergElement(p=zt[n : 2 * n], q=zt[0:n], iota=0.0))
    probes.append(HeisenbergElement(np.zeros(n), np.zeros(n), 1.0))
    for g in probes:
        gm = wh_matrix(g)
        if float(np.max(np.abs(u1 @ gm @ inv1 - u2 @ gm @ inv2))) > tol:
            return False
    return True


@dataclass(frozen=True)
class AutomorphismElement:
    """Automorphism parameters (A symplectic, z, iota, delta != 0, epsilon = +-1)."""

    A: np.ndarray
    z: np.ndarray
    iota: float
    delta: float
    epsilon: float
    tol: float = field(default=1e-9, compare=False)

    def __post_init__(self):
        a = np.asarray(self.A, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2 != 0:
            raise DimensionMismatchError("A must be square with even dimension")
        n = a.shape[0] // 2
        a = _frozen_matrix(a, shape=(2 * n, 2 * n), name="A")
        if not is_symplectic(a, tol=self.tol):
            raise SymplecticViolationError("A fails the symplectic condition A^T zeta A = zeta")
        z = _frozen_vector(self.z, n=2 * n, name="z")
        iota = _check_scalar(self.iota, "iota")
        delta = _check_scalar(self.delta, "delta")
        if delta == 0.0:
            raise DimensionMismatchError("delta must be nonzero")
        epsilon = _check_scalar(self.epsilon, "epsilon")
        if epsilon not in (1.0, -1.0):
            raise DimensionMismatchError(f"epsilon must be +1 or -1, got {epsilon}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "iota", iota)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "epsilon", epsilon)

    @property
    def n(self):
        return self.A.shape[0] // 2

    @classmethod
    def identity(cls, n):
        return cls(np.eye(2 * n), np.zeros(2 * n), 0.0, 1.0, 1.0)

    @classmethod
    def from_matrix(cls, u, tol=DEFAULT_DECOMPOSITION_TOL):
        """Decompose a matrix into automorphism parameters, matching its action.

        The parameter family is a section of the full matrix normalizer: row
        2n is locked to the column z.  Products and inverses of section
        members pick up factors that conjugate trivially but move the row off
        the lock, so decomposition matches the conjugation action instead of
        raw entries: the structural blocks fix (A, delta, epsilon) and z is
        solved from the central-shift functional.  aut_matrix of the result
        conjugates identically to u even when the matrices differ.

        delta is canonicalized positive; (delta, A) and (-delta, -A) act the
        same way.
        """
        u = np.asarray(u, dtype=float)
        n = _group_matrix_dim(u)
        m = 2 * n
        structural = max(
            float(np.max(np.abs(u[0:m, m]))),
            float(np.max(np.abs(u[m + 1, 0:m]))),
            abs(u[m + 1, m]),
        )
        if structural > tol:
            raise DecompositionError(
                f"matrix is not in the automorphism pattern (off-block residual {structural:.3e} > tol {tol:.3e})"
            )
        epsilon = u[-1, -1]
        if abs(abs(epsilon) - 1.0) > tol:
            raise DecompositionError(f"corner entry {epsilon!r} is not +-1")
        epsilon = 1.0 if epsilon > 0 else -1.0
        d2 = u[m, m] * epsilon
        if d2 <= 0:
            raise DecompositionError("dilation slot is not a positive multiple of epsilon")
        delta = float(np.sqrt(d2))
        a = u[0:m, 0:m] / delta
        w = u[m, 0:m]
        x = u[0:m, -1]
        zeta = symplectic_form(n)
        # Conjugation by u shifts the central coordinate of a group element
        # with vector part zt by lam . zt; a section element with the same
        # (A, delta, epsilon) realizes the shift when
        # (1 + delta/epsilon) A^T zeta z = w + (delta/epsilon) A^T zeta x.
        lam = (w - (delta / epsilon) * (zeta @ a).T @ x) / (2.0 * epsilon)
        denom = epsilon + delta
        if abs(denom) <= max(tol, 1e-12):
            # At delta = -epsilon every section element has zero central
            # shift, so only matrices with lam = 0 decompose.
            if float(np.max(np.abs(lam))) > tol:
                raise DecompositionError(
                    "central shift is not representable in the section at delta = -epsilon"
                )
            z = x
        else:
            z = (epsilon * np.linalg.solve(a.T @ zeta, w) + delta * x) / denom
        try:
            elem = cls(a, z, float(u[m, -1]), delta, epsilon, tol=max(tol, 1e-9))
        except SymplecticViolationError as exc:
            raise DecompositionError(
                f"top block is not a dilated symplectic matrix: {exc}"
            ) from exc
        if not _same_conjugation(u, aut_matrix(elem), n, tol=tol):
            raise DecompositionError("matrix does not conjugate as a group automorphism within tolerance")
        return elem

    def inverse(self, tol=DEFAULT_DECOMPOSITION_TOL):
        return AutomorphismElement.from_matrix(np.linalg.inv(aut_matrix(self)), tol=tol)


def aut_matrix(u: AutomorphismElement) -> np.ndarray:
    return assemble_automorphism_matrix(u.A, u.z, u.iota, u.delta, u.epsilon)


def aut_apply(
    u: AutomorphismElement, g: HeisenbergElement, tol=DEFAULT_DECOMPOSITION_TOL
) -> HeisenbergElement:
    """Act on a group element by conjugation and decompose the result."""
    if u.n != g.n:
        raise DimensionMismatchError(f"automorphism n={u.n} does not match element n={g.n}")
    um = aut_matrix(u)
    conj = um @ wh_matrix(g) @ np.linalg.inv(um)
    return HeisenbergElement.from_matrix(conj, tol=tol)


def _generator_matrices(n):
    gens = [generator_P(n, i) for i in range(n)]
    gens += [generator_Q(n, i) for i in range(n)]
    gens.append(generator_I(n))
    return [g.matrix() for g in gens]


def commutator_preserved(u, tol=1e-9) -> bool:
    """Check that conjugation by u is an algebra automorphism.

    Each conjugated generator must decompose back into the algebra span, and
    the bracket of the decomposed elements (via wh_commutator) must reproduce
    the conjugated bracket matrix.  Conjugation by a matrix outside the
    automorphism group generically fails the decomposition step.

    Accepts an AutomorphismElement or a raw (2n+2) x (2n+2) matrix.
    """
    um = aut_matrix(u) if isinstance(u, AutomorphismElement) else np.asarray(u, dtype=float)
    n = _group_matrix_dim(um)
    uinv = np.linalg.inv(um)
    gens = _generator_matrices(n)
    conjugated = [um @ g @ uinv for g in gens]
    decomposed = []
    for c in conjugated:
        try:
            decomposed.append(HeisenbergAlgebraElement.from_matrix(c, tol=tol))
        except DecompositionError:
            return False
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            lhs = um @ (gens[i] @ gens[j] - gens[j] @ gens[i]) @ uinv
            rhs = wh_commutator(decomposed[i], decomposed[j]).matrix()
            if float(np.max(np.abs(lhs - rhs))) > tol:
                return False
    return True


def random_symplectic(n, rng) -> np.ndarray:
    """Random element of Sp(2n) from shear and block-diagonal factors."""
    b = rng.standard_normal((n, n))
    b = 0.4 * (b + b.T)
    c = rng.standard_normal((n, n))
    c = 0.4 * (c + c.T)
    q_mat, _ = np.linalg.qr(rng.standard_normal((n, n)))
    m = q_mat @ np.diag(np.exp(rng.uniform(-0.4, 0.4, size=n)))
    shear_q = np.eye(2 * n)
    shear_q[0:n, n : 2 * n] = b
    shear_p = np.eye(2 * n)
    shear_p[n : 2 * n, 0:n] = c
    block = np.zeros((2 * n, 2 * n))
    block[0:n, 0:n] = m
    block[n : 2 * n, n : 2 * n] = np.linalg.inv(m).T
    return shear_q @ shear_p @ block


def random_group_element(n, rng, scale=1.0) -> HeisenbergElement:
    return HeisenbergElement(
        scale * rng.standard_normal(n), scale * rng.standard_normal(n), scale * rng.standard_normal()
    )


def random_algebra_element(n, rng, scale=1.0) -> HeisenbergAlgebraElement:
    return HeisenbergAlgebraElement(
        scale * rng.standard_normal(n), scale * rng.standard_normal(n), scale * rng.standard_normal()
    )


def random_automorphism(n, rng) -> AutomorphismElement:
    # |delta| is kept away from 1: decomposing a matrix with delta = -epsilon
    # hits the zero-shift stratum, and nearby draws condition poorly.
    return AutomorphismElement(
        A=random_symplectic(n, rng),
        z=rng.standard_normal(2 * n),
        iota=rng.standard_normal(),
        delta=float(np.exp(rng.uniform(0.1, 0.7)) * rng.choice([-1.0, 1.0])),
        epsilon=float(rng.choice([-1.0, 1.0])),
    )
