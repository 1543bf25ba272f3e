"""Dimensional scale systems tying (c, hbar) to a force or gravity constant.

The four scales (time, length, momentum, energy) solve a system of six
identities; either a force scale b or the gravitational constant G closes
the system, with G = alpha_G c^4 / b translating between the two.  Residuals
are always relative because the scales span dozens of orders of magnitude.
"""

from dataclasses import dataclass

import numpy as np

# 2018 CODATA values, SI units
CODATA_C = 2.99792458e8
CODATA_HBAR = 1.054571817e-34
CODATA_G = 6.67430e-11

_CONSISTENCY_RTOL = 1e-12


def _positive(x, name):
    v = float(x)
    if not np.isfinite(v) or v <= 0.0:
        raise ValueError(f"{name} must be a positive finite real, got {x!r}")
    return v


@dataclass(frozen=True)
class ScaleConstants:
    """c and hbar plus at least one of b (force) and G (gravity).

    A missing member of the (b, G) pair is filled in through
    G = alpha_G c^4 / b; when both are supplied they must satisfy that
    relation to 1e-12 relative.
    """

    c: float = CODATA_C
    hbar: float = CODATA_HBAR
    b: float = None
    G: float = None
    alpha_G: float = 1.0

    def __post_init__(self):
        c = _positive(self.c, "c")
        hbar = _positive(self.hbar, "hbar")
        alpha = _positive(self.alpha_G, "alpha_G")
        b = None if self.b is None else _positive(self.b, "b")
        g = None if self.G is None else _positive(self.G, "G")
        if b is None and g is None:
            raise ValueError("at least one of b and G is required")
        if b is None:
            b = alpha * c**4 / g
        elif g is None:
            g = alpha * c**4 / b
        else:
            expected = alpha * c**4 / b
            if abs(g - expected) > _CONSISTENCY_RTOL * expected:
                raise ValueError(
                    f"G={g!r} and b={b!r} disagree with alpha_G c^4 / b = {expected!r}"
                )
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "G", g)
        object.__setattr__(self, "alpha_G", alpha)


@dataclass(frozen=True)
class PlanckScales:
    """The four scales; all strictly positive."""

    lambda_t: float
    lambda_q: float
    lambda_p: float
    lambda_e: float

    def __post_init__(self):
        for name in ("lambda_t", "lambda_q", "lambda_p", "lambda_e"):
            object.__setattr__(self, name, _positive(getattr(self, name), name))


def planck_from_cbh(c: float, b: float, hbar: float) -> PlanckScales:
    """Scales from the force parameterization."""
    c = _positive(c, "c")
    b = _positive(b, "b")
    hbar = _positive(hbar, "hbar")
    return PlanckScales(
        lambda_t=np.sqrt(hbar / (b * c)),
        lambda_q=np.sqrt(hbar * c / b),
        lambda_p=np.sqrt(hbar * b / c),
        lambda_e=np.sqrt(hbar * b * c),
    )


def planck_from_cGh(c: float, G: float, hbar: float) -> PlanckScales:
    """Scales from the gravitational parameterization."""
    c = _positive(c, "c")
    G = _positive(G, "G")
    hbar = _positive(hbar, "hbar")
    return PlanckScales(
        lambda_t=np.sqrt(G * hbar / c**5),
        lambda_q=np.sqrt(hbar * G / c**3),
        lambda_p=np.sqrt(hbar * c**3 / G),
        lambda_e=np.sqrt(hbar * c**5 / G),
    )


def verify_identities(s: PlanckScales, c: float, force_scale: float, hbar: float) -> dict:
    """Relative residuals of the six scale identities.

    Keys name the identity; values are |actual/expected - 1|.
    """
    return {
        "lambda_q_over_lambda_t_eq_c": abs(s.lambda_q / s.lambda_t / c - 1.0),
        "lambda_e_over_lambda_p_eq_c": abs(s.lambda_e / s.lambda_p / c - 1.0),
        "lambda_q_lambda_p_eq_hbar": abs(s.lambda_q * s.lambda_p / hbar - 1.0),
        "lambda_t_lambda_e_eq_hbar": abs(s.lambda_t * s.lambda_e / hbar - 1.0),
        "lambda_p_over_lambda_t_eq_b": abs(s.lambda_p / s.lambda_t / force_scale - 1.0),
        "lambda_e_over_lambda_q_eq_b": abs(s.lambda_e / s.lambda_q / force_scale - 1.0),
    }


def planck_scales(constants: ScaleConstants) -> PlanckScales:
    """Scales from a reconciled constant set, using the force parameterization."""
    return planck_from_cbh(constants.c, constants.b, constants.hbar)
