"""Command-line front end.

Displacements on the command line are comma-separated reals in the canonical
order dt,dq,de,dp (time, position, energy, momentum).  Reports are JSON for
single evaluations and verdicts, CSV for sweeps; both are emitted on stdout
with deterministic formatting (sorted JSON keys, repr floats), so fixed
inputs and seeds give byte-identical output.

Random sweeps draw from numpy.random.default_rng(seed), i.e. the PCG64
generator; the seed is part of every sweep's report.

Exit codes: 0 when all property checks pass, 1 when a check fails (the
failing residual goes to stderr), 2 for usage errors such as malformed
numbers, impossible kinematic states, or unreadable coefficient files.

Tolerances: every subcommand takes --tol; when omitted, the RECREL_TOL
environment variable overrides the per-command default.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import NonTimelikeStateError, NoNullVelocityError, RecrelError
from .hamilton_flow import (
    ExtendedState,
    PolynomialHamiltonian,
    check_hsp_membership,
    flow_jacobian,
    preset_system,
    verify_hamilton_structure,
)
from .phase_space_metrics import (
    Displacement,
    KinematicState,
    MetricSpec,
    gamma_factor,
    interval_class,
    line_element,
    mass_interval_squared,
    mass_rate_squared,
    null_cone_angles,
    null_cone_sample,
    null_surface_residual,
    proper_time_rate_squared,
)
from .planck_scales import ScaleConstants, planck_from_cbh, planck_from_cGh, verify_identities
from .reciprocal_transforms import (
    born_invariance_residual,
    contract_b,
    contraction_limit_matrix,
    explicit_transform,
)
from .weyl_heisenberg import (
    aut_apply,
    commutator_preserved,
    random_automorphism,
    random_group_element,
    wh_compose,
    wh_inverse,
    wh_matrix,
)

SCHEMA_VERSION = 1


class CliError(Exception):
    """Usage-level failure; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters shared by every subcommand."""

    command: str
    seed: int = 0
    output: str = "json"
    tol: float = 1e-10
    c: float = 1.0
    b: float = 1.0
    hbar: float = 1.0


def _resolve_tol(arg_tol, default):
    if arg_tol is not None:
        return float(arg_tol)
    env = os.environ.get("RECREL_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError:
            raise CliError(f"RECREL_TOL is not a number: {env!r}")
    return float(default)


def _parse_csv_floats(text, expect, name):
    parts = [p.strip() for p in str(text).split(",")]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise CliError(f"{name} must be comma-separated reals, got {text!r}")
    if expect is not None and len(values) != expect:
        raise CliError(f"{name} must have {expect} entries (canonical order dt,dq,de,dp), got {len(values)}")
    if not all(np.isfinite(values)):
        raise CliError(f"{name} entries must be finite")
    return values


def _emit_json(payload):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _emit_csv(header, rows):
    sys.stdout.write(",".join(header) + "\n")
    for row in rows:
        sys.stdout.write(",".join(repr(float(x)) for x in row) + "\n")


def _fail(message):
    sys.stderr.write(f"FAIL: {message}\n")
    return 1


def _displacement_from_arg(text):
    dt, dq, de, dp = _parse_csv_floats(text, 4, "--d")
    return Displacement(dt, [dq], de, [dp])


def _state_from_args(args):
    return KinematicState([float(args.v)], [float(args.f)], float(args.r))


def _run_wh(config, args):
    rng = np.random.default_rng(config.seed)
    n, trials = int(args.n), int(args.trials)
    if n < 1 or trials < 1:
        raise CliError("--n and --trials must be positive")
    group_law = associativity = inverse = 0.0
    for _ in range(trials):
        a = random_group_element(n, rng)
        b = random_group_element(n, rng)
        c = random_group_element(n, rng)
        ab = wh_compose(a, b)
        group_law = max(group_law, float(np.max(np.abs(wh_matrix(ab) - wh_matrix(a) @ wh_matrix(b)))))
        left = wh_compose(ab, c)
        right = wh_compose(a, wh_compose(b, c))
        associativity = max(associativity, float(np.max(np.abs(wh_matrix(left) - wh_matrix(right)))))
        cancel = wh_compose(a, wh_inverse(a))
        inverse = max(
            inverse,
            float(max(np.max(np.abs(cancel.p)), np.max(np.abs(cancel.q)), abs(cancel.iota))),
        )
    aut_trials = max(1, trials // 4)
    preserved = True
    action = 0.0
    for _ in range(aut_trials):
        u = random_automorphism(n, rng)
        preserved = preserved and commutator_preserved(u)
        g = random_group_element(n, rng)
        back = aut_apply(u.inverse(), aut_apply(u, g))
        action = max(
            action,
            float(max(np.max(np.abs(back.p - g.p)), np.max(np.abs(back.q - g.q)), abs(back.iota - g.iota))),
        )
    residuals = {
        "group_law": group_law,
        "associativity": associativity,
        "inverse": inverse,
        "automorphism_round_trip": action,
    }
    passed = preserved and all(r <= config.tol for r in residuals.values())
    _emit_json(
        {
            "command": "wh",
            "n": n,
            "trials": trials,
            "automorphisms_checked": aut_trials,
            "commutators_preserved": preserved,
            "seed": config.seed,
            "tol": config.tol,
            "residuals": residuals,
            "passed": passed,
        }
    )
    if not passed:
        worst = max(residuals, key=residuals.get)
        return _fail(f"wh {worst} residual {residuals[worst]!r} exceeds tol {config.tol!r}")
    return 0


def _run_metric(config, args):
    c, b = config.c, config.b
    metric = MetricSpec.born(1, c, b)
    payload = {"command": "metric", "c": c, "b": b, "tol": config.tol}
    if args.d is not None:
        d = _displacement_from_arg(args.d)
        payload["displacement"] = d.vector().tolist()
        payload["ds2"] = line_element(metric, d)
        payload["interval_class"] = interval_class(metric, d, tol=config.tol)
        payload["proper_time_rate_squared"] = proper_time_rate_squared(d, c)
        payload["mass_interval_squared"] = mass_interval_squared(d, c)
    else:
        s = _state_from_args(args)
        d = s.displacement(float(args.dt))
        payload["state"] = {"v": s.v[0], "f": s.f[0], "r": s.r}
        payload["dt"] = float(args.dt)
        payload["ds2"] = line_element(metric, d)
        payload["interval_class"] = interval_class(metric, d, tol=config.tol)
        payload["mass_rate_squared"] = mass_rate_squared(s, c)
        payload["null_surface_residual"] = null_surface_residual(s, c, b)
        try:
            payload["gamma"] = gamma_factor(s, c, b)
        except NonTimelikeStateError:
            payload["gamma"] = None
    _emit_json(payload)
    return 0


def _run_transform(config, args):
    c, b = config.c, config.b
    s = _state_from_args(args)
    d = _displacement_from_arg(args.d)
    out = explicit_transform(s, d, c, b)
    metric = MetricSpec.born(1, c, b)
    ds2_in = line_element(metric, d)
    ds2_out = line_element(metric, out)
    residual = abs(ds2_out - ds2_in)
    sweep = born_invariance_residual(s, c, b, trials=int(args.trials), seed=config.seed)
    passed = residual <= config.tol and sweep <= config.tol
    _emit_json(
        {
            "command": "transform",
            "c": c,
            "b": b,
            "state": {"v": s.v[0], "f": s.f[0], "r": s.r},
            "input": d.vector().tolist(),
            "output": out.vector().tolist(),
            "ds2_input": ds2_in,
            "ds2_output": ds2_out,
            "residual": residual,
            "sweep": {"trials": int(args.trials), "seed": config.seed, "residual": sweep},
            "tol": config.tol,
            "passed": passed,
        }
    )
    if not passed:
        return _fail(f"transform invariance residual {max(residual, sweep)!r} exceeds tol {config.tol!r}")
    return 0


def _run_nullcone(config, args):
    c, b = config.c, config.b
    r = float(args.r)
    count = int(args.count)
    angles = null_cone_angles(count)
    pairs = null_cone_sample(r, c, b, count)
    rows = []
    worst = 0.0
    for angle, (v, f) in zip(angles, pairs):
        res = null_surface_residual(KinematicState([v], [f], r), c, b)
        worst = max(worst, abs(res))
        rows.append((float(angle), float(v), float(f), float(res)))
    passed = worst <= config.tol
    if config.output == "csv":
        _emit_csv(("angle", "v", "f", "residual"), rows)
    else:
        _emit_json(
            {
                "command": "nullcone",
                "c": c,
                "b": b,
                "r": r,
                "count": count,
                "rows": [
                    {"angle": a, "v": v, "f": f, "residual": res} for a, v, f, res in rows
                ],
                "worst_residual": worst,
                "tol": config.tol,
                "passed": passed,
            }
        )
    if not passed:
        return _fail(f"nullcone residual {worst!r} exceeds tol {config.tol!r}")
    return 0


def _run_contract(config, args):
    c = config.c
    s = _state_from_args(args)
    d = _displacement_from_arg(args.d)
    b_values = _parse_csv_floats(args.b_values, None, "--b-values")
    if len(b_values) < 2:
        raise CliError("--b-values needs at least two entries for a slope fit")
    transformed, limit = contract_b(s, d, c, b_values)
    deviations = [float(np.max(np.abs(t.vector() - limit.vector()))) for t in transformed]
    if any(dev <= 0.0 for dev in deviations):
        raise CliError("deviation vanished; displacement does not separate the limit")
    slope = float(np.polyfit(np.log10(b_values), np.log10(deviations), 1)[0])
    passed = abs(slope + 2.0) <= config.tol
    if config.output == "csv":
        _emit_csv(("b", "deviation"), list(zip(b_values, deviations)))
    else:
        _emit_json(
            {
                "command": "contract",
                "c": c,
                "state": {"v": s.v[0], "f": s.f[0], "r": s.r},
                "displacement": d.vector().tolist(),
                "b_values": b_values,
                "deviations": deviations,
                "limit": limit.vector().tolist(),
                "limit_matrix": contraction_limit_matrix(s, c).tolist(),
                "slope": slope,
                "tol": config.tol,
                "passed": passed,
            }
        )
    if not passed:
        return _fail(f"contract slope {slope!r} outside -2 +/- {config.tol!r}")
    return 0


def _run_planck(config, args):
    constants = ScaleConstants(
        c=config.c,
        hbar=config.hbar,
        b=None if args.b is None else float(args.b),
        G=None if args.G is None else float(args.G),
        alpha_G=float(args.alpha_G),
    )
    scales = planck_from_cbh(constants.c, constants.b, constants.hbar)
    other = planck_from_cGh(constants.c, constants.G / constants.alpha_G, constants.hbar)
    fields = ("lambda_t", "lambda_q", "lambda_p", "lambda_e")
    cross = max(
        abs(getattr(other, k) / getattr(scales, k) - 1.0) for k in fields
    )
    identities = verify_identities(scales, constants.c, constants.b, constants.hbar)
    worst = max(cross, max(identities.values()))
    passed = worst <= config.tol
    _emit_json(
        {
            "command": "planck",
            "constants": {
                "c": constants.c,
                "b": constants.b,
                "G": constants.G,
                "hbar": constants.hbar,
                "alpha_G": constants.alpha_G,
            },
            "scales": {k: getattr(scales, k) for k in fields},
            "identity_residuals": identities,
            "parameterization_residual": cross,
            "tol": config.tol,
            "passed": passed,
        }
    )
    if not passed:
        return _fail(f"planck residual {worst!r} exceeds tol {config.tol!r}")
    return 0


def _hamilton_system(args):
    if args.coeffs is not None:
        with open(args.coeffs, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise CliError("coefficient file must hold a JSON object of 'p,q,t' exponent keys")
        try:
            return PolynomialHamiltonian(raw).system(), {"coefficients": {k: float(v) for k, v in raw.items()}}
        except (TypeError, ValueError) as exc:
            raise CliError(f"bad coefficient file: {exc}")
    return preset_system(args.system), {"system": args.system}


def _run_hamilton(config, args):
    if args.action != "verify":
        raise CliError(f"unknown hamilton action {args.action!r}")
    sys_, origin = _hamilton_system(args)
    t, q, e, p = _parse_csv_floats(args.state, 4, "--state")
    z0 = ExtendedState(t, [q], e, [p])
    t1, steps, h = float(args.t1), int(args.steps), float(args.h)
    if t1 <= 0 or steps < 1 or h <= 0:
        raise CliError("--t1 and --h must be positive and --steps >= 1")
    jac = flow_jacobian(sys_, z0, t1, steps=steps, h=h, richardson=bool(args.richardson))
    membership = check_hsp_membership(jac, tol=config.tol)
    structure = verify_hamilton_structure(jac, sys_, tol=config.tol)
    passed = membership["passed"] and structure["passed"]
    payload = {
        "command": "hamilton",
        "state": z0.vector().tolist(),
        "t1": t1,
        "steps": steps,
        "h": h,
        "richardson": bool(args.richardson),
        "tol": config.tol,
        "membership": membership,
        "structure": structure,
        "passed": passed,
    }
    payload.update(origin)
    _emit_json(payload)
    if not passed:
        worst = max(
            membership["symplectic_residual"],
            membership["time_row_residual"],
            structure["v_residual"],
            structure["f_residual"],
            structure["r_residual"],
        )
        return _fail(
            f"hamilton verdict {structure['verdict']!r}, worst residual {worst!r} at tol {config.tol!r}"
        )
    return 0


_HANDLERS = {
    "wh": _run_wh,
    "metric": _run_metric,
    "transform": _run_transform,
    "nullcone": _run_nullcone,
    "contract": _run_contract,
    "planck": _run_planck,
    "hamilton": _run_hamilton,
}

_TOL_DEFAULTS = {
    "wh": 1e-10,
    "metric": 1e-10,
    "transform": 1e-10,
    "nullcone": 1e-10,
    "contract": 0.1,
    "planck": 1e-12,
    "hamilton": 1e-5,
}


def run(config: RunConfig, args) -> int:
    """Dispatch a resolved configuration to its subcommand handler."""
    return _HANDLERS[config.command](config, args)


def _add_common(sub, default_format=None):
    sub.add_argument("--tol", type=float, default=None, help="pass/fail tolerance (default per command; RECREL_TOL overrides)")
    sub.add_argument("--seed", type=int, default=0, help="sweep seed for numpy default_rng (PCG64)")
    if default_format:
        sub.add_argument("--format", choices=("json", "csv"), default=default_format, help="report format")


def _add_scales(sub, with_b=True):
    sub.add_argument("--c", type=float, default=1.0, help="signal speed scale")
    if with_b:
        sub.add_argument("--b", type=float, default=1.0, help="force scale")


def _add_state(sub):
    sub.add_argument("--v", type=float, default=0.0, help="velocity")
    sub.add_argument("--f", type=float, default=0.0, help="force")
    sub.add_argument("--r", type=float, default=0.0, help="power")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recrel",
        description="Reciprocal-relativity kinematics: group sweeps, metric evaluation, "
        "noninertial transforms, null-cone sampling, contraction fits, scale systems, "
        "and Hamiltonian-flow structure checks.  Displacements are dt,dq,de,dp.",
    )
    parser.add_argument("--version", action="version", version=f"recrel {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("wh", help="group-law, inverse, and automorphism sweeps")
    sub.add_argument("--n", type=int, default=1, help="translation dimension")
    sub.add_argument("--trials", type=int, default=100, help="random triples to draw")
    _add_common(sub)

    sub = commands.add_parser("metric", help="evaluate the line element and causal class")
    _add_scales(sub)
    _add_state(sub)
    sub.add_argument("--dt", type=float, default=1.0, help="coordinate-time span of the state displacement")
    sub.add_argument("--d", default=None, help="displacement dt,dq,de,dp (overrides --v/--f/--r)")
    _add_common(sub)

    sub = commands.add_parser("transform", help="apply the noninertial transformation to a displacement")
    _add_scales(sub)
    _add_state(sub)
    sub.add_argument("--d", required=True, help="displacement dt,dq,de,dp")
    sub.add_argument("--trials", type=int, default=64, help="random displacements for the invariance sweep")
    _add_common(sub)

    sub = commands.add_parser("nullcone", help="sample the null surface at fixed power")
    _add_scales(sub)
    sub.add_argument("--r", type=float, default=0.0, help="power")
    sub.add_argument("--count", type=int, default=16, help="sample count around the cone")
    _add_common(sub, default_format="csv")

    sub = commands.add_parser("contract", help="fit the large-b convergence rate to the limit transform")
    _add_scales(sub, with_b=False)
    _add_state(sub)
    sub.add_argument("--d", required=True, help="displacement dt,dq,de,dp")
    sub.add_argument("--b-values", default="1e2,1e3,1e4,1e5", help="strictly increasing force scales")
    _add_common(sub, default_format="json")

    sub = commands.add_parser("planck", help="scale systems and consistency identities")
    sub.add_argument("--c", type=float, default=1.0, help="signal speed scale")
    sub.add_argument("--b", type=float, default=None, help="force scale (omit to derive from --G)")
    sub.add_argument("--G", type=float, default=None, help="gravitational constant (omit to derive from --b)")
    sub.add_argument("--hbar", type=float, default=1.0, help="action scale")
    sub.add_argument("--alpha-G", dest="alpha_G", type=float, default=1.0, help="proportionality in G = alpha_G c^4 / b")
    _add_common(sub)

    sub = commands.add_parser("hamilton", help="flow-Jacobian structure verification")
    sub.add_argument("action", choices=("verify",), help="operation to run")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--system", choices=("free", "harmonic", "driven"), help="built-in Hamiltonian")
    group.add_argument("--coeffs", help="JSON file mapping 'p,q,t' exponents to coefficients")
    sub.add_argument("--state", default="0,1,0,0", help="start state t,q,e,p")
    sub.add_argument(
        "--t1",
        type=float,
        default=1e-5,
        help="elapsed time (keep small for the rate reading; larger spans exercise membership)",
    )
    sub.add_argument("--steps", type=int, default=100, help="integrator steps")
    sub.add_argument("--h", type=float, default=1e-5, help="Jacobian difference step")
    sub.add_argument("--richardson", action="store_true", help="refine the Jacobian with step halving")
    _add_common(sub)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    c = getattr(args, "c", 1.0)
    b = getattr(args, "b", 1.0)
    try:
        config = RunConfig(
            command=args.command,
            seed=int(getattr(args, "seed", 0)),
            output=getattr(args, "format", "json"),
            tol=_resolve_tol(args.tol, _TOL_DEFAULTS[args.command]),
            c=1.0 if c is None else float(c),
            b=1.0 if b is None else float(b),
            hbar=float(getattr(args, "hbar", 1.0)),
        )
        return run(config, args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (NonTimelikeStateError, NoNullVelocityError) as exc:
        sys.stderr.write(f"impossible kinematic state: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"file error: {exc}\n")
        return 2
    except RecrelError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"invalid value: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
