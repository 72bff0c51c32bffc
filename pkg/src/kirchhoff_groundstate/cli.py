"""Batch command-line front-end.

Subcommands: solve, verify, oracle, sweep, fibering.  Each reads a JSON
config validated against a published schema (unknown keys rejected), writes
deterministic JSON/CSV artifacts stamped with the config's sha256, and keeps
timestamps in a separate metadata file so reruns are byte-identical.

Exit codes: 0 success, 1 config error, 2 non-convergence, 3 verification
check failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import jsonschema

from .grids import FOUR_PI, RadialFunction, grad_norm_sq, make_grid
from .functionals import DilationFamily, energy, fibering_scan, iip_gap
from .problem import (
    Nonlinearity,
    Potential,
    ProblemSpec,
    check_nonlinearity_hypotheses,
    check_potential_hypotheses,
)
from .projection import BracketingFailed, NotInLambda, in_lambda_set, project_to_manifold
from .solver import (
    InitialIterateNotInLambda,
    ShootingBracketFailed,
    SolverOptions,
    TNotFound,
    initial_iterate,
    kirchhoff_from_scalar_field,
    lambda_sweep,
    solve_ground_state,
    solve_scalar_field_shooting,
)


class ConfigError(ValueError):
    """The run configuration is unreadable or violates the schema."""


_NUMBER_POS = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["problem"],
    "properties": {
        "problem": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a", "b", "potential", "nonlinearity"],
            "properties": {
                "a": _NUMBER_POS,
                "b": _NUMBER_POS,
                "potential": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {
                            "enum": ["constant", "inverse_poly", "sine_decay", "exp_decay"]
                        },
                        "params": {"type": "object"},
                    },
                },
                "nonlinearity": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["pure_power", "power_combination"]},
                        "params": {"type": "object"},
                    },
                },
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "r_max": _NUMBER_POS,
                "n": {"type": "integer", "minimum": 16},
                "scheme": {"enum": ["uniform", "graded"]},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_iters": {"type": "integer", "minimum": 1},
                "grad_tol": _NUMBER_POS,
                "projection_tol": _NUMBER_POS,
                "t_lo": _NUMBER_POS,
                "t_hi": _NUMBER_POS,
                "n_scan": {"type": "integer", "minimum": 8},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "lambda_grid": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "number", "minimum": 0.5, "maximum": 1.0},
        },
        "t_scan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_lo": _NUMBER_POS,
                "t_hi": _NUMBER_POS,
                "n": {"type": "integer", "minimum": 2},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axis", "values"],
            "properties": {
                "axis": {"enum": ["a", "b", "p"]},
                "values": {"type": "array", "minItems": 1, "items": _NUMBER_POS},
            },
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_iip_samples": {"type": "integer", "minimum": 1},
                "n_hardy_samples": {"type": "integer", "minimum": 1},
            },
        },
        "output_dir": {"type": "string"},
    },
}

_POTENTIAL_PARAMS = {
    "constant": {"v"},
    "inverse_poly": {"alpha", "beta", "sigma"},
    "sine_decay": {"alpha", "beta"},
    "exp_decay": {"alpha", "beta", "sigma"},
}


def load_config(path) -> tuple[dict, str]:
    """Read, hash, and schema-validate a config file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    digest = hashlib.sha256(raw).hexdigest()
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        loc = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"schema violation at {loc}: {e.message}") from e
    return cfg, digest


def build_potential(block: dict) -> Potential:
    kind = block["kind"]
    params = dict(block.get("params", {}))
    allowed = _POTENTIAL_PARAMS[kind]
    unknown = set(params) - allowed
    if unknown:
        raise ConfigError(f"unknown potential params for {kind}: {sorted(unknown)}")
    missing = allowed - set(params)
    if missing:
        raise ConfigError(f"missing potential params for {kind}: {sorted(missing)}")
    try:
        return getattr(Potential, kind)(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad potential params: {e}") from e


def build_nonlinearity(block: dict) -> Nonlinearity:
    kind = block["kind"]
    params = dict(block.get("params", {}))
    if kind == "pure_power":
        if set(params) != {"p"}:
            raise ConfigError("pure_power needs exactly the exponent parameter p")
        p = float(params["p"])
        if not (2.0 < p < 6.0):
            raise ConfigError(f"exponent p must lie in (2, 6), got {p}")
        return Nonlinearity.pure_power(p)
    if set(params) != {"terms"}:
        raise ConfigError("power_combination needs exactly the parameter terms")
    terms = params["terms"]
    try:
        terms = [(float(c), float(p)) for c, p in terms]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad power_combination terms: {e}") from e
    for c, p in terms:
        if c <= 0 or not (2.0 < p < 6.0):
            raise ConfigError(f"each term needs c > 0 and p in (2, 6), got ({c}, {p})")
    return Nonlinearity.power_combination(terms)


def build_problem(cfg: dict) -> ProblemSpec:
    blk = cfg["problem"]
    try:
        return ProblemSpec(
            a=float(blk["a"]),
            b=float(blk["b"]),
            potential=build_potential(blk["potential"]),
            nonlinearity=build_nonlinearity(blk["nonlinearity"]),
        )
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def build_grid(cfg: dict):
    blk = cfg.get("grid", {})
    try:
        return make_grid(
            blk.get("r_max", 20.0), blk.get("n", 2001), blk.get("scheme", "uniform")
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def build_options(cfg: dict, seed_override=None) -> SolverOptions:
    blk = dict(cfg.get("solver", {}))
    if seed_override is not None:
        blk["seed"] = int(seed_override)
    return SolverOptions(**blk)


# ---------------------------------------------------------------------------
# artifact writers


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n")


def _write_csv(path: Path, header: str, rows: np.ndarray, digest: str):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    np.savetxt(
        path,
        rows,
        delimiter=",",
        header=f"# config_sha256={digest}\n{header}",
        comments="",
        fmt="%.17g",
    )


def _write_metadata(outdir: Path, digest: str, command: str):
    _write_json(
        outdir / "metadata.json",
        {
            "command": command,
            "config_sha256": digest,
            "written_at": datetime.now(timezone.utc).isoformat(),
        },
    )


def _result_payload(sr, digest: str) -> dict:
    return {
        "config_sha256": digest,
        "status": sr.status,
        "m": sr.m,
        "t_u": sr.t_u,
        "pohozaev_residual": sr.pohozaev_residual,
        "ode_residual": sr.ode_res,
        "grad_norm": sr.grad_norm,
        "reduced_grad_norm": sr.reduced_grad_norm,
        "iterations": sr.iterations,
        "r_max": sr.u_hat.grid.r_max,
        "n": sr.u_hat.grid.n,
        "u_center": float(sr.u_hat.values[0]),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(cfg: dict, digest: str, outdir: Path, args) -> int:
    ps = build_problem(cfg)
    grid = build_grid(cfg)
    opts = build_options(cfg, args.seed)
    try:
        sr = solve_ground_state(ps, opts, grid=grid)
    except (InitialIterateNotInLambda, BracketingFailed, NotInLambda) as e:
        print(f"solve failed: {e}", file=sys.stderr)
        return 2
    _write_json(outdir / "result.json", _result_payload(sr, digest))
    _write_csv(
        outdir / "profile.csv",
        "r,u",
        np.column_stack([sr.u_hat.grid.nodes, sr.u_hat.values]),
        digest,
    )
    _write_csv(
        outdir / "trace.csv",
        "iter,reduced_energy,step,grad_norm",
        np.column_stack(
            [np.arange(1, len(sr.trace) + 1), np.asarray(sr.trace, dtype=float)]
        ),
        digest,
    )
    _write_metadata(outdir, digest, "solve")
    if sr.status != "converged":
        print(f"solver stopped with status {sr.status!r}", file=sys.stderr)
        return 2
    return 0


def _hardy_scan(grid, n_samples: int, seed: int):
    """Smooth random bumps: ||grad u||^2 >= (1/4) * 4*pi int u(r)^2 dr.

    The Hardy weight u^2/|x|^2 cancels the r^2 volume factor exactly, so the
    right-hand side is a plain (unweighted) radial integral; no special
    handling of r = 0 is needed.
    """
    rng = np.random.default_rng(seed)
    worst = np.inf
    worst_rel = np.inf
    for _ in range(n_samples):
        width = float(rng.uniform(0.5, grid.r_max / 4.0))
        amp = float(rng.uniform(0.1, 5.0))
        center = float(rng.uniform(0.0, grid.r_max / 3.0))
        vals = amp * np.exp(-(((grid.nodes - center) / width) ** 2))
        vals[-1] = 0.0
        u = RadialFunction(grid, vals)
        lhs = grad_norm_sq(u)
        rhs = 0.25 * FOUR_PI * grid.integrate(u.values**2)
        margin = lhs - rhs
        worst = min(worst, margin)
        worst_rel = min(worst_rel, margin / max(1.0, lhs))
    return worst, worst_rel


def _gaussian_mixture(grid, rng, ps, lam=1.0, require_admissible=False):
    """Random smooth profile; optionally resampled until it lies in the cone."""
    for _ in range(200):
        k = int(rng.integers(1, 4))
        vals = np.zeros(grid.n)
        for _ in range(k):
            amp = float(rng.uniform(0.5, 4.0))
            width = float(rng.uniform(1.0, grid.r_max / 4.0))
            center = float(rng.uniform(0.0, grid.r_max / 4.0))
            vals += amp * np.exp(-(((grid.nodes - center) / width) ** 2))
        vals[-1] = 0.0
        u = RadialFunction(grid, vals)
        if not require_admissible or in_lambda_set(u, ps, lam=lam):
            return u
    raise RuntimeError("failed to sample an admissible random profile")


def _iip_scan(grid, ps, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_samples):
        u = _gaussian_mixture(grid, rng, ps)
        t = float(10.0 ** rng.uniform(-1.0, 1.0))
        worst = min(worst, iip_gap(u, ps, t))
    return worst


def cmd_verify(cfg: dict, digest: str, outdir: Path, args) -> int:
    ps = build_problem(cfg)
    grid = build_grid(cfg)
    vblk = cfg.get("verify", {})
    seed = int(args.seed if args.seed is not None else cfg.get("solver", {}).get("seed", 0))
    n_iip = int(vblk.get("n_iip_samples", 100))
    n_hardy = int(vblk.get("n_hardy_samples", 50))

    checks = {}
    prep = check_potential_hypotheses(ps.potential, ps.a)
    for name, entry in prep.checks.items():
        checks[f"potential.{name}"] = entry
    nrep = check_nonlinearity_hypotheses(ps.nonlinearity, ps.v_inf)
    for name, entry in nrep.checks.items():
        checks[f"nonlinearity.{name}"] = entry

    hardy_abs, hardy_rel = _hardy_scan(grid, n_hardy, seed)
    checks["hardy"] = {
        "verdict": "pass" if hardy_rel >= -1e-8 else "fail",
        "margin": hardy_abs,
        "relative_margin": hardy_rel,
    }

    # the energy-dilation inequality needs the decay audit on V; skip it
    # (as inconclusive) when that audit does not pass
    if prep.checks["decay_map"]["verdict"] == "pass":
        iip_worst = _iip_scan(grid, ps, n_iip, seed)
        checks["iip"] = {
            "verdict": "pass" if iip_worst >= -1e-6 else "fail",
            "margin": iip_worst,
            "samples": n_iip,
        }
    else:
        checks["iip"] = {"verdict": "inconclusive", "margin": None,
                         "reason": "potential decay audit did not pass"}

    # admissible-cone inclusion of the default starting profile, and its
    # unique projection onto the dilation-identity manifold
    try:
        u0 = initial_iterate(grid, ps)
        pr = project_to_manifold(u0, ps)
        checks["lambda_inclusion"] = {
            "verdict": "pass" if pr.sign_changes == 1 else "fail",
            "sign_changes": pr.sign_changes,
            "t_u": pr.t_u,
            "projection_residual": pr.pohozaev_residual,
        }
    except (InitialIterateNotInLambda, NotInLambda, BracketingFailed) as e:
        checks["lambda_inclusion"] = {"verdict": "fail", "reason": str(e)}

    failed = sorted(k for k, v in checks.items() if v["verdict"] == "fail")
    payload = {
        "config_sha256": digest,
        "checks": checks,
        "failed": failed,
        "all_passed": not failed,
    }
    _write_json(outdir / "verify.json", payload)
    _write_metadata(outdir, digest, "verify")
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 3
    return 0


def cmd_oracle(cfg: dict, digest: str, outdir: Path, args) -> int:
    ps = build_problem(cfg)
    if ps.potential.kind != "constant":
        raise ConfigError("the shooting oracle requires a constant potential")
    grid = build_grid(cfg)
    opts = build_options(cfg, args.seed)
    try:
        sr = solve_ground_state(ps, opts, grid=grid)
    except (InitialIterateNotInLambda, BracketingFailed, NotInLambda) as e:
        print(f"direct solve failed: {e}", file=sys.stderr)
        return 2
    try:
        v = solve_scalar_field_shooting(1.0, ps.v_inf, ps.nonlinearity, grid=grid)
    except ShootingBracketFailed as e:
        print(f"shooting oracle failed: {e}", file=sys.stderr)
        return 2
    u_oracle, t_resc = kirchhoff_from_scalar_field(v, ps.a, ps.b)
    m_oracle = energy(u_oracle, ps).total
    gap = (sr.m - m_oracle) / max(1.0, abs(m_oracle))
    payload = {
        "config_sha256": digest,
        "m_direct": sr.m,
        "m_oracle": m_oracle,
        "relative_gap": gap,
        "direct_status": sr.status,
        "rescaling_t": t_resc,
        "oracle_center_amplitude": float(v.values[0]),
        "oracle_pohozaev_residual": abs(DilationFamily(u_oracle, ps).pohozaev_at(1.0)),
    }
    _write_json(outdir / "oracle.json", payload)
    _write_metadata(outdir, digest, "oracle")
    return 0 if sr.status == "converged" else 2


def _axis_spec(cfg: dict, axis: str, value: float) -> dict:
    out = json.loads(json.dumps(cfg["problem"]))
    if axis in ("a", "b"):
        out[axis] = value
    else:  # p
        if out["nonlinearity"]["kind"] != "pure_power":
            raise ConfigError("sweeping p requires a pure_power nonlinearity")
        out["nonlinearity"]["params"]["p"] = value
    return {"problem": out}


def _sweep_point(payload):
    cfg, axis, value, grid_blk, solver_blk = payload
    ps = build_problem(_axis_spec(cfg, axis, value))
    grid = build_grid({"grid": grid_blk})
    opts = SolverOptions(**solver_blk)
    try:
        sr = solve_ground_state(ps, opts, grid=grid)
        ok = sr.status == "converged"
        return (value, sr.m, sr.pohozaev_residual, sr.ode_res, 1.0 if ok else 0.0)
    except (InitialIterateNotInLambda, BracketingFailed, NotInLambda):
        return (value, np.nan, np.nan, np.nan, 0.0)


def cmd_sweep(cfg: dict, digest: str, outdir: Path, args) -> int:
    if "lambda_grid" not in cfg and "sweep" not in cfg:
        raise ConfigError("sweep needs a lambda_grid or a sweep block in the config")
    ps = build_problem(cfg)
    grid = build_grid(cfg)
    opts = build_options(cfg, args.seed)

    if "lambda_grid" in cfg:
        # warm-started in descending lambda: inherently sequential
        sw = lambda_sweep(ps, cfg["lambda_grid"], opts=opts, grid=grid)
        rows = np.column_stack([sw.lambdas, sw.m_inf_values, sw.c_upper_values])
        _write_csv(outdir / "sweep.csv", "lambda,m_lambda_inf,c_upper", rows, digest)
        _write_metadata(outdir, digest, "sweep")
        if np.any(np.isnan(sw.m_inf_values)):
            print("some lambda points failed to converge (NaN rows)", file=sys.stderr)
            return 2
        return 0

    blk = cfg["sweep"]
    solver_blk = dict(cfg.get("solver", {}))
    if args.seed is not None:
        solver_blk["seed"] = int(args.seed)
    grid_blk = cfg.get("grid", {})
    payloads = [(cfg, blk["axis"], float(v), grid_blk, solver_blk) for v in blk["values"]]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(p) for p in payloads]
    _write_csv(
        outdir / "sweep.csv",
        f"{blk['axis']},m,pohozaev_residual,ode_residual,converged",
        np.asarray(rows),
        digest,
    )
    _write_metadata(outdir, digest, "sweep")
    return 0 if all(r[4] == 1.0 for r in rows) else 2


def cmd_fibering(cfg: dict, digest: str, outdir: Path, args) -> int:
    ps = build_problem(cfg)
    grid = build_grid(cfg)
    blk = cfg.get("t_scan", {})
    ts = np.geomspace(blk.get("t_lo", 1e-2), blk.get("t_hi", 1e2), blk.get("n", 200))
    try:
        u = initial_iterate(grid, ps)
    except InitialIterateNotInLambda as e:
        print(f"no admissible profile to scan: {e}", file=sys.stderr)
        return 2
    scan = fibering_scan(u, ps, ts)
    rows = np.column_stack([scan.ts, scan.zeta, scan.dzeta, scan.pohozaev_of_ut, scan.iip_gap])
    _write_csv(outdir / "fibering.csv", "t,zeta,dzeta,pohozaev,iip_gap", rows, digest)
    _write_metadata(outdir, digest, "fibering")
    return 0


# ---------------------------------------------------------------------------
# entry point

_COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
    "fibering": cmd_fibering,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kirchhoff-gs",
        description="Ground states of the Kirchhoff-type equation via dilation-manifold minimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", default=None, help="output directory (default: config output_dir or cwd)")
        p.add_argument("--workers", type=int, default=1, help="parallel workers for sweep points")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, digest = load_config(args.config)
        outdir = Path(args.out or cfg.get("output_dir", "."))
        outdir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, digest, outdir, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
