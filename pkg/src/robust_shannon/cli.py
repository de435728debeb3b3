"""Command-line front end.

Loads covariance/channel matrices from JSON, runs the classical and compound
computations, sweeps grids, runs the verification oracles, and emits CSV or
JSON. Output is byte-stable for a fixed command line and seed: numbers are
serialized with full round-trip precision and rows in deterministic order.

Exit codes: 0 success, 1 verification suite failed, 2 config/domain error,
3 solver did not converge, 4 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .classical import ChannelMatrix, gaussian_capacity, gaussian_rdf
from .compound import (
    CompoundCapacityRequest,
    CompoundRdfRequest,
    SolverDiagnostics,
    compound_capacity,
    compound_rdf,
    sweep_compound,
)
from .errors import RobustShannonError, SolverNoConverge
from .oracle import check_gelbrich, random_seeded_laws, sampler_dominance_checks
from .psd_geometry import BwBall, SpdMatrix

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NO_CONVERGE = 3
EXIT_IO = 4

THREADS_ENV = "ROBUST_SHANNON_THREADS"

CLASSICAL_DIAGNOSTICS = SolverDiagnostics(0, 0.0, True, "classical")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def load_covariance(path: str) -> SpdMatrix:
    """Load {"dim": d, "rows": [[...], ...]} as a covariance matrix.

    Rows are averaged with their transpose; relative asymmetry above 1e-6
    is rejected.
    """
    m = _load_matrix(path)
    asym = float(np.abs(m - m.T).max())
    scale = max(float(np.abs(m).max()), 1e-300)
    if asym > 1e-6 * scale:
        raise ValueError(f"{path}: matrix asymmetry {asym:.3e} exceeds 1e-6 relative")
    return SpdMatrix(0.5 * (m + m.T))


def load_channel(path: str) -> ChannelMatrix:
    """Load a channel matrix from the same JSON layout (no symmetrization)."""
    return ChannelMatrix(_load_matrix(path))


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(payload, dict) or "dim" not in payload or "rows" not in payload:
        raise ValueError(f'{path}: expected an object with "dim" and "rows"')
    rows = np.asarray(payload["rows"], dtype=float)
    dim = payload["dim"]
    if rows.ndim != 2 or rows.shape != (dim, dim):
        raise ValueError(f"{path}: rows must form a {dim}x{dim} matrix")
    return rows


def _parse_grid(text: str) -> list[float]:
    """Either a single float or 'start:stop:count'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec must be start:stop:count, got {text!r}")
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
        if count < 1:
            raise ValueError(f"grid count must be at least 1, got {count}")
        return [float(v) for v in np.linspace(start, stop, count)]
    return [float(text)]


def _parse_float_list(text: str) -> list[float]:
    values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    if not values:
        raise ValueError(f"empty list: {text!r}")
    return values


def _resolve_center(args) -> SpdMatrix:
    if args.sigma0_scalar is not None:
        if args.sigma0_scalar <= 0:
            raise ValueError(f"--sigma0-scalar must be positive, got {args.sigma0_scalar}")
        return SpdMatrix([[args.sigma0_scalar**2]])
    if args.center is None:
        raise ValueError("one of --center or --sigma0-scalar is required")
    return load_covariance(args.center)


def _resolve_channel(args, dim: int) -> ChannelMatrix:
    if getattr(args, "channel", None):
        channel = load_channel(args.channel)
        if channel.dim != dim:
            raise ValueError(f"channel dimension {channel.dim} does not match center {dim}")
        return channel
    return ChannelMatrix(np.eye(dim))


def _row(r, budget, value_nats, worst_case_trace, diagnostics):
    return {
        "r": float(r),
        "budget": float(budget),
        "value_nats": float(value_nats),
        "worst_case_trace": float(worst_case_trace),
        "diagnostics": diagnostics,
    }


def emit(rows, fmt: str, units: str, stream) -> None:
    """Write result rows as CSV (header + data, LF endings) or a JSON array."""
    if not rows:
        raise ValueError("nothing to emit")
    bits = units == "bits"
    if fmt == "csv":
        header = "r,budget,value_nats" + (",value_bits" if bits else "") + ",worst_case_trace"
        lines = [header]
        for row in rows:
            fields = [_fmt(row["r"]), _fmt(row["budget"]), _fmt(row["value_nats"])]
            if bits:
                fields.append(_fmt(row["value_nats"] / math.log(2)))
            fields.append(_fmt(row["worst_case_trace"]))
            lines.append(",".join(fields))
        stream.write("\n".join(lines) + "\n")
    else:
        payload = []
        for row in rows:
            diag = row["diagnostics"]
            item = {
                "r": row["r"],
                "budget": row["budget"],
                "value_nats": row["value_nats"],
            }
            if bits:
                item["value_bits"] = row["value_nats"] / math.log(2)
            item["worst_case_trace"] = row["worst_case_trace"]
            item["diagnostics"] = None if diag is None else {
                "iterations": diag.iterations,
                "final_step_norm": diag.final_step_norm,
                "converged": diag.converged,
                "solver_path": diag.solver_path,
            }
            payload.append(item)
        stream.write(json.dumps(payload, indent=2) + "\n")
    stream.flush()


def _sweep_workers() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{THREADS_ENV} must be nonnegative, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value


def _cmd_rdf(args, out) -> int:
    center = _resolve_center(args)
    value = gaussian_rdf(center, args.distortion)
    emit([_row(0.0, args.distortion, value, center.trace, CLASSICAL_DIAGNOSTICS)],
         args.format, args.units, out)
    return EXIT_OK


def _cmd_capacity(args, out) -> int:
    center = _resolve_center(args)
    channel = _resolve_channel(args, center.dim)
    rate, _, _ = gaussian_capacity(channel, center, args.power)
    emit([_row(0.0, args.power, rate, center.trace, CLASSICAL_DIAGNOSTICS)],
         args.format, args.units, out)
    return EXIT_OK


def _cmd_compound_rdf(args, out) -> int:
    center = _resolve_center(args)
    request = CompoundRdfRequest(BwBall(center, args.radius), args.distortion)
    result = compound_rdf(request, value_tol=args.solver_tol)
    emit([_row(args.radius, args.distortion, result.value_nats,
               result.worst_case_cov.trace, result.diagnostics)],
         args.format, args.units, out)
    return EXIT_OK


def _cmd_compound_capacity(args, out) -> int:
    center = _resolve_center(args)
    channel = _resolve_channel(args, center.dim)
    request = CompoundCapacityRequest(BwBall(center, args.radius), channel, args.power)
    result = compound_capacity(request, value_tol=args.solver_tol)
    emit([_row(args.radius, args.power, result.value_nats,
               result.worst_case_cov.trace, result.diagnostics)],
         args.format, args.units, out)
    return EXIT_OK


def _cmd_sweep(args, out) -> int:
    center = _resolve_center(args)
    radii = _parse_float_list(args.radii)
    if any(r < 0 for r in radii):
        raise ValueError("radii must be nonnegative")
    if args.kind == "rdf":
        if args.distortion is None:
            raise ValueError("sweep --kind rdf requires --distortion")
        budgets = _parse_grid(args.distortion)
        base = CompoundRdfRequest(BwBall(center, radii[0]), budgets[0])
    else:
        if args.power is None:
            raise ValueError("sweep --kind capacity requires --power")
        budgets = _parse_grid(args.power)
        channel = _resolve_channel(args, center.dim)
        base = CompoundCapacityRequest(BwBall(center, radii[0]), channel, max(budgets[0], 0.0))
    grid = sorted((r, b) for r in radii for b in budgets)
    points = sweep_compound(
        args.kind, base, grid, max_workers=_sweep_workers(), value_tol=args.solver_tol
    )
    rows = [
        _row(p.r, p.budget, p.value_nats, p.worst_case_trace, None) for p in points
    ]
    emit(rows, args.format, args.units, out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    failures = 0
    if args.suite == "gelbrich":
        for index, (p, q) in enumerate(random_seeded_laws(args.seed, pairs=5)):
            report = check_gelbrich(p, q, 256, args.seed + 1000 + index)
            status = "PASS" if report.lower_bound_ok else "FAIL"
            failures += not report.lower_bound_ok
            out.write(
                f"{status} gelbrich pair={index} empirical={report.empirical:.6g} "
                f"closed_form={report.gelbrich_closed_form:.6g}\n"
            )
    else:
        for line, ok in sampler_dominance_checks(args.seed, draws=200):
            failures += not ok
            out.write(("PASS " if ok else "FAIL ") + line + "\n")
    out.write(f"{'OK' if failures == 0 else 'FAILED'}: suite={args.suite} seed={args.seed}\n")
    out.flush()
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robust-shannon",
        description="Gaussian rate-distortion and capacity, classical and worst-case "
        "over Bures-Wasserstein ambiguity balls.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, with_seed=True):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--units", choices=("nats", "bits"), default="nats")
        if with_seed:
            p.add_argument("--seed", type=int, default=0)

    def add_solver_tol(p):
        p.add_argument(
            "--solver-tol",
            type=float,
            default=1e-10,
            help="relative value-stagnation tolerance of the compound solvers",
        )

    def add_center(p):
        p.add_argument("--center", help="covariance matrix JSON file")
        p.add_argument(
            "--sigma0-scalar",
            type=float,
            help="scalar nominal standard deviation (bypasses --center for d=1)",
        )

    p = sub.add_parser("rdf", help="classical Gaussian rate-distortion")
    add_center(p)
    p.add_argument("--distortion", type=float, required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_rdf)

    p = sub.add_parser("capacity", help="classical Gaussian channel capacity")
    add_center(p)
    p.add_argument("--channel", help="channel matrix JSON file (default identity)")
    p.add_argument("--power", type=float, required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_capacity)

    p = sub.add_parser("compound-rdf", help="worst-case rate-distortion over a ball")
    add_center(p)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--distortion", type=float, required=True)
    add_solver_tol(p)
    add_common(p)
    p.set_defaults(handler=_cmd_compound_rdf)

    p = sub.add_parser("compound-capacity", help="worst-case capacity over a ball")
    add_center(p)
    p.add_argument("--channel", help="channel matrix JSON file (default identity)")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--power", type=float, required=True)
    add_solver_tol(p)
    add_common(p)
    p.set_defaults(handler=_cmd_compound_capacity)

    p = sub.add_parser("sweep", help="evaluate a (radius, budget) grid")
    p.add_argument("--kind", choices=("rdf", "capacity"), required=True)
    add_center(p)
    p.add_argument("--channel", help="channel matrix JSON file (capacity only)")
    p.add_argument("--radii", required=True, help="comma-separated radii")
    p.add_argument("--distortion", help="distortion value or start:stop:count grid")
    p.add_argument("--power", help="power value or start:stop:count grid")
    add_solver_tol(p)
    add_common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("verify", help="run a verification oracle suite")
    p.add_argument("--suite", choices=("gelbrich", "dominance"), default="gelbrich")
    add_common(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, sys.stdout)
    except SolverNoConverge as exc:
        diag = exc.diagnostics
        detail = f" after {diag.iterations} iterations" if diag is not None else ""
        sys.stderr.write(f"error: solver did not converge{detail}: {exc}\n")
        return EXIT_NO_CONVERGE
    except (ValueError, RobustShannonError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"error: output failed: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
