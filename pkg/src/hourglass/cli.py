"""Command-line interface: JSON in, a single JSON report out.

Exit codes: 0 success, 1 property failure (a gap above tolerance under
--require-equality, or a failed alternative check), 2 unusable input
(malformed JSON, schema violations, shape or cap errors), 3 numerical
non-convergence.  All randomness derives from --seed, so identical
invocations produce byte-identical reports.  The environment variable
HOURGLASS_CAP overrides the default enumeration cap; an explicit --cap
flag wins over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .alternative import HourglassReport, check_hset_sampled
from .errors import CapExceededError, ParseError, ShapeError
from .linalg import Matrix, PerronData, spectral_radius
from .saddle import (
    Certificate,
    _table_data,
    certify_saddle,
    check_saddle_hull_samples,
    solve_saddle,
)
from .sets import (
    DEFAULT_CAP,
    FiniteSet,
    MatrixSet,
    enumerate_set,
    hausdorff_distance,
    random_iru_set,
    set_from_json,
    set_to_json,
)

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3


@dataclass
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    tol: float = 1e-9
    seed: int = 0
    probes: int = 50
    hull_samples: int = 0
    trials: int = 20
    cap: int = DEFAULT_CAP
    max_iter: int = 100_000
    certify: bool = False
    table: bool = False
    require_equality: bool = False
    output: str | None = None


def _env_cap() -> int:
    raw = os.environ.get("HOURGLASS_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ParseError("HOURGLASS_CAP", f"not an integer: {raw!r}") from exc
    if cap < 1:
        raise ParseError("HOURGLASS_CAP", "cap must be at least 1")
    return cap


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(path, str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def _load_matrix(path: str) -> Matrix:
    return Matrix.from_json(_load_json(path), location=path)


def _load_set(path: str) -> MatrixSet:
    return set_from_json(_load_json(path), location=path)


def _perron_json(perron: PerronData) -> dict:
    return {
        "rho": perron.rho,
        "vector": perron.vector.tolist(),
        "iterations": perron.iterations,
        "converged": perron.converged,
    }


def _certificate_json(cert: Certificate) -> dict:
    return {
        "a_residual": cert.a_residual,
        "b_residual": cert.b_residual,
        "valid": cert.valid,
        "conclusive": cert.conclusive,
    }


def _hourglass_report_json(report: HourglassReport) -> dict:
    def branch(b):
        return {
            "all_on_side": b.all_on_side,
            "witness": b.witness.to_json() if b.witness is not None else None,
            "satisfied": b.satisfied,
        }

    return {
        "probe_matrix": report.probe_matrix.to_json(),
        "probe_vector": report.probe_vector.tolist(),
        "h1": branch(report.h1),
        "h2": branch(report.h2),
        "holds": report.holds,
    }


def _cmd_spectral(config: RunConfig) -> tuple[int, dict]:
    matrix = _load_matrix(config.inputs[0])
    perron = spectral_radius(matrix, tol=config.tol, max_iter=config.max_iter)
    report = _perron_json(perron)
    if not perron.converged:
        report["error"] = {
            "kind": "non-convergence",
            "message": f"power iteration did not stabilize in {perron.iterations} steps",
        }
        return EXIT_NUMERIC, report
    return EXIT_OK, report


def _cmd_minimax(config: RunConfig) -> tuple[int, dict]:
    a_set = _load_set(config.inputs[0])
    b_set = _load_set(config.inputs[1])
    table, conv, _, _ = _table_data(a_set, b_set, config.cap, 1e-12, config.max_iter)
    minmax = float(table.max(axis=1).min())
    maxmin = float(table.min(axis=0).max())
    report = {"minmax": minmax, "maxmin": maxmin, "gap": minmax - maxmin}
    if config.table:
        report["table"] = table.tolist()
    if not conv.all():
        report["error"] = {
            "kind": "non-convergence",
            "message": f"{int((~conv).sum())} table entries did not stabilize",
        }
        return EXIT_NUMERIC, report
    if config.require_equality and report["gap"] > config.tol:
        return EXIT_PROPERTY, report
    return EXIT_OK, report


def _cmd_saddle(config: RunConfig) -> tuple[int, dict]:
    a_set = _load_set(config.inputs[0])
    b_set = _load_set(config.inputs[1])
    result = solve_saddle(a_set, b_set, cap=config.cap)
    report = {
        "a_tilde": result.a_tilde.to_json(),
        "b_tilde": result.b_tilde.to_json(),
        "value": result.value,
        "minmax": result.minmax,
        "maxmin": result.maxmin,
        "gap": result.gap,
        "w": result.w.tolist(),
        "perron": _perron_json(result.perron),
    }
    if config.certify:
        cert = certify_saddle(result, a_set, b_set, tol=config.tol, cap=config.cap)
        report["certificate"] = _certificate_json(cert)
    if config.hull_samples > 0:
        report["hull_samples"] = config.hull_samples
        report["hull_check"] = check_saddle_hull_samples(
            result,
            a_set,
            b_set,
            config.hull_samples,
            config.seed,
            tol=config.tol,
            cap=config.cap,
        )
    if not result.perron.converged:
        report["error"] = {
            "kind": "non-convergence",
            "message": "power iteration on the saddle product did not stabilize",
        }
        return EXIT_NUMERIC, report
    if config.require_equality and result.gap > config.tol:
        return EXIT_PROPERTY, report
    return EXIT_OK, report


def _cmd_hset_check(config: RunConfig) -> tuple[int, dict]:
    mset = _load_set(config.inputs[0])
    outcome = check_hset_sampled(
        mset, config.probes, config.seed, tol=config.tol, cap=config.cap
    )
    report = {
        "passed": outcome.passed,
        "probes_per_member": config.probes,
        "failures": len(outcome.failures),
    }
    if outcome.failures:
        report["first_failure"] = _hourglass_report_json(outcome.failures[0])
        return EXIT_PROPERTY, report
    return EXIT_OK, report


def _cmd_hausdorff(config: RunConfig) -> tuple[int, dict]:
    a_set = _load_set(config.inputs[0])
    b_set = _load_set(config.inputs[1])
    return EXIT_OK, {"distance": hausdorff_distance(a_set, b_set, cap=config.cap)}


def _cmd_algebra(config: RunConfig) -> tuple[int, dict]:
    mset = _load_set(config.inputs[0])
    members = enumerate_set(mset, cap=config.cap)
    return EXIT_OK, set_to_json(FiniteSet(members))


def _cmd_batch(config: RunConfig) -> tuple[int, dict]:
    rng = np.random.default_rng(config.seed)
    results = []
    max_gap = 0.0
    for index in range(config.trials):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(2, 4))
        a_set = random_iru_set(rng, n, m, max_rows_per_set=3)
        b_set = random_iru_set(rng, m, n, max_rows_per_set=3)
        solved = solve_saddle(a_set, b_set, cap=config.cap)
        max_gap = max(max_gap, solved.gap)
        results.append(
            {
                "trial": index,
                "n": n,
                "m": m,
                "value": solved.value,
                "minmax": solved.minmax,
                "maxmin": solved.maxmin,
                "gap": solved.gap,
            }
        )
    report = {
        "trials": config.trials,
        "tol": config.tol,
        "max_gap": max_gap,
        "all_within_tol": max_gap <= config.tol,
        "results": results,
    }
    if config.require_equality and max_gap > config.tol:
        return EXIT_PROPERTY, report
    return EXIT_OK, report


_COMMANDS = {
    "spectral": _cmd_spectral,
    "minimax": _cmd_minimax,
    "saddle": _cmd_saddle,
    "hset-check": _cmd_hset_check,
    "hausdorff": _cmd_hausdorff,
    "algebra": _cmd_algebra,
    "batch": _cmd_batch,
}


def run(config: RunConfig) -> tuple[int, dict]:
    """Dispatch a parsed configuration; returns (exit code, report)."""
    try:
        return _COMMANDS[config.command](config)
    except ParseError as exc:
        return EXIT_PARSE, {
            "error": {"kind": "parse", "location": exc.location, "message": exc.message}
        }
    except (CapExceededError, ShapeError, ValueError, TypeError) as exc:
        return EXIT_PARSE, {
            "error": {"kind": "input", "message": str(exc)}
        }


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hourglass",
        description=(
            "Saddle points, minimax tables, and alternative checks for "
            "spectral radii of products of non-negative matrices."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cap=True):
        if cap:
            p.add_argument("--cap", type=int, default=None, help="enumeration cap")
        p.add_argument("--out", default=None, help="write the report to a file")

    p = sub.add_parser("spectral", help="spectral radius of one matrix")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100_000)
    common(p, cap=False)

    p = sub.add_parser("minimax", help="min-max / max-min table reductions")
    p.add_argument("a_set", help="set JSON file for the minimizing player")
    p.add_argument("b_set", help="set JSON file for the maximizing player")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--table", action="store_true", help="include the full table")
    p.add_argument("--require-equality", action="store_true")
    common(p)

    p = sub.add_parser("saddle", help="solve and optionally certify a saddle")
    p.add_argument("a_set")
    p.add_argument("b_set")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--certify", action="store_true")
    p.add_argument("--hull-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--require-equality", action="store_true")
    common(p)

    p = sub.add_parser("hset-check", help="sampled alternative check of one set")
    p.add_argument("set", help="set JSON file")
    p.add_argument("--probes", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)

    p = sub.add_parser("hausdorff", help="Hausdorff distance of two sets")
    p.add_argument("a_set")
    p.add_argument("b_set")
    common(p)

    p = sub.add_parser("algebra", help="materialize a set to its finite form")
    p.add_argument("set")
    common(p)

    p = sub.add_parser("batch", help="random equality sweep over IRU pairs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--require-equality", action="store_true")
    common(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = tuple(
        getattr(args, name)
        for name in ("matrix", "a_set", "b_set", "set")
        if getattr(args, name, None) is not None
    )
    cap = getattr(args, "cap", None)
    if cap is not None and cap < 1:
        raise ParseError("--cap", "cap must be at least 1")
    tol = getattr(args, "tol", 1e-9)
    if not tol > 0:
        raise ParseError("--tol", "tolerance must be positive")
    return RunConfig(
        command=args.command,
        inputs=inputs,
        tol=tol,
        seed=getattr(args, "seed", 0),
        probes=getattr(args, "probes", 50),
        hull_samples=getattr(args, "hull_samples", 0),
        trials=getattr(args, "trials", 20),
        cap=cap if cap is not None else _env_cap(),
        max_iter=getattr(args, "max_iter", 100_000),
        certify=getattr(args, "certify", False),
        table=getattr(args, "table", False),
        require_equality=getattr(args, "require_equality", False),
        output=getattr(args, "out", None),
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ParseError as exc:
        _emit(
            {"error": {"kind": "parse", "location": exc.location, "message": exc.message}},
            getattr(args, "out", None),
        )
        return EXIT_PARSE
    code, report = run(config)
    _emit(report, config.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
