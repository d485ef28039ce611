"""Command-line front end: scenario configs in, JSON/CSV reports out.

Subcommands
-----------
analyze <config>    full discernibility report for one topology variation
enumerate <config>  one table row per single-link variation of the base graph
paper-example       run the bundled demonstration scenario with validation

Config schema (JSON)
--------------------
{
  "node_dynamics": {"n": 3, "A": [  ... n*n row-major ... ], "B": [ ... ]},
  "base_graph":    {"nodes": 4, "edges": [{"i": 1, "j": 2, "w": 1.0}, ...]},
  "variation":     {"modified_graph": { ... graph ... }}
                 | {"link": {"kind": "remove_edge", "i": 1, "j": 3}}
                 | {"enumerate": {"kinds": ["remove_edge", "add_edge"]}},
  "options":       {"tol": 1e-8, "validate": true, "seed": 0, ...}
}

Exit codes: 0 success, 1 input error, 2 oracle validation failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .discernibility import AnalyzeOptions, DiscernibilityReport, analyze
from .example import example_config
from .graphs import (
    Graph,
    LinkVariation,
    VARIATION_KINDS,
    enumerate_single_link_variations,
    laplacian,
)
from .linalg import Subspace
from .network import NetworkInvariantMode, NodeDynamics
from .oracle import DEFAULT_TIME_GRID, OracleConfig, ValidationSummary


class ConfigError(ValueError):
    """Invalid input configuration (exit code 1)."""


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float cannot be serialized")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".17g")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits.
    Re-reading and re-serializing a canonical document is byte-identical."""
    out = io.StringIO()
    _emit(obj, out, 0)
    out.write("\n")
    return out.getvalue()


def _emit(obj, out: io.StringIO, level: int) -> None:
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        keys = sorted(obj)
        for idx, key in enumerate(keys):
            if not isinstance(key, str):
                raise ValueError("JSON object keys must be strings")
            out.write(f"{inner}{json.dumps(key)}: ")
            _emit(obj[key], out, level + 1)
            out.write(",\n" if idx < len(keys) - 1 else "\n")
        out.write(f"{pad}}}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.write("[]")
            return
        out.write("[\n")
        for idx, item in enumerate(obj):
            out.write(inner)
            _emit(item, out, level + 1)
            out.write(",\n" if idx < len(obj) - 1 else "\n")
        out.write(f"{pad}]")
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif obj is None:
        out.write("null")
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        out.write(_fmt_float(obj))
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__}")


def _write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename, so an
    interrupted run never leaves a partial output file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def load_config(path: str) -> dict:
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"invalid config in {path}: top level must be an object")
    return data


def _parse_matrix(entries, n: int, name: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim == 1:
        if arr.size != n * n:
            raise ConfigError(
                f"invalid config: {name} has {arr.size} entries, expected {n * n}"
            )
        arr = arr.reshape(n, n)
    elif arr.shape != (n, n):
        raise ConfigError(
            f"invalid config: {name} has shape {arr.shape}, expected ({n}, {n})"
        )
    return arr


def _parse_dynamics(data: dict) -> NodeDynamics:
    try:
        nd = data["node_dynamics"]
        n = int(nd["n"])
        A = _parse_matrix(nd["A"], n, "A")
        B = _parse_matrix(nd["B"], n, "B")
    except KeyError as exc:
        raise ConfigError(f"invalid config: missing node_dynamics key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: bad node_dynamics ({exc})") from exc
    try:
        return NodeDynamics(A, B)
    except ValueError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def _parse_graph(data, context: str) -> Graph:
    if not isinstance(data, dict):
        raise ConfigError(f"invalid config: {context} must be an object")
    try:
        nodes = int(data["nodes"])
        edges = [
            (int(e["i"]), int(e["j"]), float(e.get("w", 1.0)))
            for e in data.get("edges", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: bad {context} ({exc})") from exc
    try:
        return Graph(nodes, tuple(edges))
    except ValueError as exc:
        raise ConfigError(f"invalid config: {context}: {exc}") from exc


def _parse_link(data: dict) -> LinkVariation:
    try:
        kind = data["kind"]
    except KeyError as exc:
        raise ConfigError("invalid config: link variation needs a kind") from exc
    if kind not in VARIATION_KINDS:
        raise ConfigError(f"invalid config: unknown variation kind {kind!r}")
    try:
        if kind == "disconnect_node":
            return LinkVariation(kind, int(data["node"]))
        target = (int(data["i"]), int(data["j"]))
        w = data.get("w")
        return LinkVariation(kind, target, None if w is None else float(w))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: bad link variation ({exc})") from exc


def _parse_options(data: dict) -> dict:
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ConfigError("invalid config: options must be an object")
    known = {
        "tol",
        "rank_tol",
        "angle_tol",
        "validate",
        "seed",
        "sample_count",
        "rel_tol",
        "time_grid",
        "power_range",
    }
    unknown = set(opts) - known
    if unknown:
        raise ConfigError(f"invalid config: unknown options {sorted(unknown)}")
    return opts


def _time_grid_from(opts: dict) -> tuple[float, ...]:
    grid = opts.get("time_grid")
    if grid is None:
        return DEFAULT_TIME_GRID
    if isinstance(grid, dict):
        try:
            t_max = float(grid["t_max"])
            step = float(grid["step"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: bad time_grid ({exc})") from exc
        if step <= 0 or t_max < 0:
            raise ConfigError("invalid config: time_grid needs step > 0, t_max >= 0")
        count = int(round(t_max / step)) + 1
        return tuple(float(k * step) for k in range(count))
    try:
        return tuple(float(t) for t in grid)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: bad time_grid ({exc})") from exc


def _analyze_options(opts: dict, cli_tol, cli_seed, cli_validate) -> AnalyzeOptions:
    eig_tol = float(opts.get("tol", 1e-8)) if cli_tol is None else float(cli_tol)
    seed = int(opts.get("seed", 0)) if cli_seed is None else int(cli_seed)
    validate = bool(opts.get("validate", False)) or cli_validate
    try:
        power_range = opts.get("power_range")
        oracle = OracleConfig(
            time_grid=_time_grid_from(opts),
            power_range=None if power_range is None else int(power_range),
            rel_tol=float(opts.get("rel_tol", 1e-7)),
            sample_count=int(opts.get("sample_count", 100)),
            seed=seed,
        )
        return AnalyzeOptions(
            rank_tol=float(opts.get("rank_tol", 1e-10)),
            angle_tol=float(opts.get("angle_tol", 1e-8)),
            eig_tol=eig_tol,
            validate=validate,
            oracle=oracle,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc}") from exc


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------


def _complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _subspace_dict(S: Subspace) -> dict:
    basis = np.asarray(S.basis)
    if np.iscomplexobj(basis):
        basis = basis.real if np.max(np.abs(basis.imag), initial=0.0) < 1e-12 else None
    if basis is None:
        raise ValueError("cannot serialize a complex subspace basis")
    return {
        "ambient_dim": int(S.ambient_dim),
        "dim": int(S.dim),
        "basis": [float(x) for x in basis.reshape(-1)],  # row-major ambient x dim
    }


def _mode_dict(mode: NetworkInvariantMode) -> dict:
    return {
        "value": _complex_pair(mode.value),
        "vector": [_complex_pair(z) for z in np.asarray(mode.vector).reshape(-1)],
    }


def _summary_dict(summary: ValidationSummary) -> dict:
    worst_out = summary.outside_worst_gap
    return {
        "rel_tol": float(summary.rel_tol),
        "seed": int(summary.seed),
        "inside_total": int(summary.inside_total),
        "inside_pass": int(summary.inside_pass),
        "inside_worst_gap": float(summary.inside_worst_gap),
        "outside_total": int(summary.outside_total),
        "outside_pass": int(summary.outside_pass),
        "outside_worst_gap": None if worst_out is None else float(worst_out),
        "passed": bool(summary.passed),
    }


def report_to_dict(report: DiscernibilityReport) -> dict:
    corrected = report.corrected
    return {
        "node_count": int(report.node_count),
        "node_dim": int(report.node_dim),
        "ambient_dim": int(report.ambient_dim),
        "verdict": report.verdict,
        "indiscernible": _subspace_dict(report.indiscernible),
        "sync": _subspace_dict(report.sync),
        "sync_overlap_dim": int(report.sync_overlap_dim),
        "extra_dim": int(report.extra_dim),
        "shared_modal": _subspace_dict(report.shared_modal),
        "invariant_modes": [_mode_dict(m) for m in report.invariant_modes],
        "corrected_condition": {
            "verdict": corrected.verdict,
            "reading": corrected.reading,
            "tol": float(corrected.tol),
            "min_cross_gap": float(corrected.min_cross_gap)
            if math.isfinite(corrected.min_cross_gap)
            else None,
            "collisions": [
                {
                    "alpha_i": float(ai),
                    "alpha_j": float(aj),
                    "value": _complex_pair(lam),
                }
                for ai, aj, lam in corrected.collisions
            ],
        },
        "oracle": None
        if report.oracle_summary is None
        else _summary_dict(report.oracle_summary),
    }


def _gaps_csv(summary: ValidationSummary) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "gap"])
    for t, gap in summary.continuous_trace:
        writer.writerow([_fmt_float(t), _fmt_float(gap)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# subcommand drivers
# ---------------------------------------------------------------------------


def _resolve_pair(config: dict) -> tuple[NodeDynamics, Graph, Graph]:
    dyn = _parse_dynamics(config)
    if "base_graph" not in config:
        raise ConfigError("invalid config: missing base_graph")
    base = _parse_graph(config["base_graph"], "base_graph")
    variation = config.get("variation")
    if not isinstance(variation, dict):
        raise ConfigError("invalid config: variation must be an object")
    if "modified_graph" in variation:
        varied = _parse_graph(variation["modified_graph"], "modified_graph")
        if varied.node_count != base.node_count:
            raise ConfigError(
                "invalid config: node counts differ between base and modified graphs "
                f"({base.node_count} vs {varied.node_count})"
            )
    elif "link" in variation:
        link = _parse_link(variation["link"])
        try:
            varied = link.apply(base)
        except ValueError as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
    elif "enumerate" in variation:
        raise ConfigError(
            "invalid config: this scenario enumerates variations; "
            "use the enumerate subcommand"
        )
    else:
        raise ConfigError(
            "invalid config: variation must contain modified_graph, link, or enumerate"
        )
    return dyn, base, varied


def run_analyze(config: dict, out_dir: str, cli_tol=None, cli_seed=None,
                cli_validate: bool = False) -> int:
    """Analyze one explicit variation; writes report.json (+ gaps.csv when
    validating).  Returns the process exit code."""
    dyn, base, varied = _resolve_pair(config)
    opts = _analyze_options(_parse_options(config), cli_tol, cli_seed, cli_validate)
    report = analyze(dyn, laplacian(base), laplacian(varied), opts)

    os.makedirs(out_dir, exist_ok=True)
    _write_atomic(
        os.path.join(out_dir, "report.json"), canonical_json(report_to_dict(report))
    )
    if report.oracle_summary is not None:
        _write_atomic(
            os.path.join(out_dir, "gaps.csv"), _gaps_csv(report.oracle_summary)
        )

    print(f"verdict: {report.verdict}")
    print(
        f"indiscernible dim {report.indiscernible.dim} "
        f"(sync {report.sync.dim}, extra {report.extra_dim}); "
        f"corrected condition {report.corrected.verdict}"
    )
    if report.oracle_summary is not None:
        s = report.oracle_summary
        print(
            f"oracle: inside {s.inside_pass}/{s.inside_total}, "
            f"outside {s.outside_pass}/{s.outside_total}"
        )
        if not s.passed:
            print("oracle validation FAILED", file=sys.stderr)
            return 2
    return 0


def _variation_row(args) -> tuple[int, dict]:
    idx, A, B, L, Lvar, descr, kind, opts_dict = args
    dyn = NodeDynamics(A, B)
    opts = AnalyzeOptions(**opts_dict) if opts_dict else AnalyzeOptions()
    report = analyze(dyn, L, Lvar, opts)
    row = {
        "variation": descr,
        "kind": kind,
        "indiscernible_dim": int(report.indiscernible.dim),
        "extra_dim": int(report.extra_dim),
        "corrected_condition": report.corrected.verdict,
        "verdict": report.verdict,
        "oracle_passed": None
        if report.oracle_summary is None
        else bool(report.oracle_summary.passed),
    }
    return idx, row


def run_enumerate(config: dict, out_dir: str, cli_tol=None, cli_seed=None,
                  cli_validate: bool = False, jobs: int = 1) -> int:
    """Analyze every single-link variation of the base graph; one table row
    per variation, merged deterministically by enumeration order."""
    dyn = _parse_dynamics(config)
    if "base_graph" not in config:
        raise ConfigError("invalid config: missing base_graph")
    base = _parse_graph(config["base_graph"], "base_graph")
    variation = config.get("variation")
    if not isinstance(variation, dict) or "enumerate" not in variation:
        raise ConfigError("invalid config: enumerate needs variation.enumerate")
    spec = variation["enumerate"]
    if not isinstance(spec, dict) or "kinds" not in spec:
        raise ConfigError("invalid config: variation.enumerate needs kinds")
    kinds = spec["kinds"]
    if not isinstance(kinds, list) or not kinds:
        raise ConfigError("invalid config: enumerate kinds must be a nonempty list")
    reweight_to = spec.get("reweight_to")
    opts = _analyze_options(_parse_options(config), cli_tol, cli_seed, cli_validate)

    try:
        entries = enumerate_single_link_variations(
            base, kinds, None if reweight_to is None else float(reweight_to)
        )
    except ValueError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc

    L = laplacian(base)
    opts_dict = {
        "rank_tol": opts.rank_tol,
        "angle_tol": opts.angle_tol,
        "eig_tol": opts.eig_tol,
        "validate": opts.validate,
        "oracle": opts.oracle,
    }
    tasks = [
        (idx, dyn.A, dyn.B, L, Lvar, var.describe(), var.kind, opts_dict)
        for idx, (var, _, Lvar) in enumerate(entries)
    ]
    if jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_variation_row, tasks))
    else:
        results = [_variation_row(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    rows = [row for _, row in results]

    os.makedirs(out_dir, exist_ok=True)
    _write_atomic(
        os.path.join(out_dir, "variations.json"), canonical_json({"rows": rows})
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["variation", "indiscernible_dim", "extra_dim", "corrected_condition"])
    for row in rows:
        writer.writerow(
            [
                row["variation"],
                row["indiscernible_dim"],
                row["extra_dim"],
                row["corrected_condition"],
            ]
        )
    _write_atomic(os.path.join(out_dir, "variations.csv"), out.getvalue())

    width = max([len(r["variation"]) for r in rows] + [len("variation")])
    print(f"{'variation':<{width}}  ind_dim  extra_dim  corrected")
    for row in rows:
        print(
            f"{row['variation']:<{width}}  {row['indiscernible_dim']:>7}  "
            f"{row['extra_dim']:>9}  {row['corrected_condition']}"
        )
    if opts.validate and any(row["oracle_passed"] is False for row in rows):
        print("oracle validation FAILED", file=sys.stderr)
        return 2
    return 0


def run_paper_example(out_dir: str, cli_tol=None, cli_seed=None) -> int:
    """Run the bundled scenario with oracle validation enabled."""
    return run_analyze(
        example_config(validate=True), out_dir, cli_tol, cli_seed, cli_validate=True
    )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netdiscern",
        description=(
            "Decide whether a topology variation in a network of identical "
            "linear subsystems is detectable from its natural response."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="eigenvalue-matching tolerance override")
        p.add_argument("--seed", type=int, default=None,
                       help="oracle sampling seed override")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for enumerate")

    pa = sub.add_parser("analyze", help="analyze one topology variation")
    pa.add_argument("config", help="scenario config JSON")
    pa.add_argument("--validate", action="store_true",
                    help="check the result against the trajectory oracle")
    add_common(pa)

    pe = sub.add_parser("enumerate", help="analyze every single-link variation")
    pe.add_argument("config", help="scenario config JSON")
    pe.add_argument("--validate", action="store_true",
                    help="check each row against the trajectory oracle")
    add_common(pe)

    pp = sub.add_parser("paper-example",
                        help="run the bundled demonstration scenario")
    add_common(pp)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            config = load_config(args.config)
            return run_analyze(config, args.out, args.tol, args.seed, args.validate)
        if args.command == "enumerate":
            config = load_config(args.config)
            return run_enumerate(
                config, args.out, args.tol, args.seed, args.validate, args.jobs
            )
        return run_paper_example(args.out, args.tol, args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
