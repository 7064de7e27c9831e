"""Command-line interface.

Every subcommand resolves its options from flags, an optional JSON config
file (flags win), and for the seed the RCL_SEED environment variable as a
last resort. JSON results are wrapped in a fixed envelope whose data section
is byte-identical across reruns with the same config; only the wall-time
field varies. Table-like subcommands (sieve-dump, quadruples) emit CSV with
the config echoed in comment lines. Exit codes: 0 success, 2 usage error,
3 domain error, 4 infeasible scale request.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .curves import exponent_scan, integral_points
from .errors import DomainError, InfeasibleScaleError
from .fluctuations import build_prime_class_sets, lil_scan, scale_set
from .moments import gcd_class_histogram, moment_report
from .poly import IntPolynomial, classify, fixed_divisor, is_admissible
from .rmf import monte_carlo_clt
from .sieve import kappa_euler, sieve_values, smooth_count

_TOOL = "polyrmf"


@dataclasses.dataclass(frozen=True)
class _Opt:
    name: str
    type: type
    default: object = None
    required: bool = False
    choices: tuple | None = None
    help: str = ""


_COMMON = (
    _Opt("seed", int, None, help="root seed (falls back to RCL_SEED, then 0)"),
    _Opt("threads", int, 1, help="worker bound; the implementation is single-threaded"),
)

_SPECS: dict[str, tuple[_Opt, ...]] = {
    "kappa": (
        _Opt("poly", str, required=True, help="coefficients, constant first, e.g. 1,0,1"),
        _Opt("prime_bound", int, 100_000, help="Euler product truncation"),
    ),
    "sieve-dump": (
        _Opt("poly", str, required=True),
        _Opt("n_max", int, required=True),
        _Opt("max_rows", int, 0, help="emit only the first rows (0 = all)"),
    ),
    "moments": (
        _Opt("poly", str, required=True),
        _Opt("n_max", int, required=True),
        _Opt("gcd_threshold", int, 0, help="also histogram pair gcds above this (0 = skip)"),
        _Opt("pairs", int, 0, help="sampled gcd pairs (0 = exhaustive)"),
        _Opt("histogram_csv", str, help="write the gcd histogram here"),
    ),
    "quadruples": (
        _Opt("poly", str, required=True),
        _Opt("n_grid", str, "500,1000,2000,4000", help="comma-separated range cutoffs"),
    ),
    "clt": (
        _Opt("poly", str, required=True),
        _Opt("n_max", int, required=True),
        _Opt("trials", int, 1000),
        _Opt("model", str, "rademacher", choices=("rademacher", "steinhaus")),
        _Opt("normalization", str, "exact", choices=("exact", "kappa")),
        _Opt("prime_bound", int, 100_000),
        _Opt("histogram_csv", str, help="write the normalized-sum histogram here"),
    ),
    "curves": (
        _Opt("poly", str, required=True),
        _Opt("a", int, help="solve a*P(x) = b*P(y) for this fixed pair"),
        _Opt("b", int),
        _Opt("n_max", int),
        _Opt("n_grid", str, help="scan mode: comma-separated cutoffs"),
        _Opt("ab_samples", int, 100),
        _Opt("ab_max", int, 1000),
        _Opt("max_points", int, 1000, help="cap on points listed in the output"),
        _Opt("points_csv", str, help="write the solution points here"),
    ),
    "fluctuations": (
        _Opt("base", int, 16),
        _Opt("scales", int, 8, help="number of scales"),
        _Opt("mode", str, "geometric", choices=("theoretical", "geometric")),
        _Opt("cap", int, 1_000_000),
        _Opt("c", float, 0.01, help="threshold constant"),
        _Opt("trials", int, 500),
        _Opt("verify", bool, False, help="recheck set invariants against the table"),
        _Opt("scale_csv", str, help="write the per-scale table here"),
    ),
    "smooth": (
        _Opt("x", int, required=True),
        _Opt("y", int, required=True),
    ),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=_TOOL, description=__doc__)
    parser.add_argument("--version", action="version", version=f"{_TOOL} {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="command")
    for name, spec in _SPECS.items():
        sp = subs.add_parser(name)
        for opt in spec + _COMMON:
            flag = "--" + opt.name.replace("_", "-")
            if opt.type is bool:
                sp.add_argument(flag, action="store_const", const=True, default=None,
                                help=opt.help)
            else:
                sp.add_argument(flag, type=opt.type, default=None,
                                choices=opt.choices, help=opt.help)
        sp.add_argument("--config", type=str, default=None,
                        help="JSON file of options; explicit flags override it")
        sp.add_argument("--output", type=str, default=None,
                        help="write the result here instead of stdout")
        sp.add_argument("--dry-run", action="store_true",
                        help="print the resolved plan and exit")
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    spec = _SPECS[args.command] + _COMMON
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        known = {o.name for o in spec}
        unknown = set(file_cfg) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    cfg: dict = {"command": args.command}
    for opt in spec:
        v = getattr(args, opt.name)
        if v is None and opt.name in file_cfg:
            raw = file_cfg[opt.name]
            v = bool(raw) if opt.type is bool else opt.type(raw)
            if opt.choices and v not in opt.choices:
                raise ValueError(f"{opt.name} must be one of {opt.choices}")
        if v is None:
            v = opt.default
        if v is None and opt.required:
            raise ValueError(f"missing required option --{opt.name.replace('_', '-')}")
        cfg[opt.name] = v
    if cfg.get("seed") is None:
        cfg["seed"] = int(os.environ.get("RCL_SEED", "0"))
    if cfg.get("threads") is not None and cfg["threads"] < 1:
        raise ValueError("threads must be >= 1")
    return cfg


def _parse_poly(text: str) -> IntPolynomial:
    try:
        return IntPolynomial.from_string(text)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad polynomial {text!r}: {exc}") from exc


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        grid = tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError as exc:
        raise ValueError(f"bad integer list {text!r}") from exc
    if not grid or grid[0] < 1:
        raise ValueError("grid entries must be positive")
    return grid


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def _csv_header(cfg: dict, extra: dict | None = None) -> list[str]:
    lines = [f"# {_TOOL} {cfg['command']} {__version__}"]
    lines.append("# config: " + json.dumps(_plain(cfg), sort_keys=True))
    for k, v in (extra or {}).items():
        lines.append(f"# {k}: {v}")
    return lines


def _run_kappa(cfg: dict):
    p = _parse_poly(cfg["poly"])
    value = kappa_euler(p, prime_bound=cfg["prime_bound"])
    data = {
        "poly": str(p),
        "kind": classify(p).kind,
        "fixed_divisor": fixed_divisor(p),
        "admissible": is_admissible(p),
        "prime_bound": cfg["prime_bound"],
        "kappa": value,
    }
    return data, None


def _run_sieve_dump(cfg: dict):
    p = _parse_poly(cfg["poly"])
    table = sieve_values(p, cfg["n_max"])
    limit = cfg["max_rows"] or table.n_max
    rows = ["n,value,is_squarefree,largest_prime,factors"]
    for rec in table:
        if rec.n > limit:
            break
        fs = "*".join(f"{q}^{e}" for q, e in rec.factors)
        lp = "" if rec.largest_prime is None else str(rec.largest_prime)
        rows.append(f"{rec.n},{rec.value},{int(rec.is_squarefree)},{lp},{fs}")
    return None, "\n".join(rows) + "\n"


def _run_moments(cfg: dict):
    p = _parse_poly(cfg["poly"])
    table = sieve_values(p, cfg["n_max"])
    data = _plain(moment_report(table))
    data["poly"] = str(p)
    if cfg["gcd_threshold"]:
        hist = gcd_class_histogram(
            table,
            threshold=cfg["gcd_threshold"],
            pairs=cfg["pairs"] or None,
            seed=cfg["seed"],
        )
        data["gcd_histogram"] = _plain(hist)
        if cfg["histogram_csv"]:
            lines = _csv_header(cfg) + ["gcd,count"]
            lines += [f"{d},{c}" for d, c in hist.counts]
            with open(cfg["histogram_csv"], "w") as fh:
                fh.write("\n".join(lines) + "\n")
    return data, None


def _run_quadruples(cfg: dict):
    p = _parse_poly(cfg["poly"])
    grid = _parse_grid(cfg["n_grid"])
    rows = []
    for n in grid:
        table = sieve_values(p, n)
        rep = moment_report(table)
        rows.append((n, rep.fourth_moment, rep.diagonal_term, rep.off_diagonal,
                     rep.off_diagonal / n**2))
    pos = [(n, r) for n, _, _, _, r in rows if r > 0]
    slope = ""
    if len(pos) >= 2:
        lx = np.log([n for n, _ in pos])
        ly = np.log([r for _, r in pos])
        slope = f"{np.polyfit(lx, ly, 1)[0]:.6f}"
    lines = [f"# loglog_slope: {slope or 'undefined'}"]
    lines.append("n,fourth_moment,diagonal,off_diagonal,ratio")
    for n, f4, diag, off, ratio in rows:
        lines.append(f"{n},{f4},{diag},{off},{ratio!r}")
    return None, "\n".join(lines) + "\n"


def _run_clt(cfg: dict):
    p = _parse_poly(cfg["poly"])
    report = monte_carlo_clt(
        p,
        n_max=cfg["n_max"],
        trials=cfg["trials"],
        seed=cfg["seed"],
        model=cfg["model"],
        normalization=cfg["normalization"],
        prime_bound=cfg["prime_bound"],
    )
    if cfg["histogram_csv"]:
        lines = _csv_header(cfg) + ["bin_left,bin_right,count"]
        for i, c in enumerate(report.hist_counts):
            lines.append(f"{report.hist_edges[i]!r},{report.hist_edges[i + 1]!r},{c}")
        with open(cfg["histogram_csv"], "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return _plain(report), None


def _run_curves(cfg: dict):
    p = _parse_poly(cfg["poly"])
    fixed = cfg["a"] is not None or cfg["b"] is not None
    if fixed:
        if cfg["a"] is None or cfg["b"] is None or cfg["n_max"] is None:
            raise ValueError("fixed-pair mode needs --a, --b and --n-max")
        pts = integral_points(p, cfg["a"], cfg["b"], cfg["n_max"])
        shown = pts[: cfg["max_points"]]
        data = {
            "poly": str(p),
            "a": cfg["a"],
            "b": cfg["b"],
            "n_max": cfg["n_max"],
            "count": len(pts),
            "truncated": len(shown) < len(pts),
            "points": [[x, y] for x, y in shown],
        }
        if cfg["points_csv"]:
            lines = _csv_header(cfg) + ["x,y"]
            lines += [f"{x},{y}" for x, y in pts]
            with open(cfg["points_csv"], "w") as fh:
                fh.write("\n".join(lines) + "\n")
        return data, None
    if not cfg["n_grid"]:
        raise ValueError("scan mode needs --n-grid (or pass --a/--b/--n-max)")
    report = exponent_scan(
        p,
        n_values=_parse_grid(cfg["n_grid"]),
        ab_samples=cfg["ab_samples"],
        seed=cfg["seed"],
        ab_max=cfg["ab_max"],
    )
    return _plain(report), None


def _run_fluctuations(cfg: dict):
    scales = scale_set(cfg["base"], cfg["scales"], mode=cfg["mode"], cap=cfg["cap"])
    sets = build_prime_class_sets(scales, c=cfg["c"])
    report = lil_scan(scales, trials=cfg["trials"], seed=cfg["seed"], sets=sets)
    data = _plain(report)
    if cfg["verify"]:
        data["invariants"] = sets.verify_invariants()
    if cfg["scale_csv"]:
        lines = _csv_header(cfg)
        lines.append("i,x,set_size,candidate_size,class1_squarefree,beta_exact,beta_hat,sigma_hat")
        for i, x in enumerate(report.xs):
            lines.append(
                f"{i + 1},{x},{report.sizes[i]},{report.candidate_sizes[i]},"
                f"{report.class1_sf[i]},{report.beta_exact[i]!r},"
                f"{report.beta_hat[i]!r},{report.sigma_hat[i]!r}"
            )
        with open(cfg["scale_csv"], "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return data, None


def _run_smooth(cfg: dict):
    count = smooth_count(cfg["x"], cfg["y"])
    data = {
        "x": cfg["x"],
        "y": cfg["y"],
        "count": count,
        "proportion": count / cfg["x"],
        "log_ratio": math.log(cfg["x"]) / math.log(cfg["y"]),
    }
    return data, None


_RUNNERS = {
    "kappa": _run_kappa,
    "sieve-dump": _run_sieve_dump,
    "moments": _run_moments,
    "quadruples": _run_quadruples,
    "clt": _run_clt,
    "curves": _run_curves,
    "fluctuations": _run_fluctuations,
    "smooth": _run_smooth,
}


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"type": kind, "message": message}}) + "\n")


def _write_out(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = _resolve_config(args)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _emit_error("UsageError", str(exc))
        return 2
    if args.dry_run:
        plan = {
            "schema_version": 1,
            "tool": {"name": _TOOL, "version": __version__},
            "config": _plain(cfg),
            "data": {"dry_run": True},
        }
        _write_out(json.dumps(plan, indent=2, sort_keys=True) + "\n", args.output)
        return 0
    t0 = time.perf_counter()
    try:
        data, text = _RUNNERS[args.command](cfg)
    except InfeasibleScaleError as exc:
        _emit_error("InfeasibleScaleError", str(exc))
        return 4
    except DomainError as exc:
        _emit_error("DomainError", str(exc))
        return 3
    except ValueError as exc:
        _emit_error("UsageError", str(exc))
        return 2
    wall = time.perf_counter() - t0
    if text is not None:
        header = _csv_header(cfg, {"wall_time_s": f"{wall:.6f}"})
        _write_out("\n".join(header) + "\n" + text, args.output)
        return 0
    envelope = {
        "schema_version": 1,
        "tool": {"name": _TOOL, "version": __version__},
        "config": _plain(cfg),
        "wall_time_s": round(wall, 6),
        "data": data,
    }
    _write_out(json.dumps(envelope, indent=2, sort_keys=True) + "\n", args.output)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
