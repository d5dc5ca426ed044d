#!/usr/bin/env python3
"""
theta-gauss: batch evaluation and bound certification

Usage:
  python -m cli.main eval --kind 3 --v 0 --t 1                      # one value
  python -m cli.main certify --kind 3 --C 0.25 --eps 0.9 --t 0.1,0.2,0.3
  python -m cli.main table --kind 1 --v-range 0 1 --t-range 0.5 2 --steps 3 --out grid.csv
  python -m cli.main residual --kind 2 --v-range -1 1 --t-range 0.05 20 --steps 7 --geometric
  python -m cli.main history --limit 5                              # recent certification runs

Exit codes: 0 success / all bounds hold, 1 domain error or failed bound, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.table import Table

from telemetry.ledger import append_entry, read_recent
from theta.contracts import EvalReport, ThetaKind
from theta.core import theta_product, theta_series
from theta.errors import ThetaError
from theta.gauss import certify, certify_expansion, parallel_map, within_bound
from theta.logs import configure_logging
from theta.modular import IDENTITY_T_RANGE, theta_auto, theta_transformed, transform_identity_residual
from theta.oracle import oracle_relative_error, oracle_theta
from theta.settings import get_settings, load_profiles

log = logging.getLogger("theta.cli")

EVALUATORS = {
    "auto": theta_auto,
    "series": theta_series,
    "product": theta_product,
    "transformed": theta_transformed,
}

TABLE_HEADER = ["kind", "v", "t", "sign", "log_mag", "value", "method", "terms", "tail_bound_log"]
RESIDUAL_HEADER = ["kind", "v", "t", "residual"]
CERTIFY_HEADER = ["section", "kind", "t", "sup_log", "bound_log", "margin", "path", "pass", "decay_slope"]


# ---------------------------------------------------------------- argument types

def _kind(text: str) -> ThetaKind:
    try:
        return ThetaKind.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def parse_t_list(text: str) -> List[float]:
    """'0.1,0.2,0.3' or geometric 'start:stop:count'"""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            n = int(count)
            if n < 1 or float(start) <= 0 or float(stop) <= 0:
                raise ValueError
            return [float(t) for t in np.geomspace(float(start), float(stop), n)]
        values = [float(part) for part in text.split(",") if part.strip()]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list or start:stop:count, got {text!r}") from None


class _RangeAction(argparse.Action):
    """--v-range LO HI with LO <= HI; negative ends parse as plain numbers"""

    def __call__(self, parser, namespace, values, option_string=None):
        lo, hi = values
        if not lo <= hi:
            raise argparse.ArgumentError(self, f"empty range {lo!r} {hi!r}")
        setattr(namespace, self.dest, (lo, hi))


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text!r}")
    return n


# ---------------------------------------------------------------- formatting

def _json_num(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def eval_row(kind: ThetaKind, v: float, t: float, report: EvalReport) -> Dict[str, Any]:
    plain = report.value.to_plain()
    return {
        "kind": int(kind),
        "v": v,
        "t": t,
        "sign": report.value.sign,
        "log_mag": report.value.log_mag,
        "value": plain.value if plain.flag == "ok" else None,
        "flag": plain.flag,
        "method": report.method.value,
        "terms": report.terms_used,
        "tail_bound_log": report.tail_bound.log_mag,
    }


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _write_csv(rows: Iterable[Dict[str, Any]], header: Sequence[str], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in header])


def _json_ready(row: Dict[str, Any]) -> Dict[str, Any]:
    return {k: (_json_num(v) if isinstance(v, float) else v) for k, v in row.items()}


# ---------------------------------------------------------------- commands

def cmd_eval(args, console: Console) -> int:
    fn = EVALUATORS[args.method]
    report = fn(args.kind, args.v, args.t, args.tol)
    row = eval_row(args.kind, args.v, args.t, report)
    if args.check_oracle:
        digits = get_settings().oracle_digits
        row["oracle_rel_error"] = oracle_relative_error(report.value, oracle_theta(args.kind, args.v, args.t, digits))

    if args.format == "json":
        console.print_json(json.dumps(_json_ready(row)))
    elif args.format == "csv":
        buf = io.StringIO()
        _write_csv([row], TABLE_HEADER + (["oracle_rel_error"] if args.check_oracle else []), buf)
        console.out(buf.getvalue(), end="")
    else:
        for key, value in row.items():
            console.out(f"{key:>16} = {value!r}" if isinstance(value, float) else f"{key:>16} = {value}")
    return 0


def _certify_params(args) -> List[Dict[str, Any]]:
    """One parameter set per kind, from a profile and/or flags"""
    base: Dict[str, Any] = {"kinds": None, "C": None, "eps": None, "t": None, "x_count": 101, "a": 1.0}
    if args.profile:
        profiles = load_profiles()
        if args.profile not in profiles:
            raise ThetaError(f"unknown certification profile {args.profile!r}; known: {sorted(profiles)}")
        card = profiles[args.profile]
        base.update(kinds=[ThetaKind.parse(k) for k in card.kinds], C=card.C, eps=card.eps, t=card.t,
                    x_count=card.x_count, a=card.a)
    for key, flag in (("C", args.C), ("eps", args.eps), ("t", args.t), ("x_count", args.x_count), ("a", args.a)):
        if flag is not None:
            base[key] = flag
    if args.kind is not None:
        base["kinds"] = [args.kind]
    missing = [k for k in ("kinds", "C", "eps", "t") if base[k] is None]
    if missing:
        flags = {"kinds": "--kind", "C": "--C", "eps": "--eps", "t": "--t"}
        raise ThetaError(f"certify needs {', '.join(flags[m] for m in missing)} (or --profile)")
    return [dict(base, kind=k) for k in base["kinds"]]


def cmd_certify(args, console: Console) -> int:
    rows: List[Dict[str, Any]] = []
    slopes: Dict[int, Optional[float]] = {}
    all_pass = True
    for params in _certify_params(args):
        kind = params["kind"]
        report = certify(kind, params["C"], params["eps"], params["t"], params["x_count"])
        slopes[int(kind)] = report.decay_slope
        all_pass &= report.all_pass
        for t, sup, bound, path in zip(report.t_values, report.sup_measured, report.bounds, report.paths):
            rows.append({
                "section": "gaussian", "kind": int(kind), "t": t,
                "sup_log": sup.log_mag, "bound_log": bound.log_mag,
                "margin": bound.log_mag - sup.log_mag, "path": path,
                "pass": within_bound(sup, bound), "decay_slope": report.decay_slope,
            })
        expansion_t = [t for t in params["t"] if t < params["a"]]
        if expansion_t:
            exp = certify_expansion(kind, expansion_t, params["a"])
            all_pass &= exp.all_pass
            for t, sup, bound in zip(exp.t_values, exp.sup_measured, exp.bounds):
                rows.append({
                    "section": "expansion", "kind": int(kind), "t": t,
                    "sup_log": sup.log_mag, "bound_log": bound.log_mag,
                    "margin": bound.log_mag - sup.log_mag, "path": "",
                    "pass": within_bound(sup, bound), "decay_slope": None,
                })

    ledger = args.ledger or get_settings().ledger_path
    if ledger:
        try:
            append_entry({"command": "certify", "profile": args.profile, "all_pass": all_pass,
                          "decay_slopes": slopes, "rows": rows}, ledger)
        except OSError as e:
            log.warning("could not append to ledger %s: %s", ledger, e)

    if args.format == "json":
        console.print_json(json.dumps({"all_pass": all_pass, "decay_slopes": slopes,
                                       "rows": [_json_ready(r) for r in rows]}))
    elif args.format == "csv":
        buf = io.StringIO()
        _write_csv(rows, CERTIFY_HEADER, buf)
        console.out(buf.getvalue(), end="")
    else:
        table = Table(title="bound certification (logs are natural)")
        for col in CERTIFY_HEADER[:-1]:
            table.add_column(col)
        for r in rows:
            table.add_row(*[_csv_cell(r[col]) for col in CERTIFY_HEADER[:-1]])
        console.print(table)
        for kind, slope in slopes.items():
            console.out(f"decay_slope theta{kind} = {slope!r}")
        console.out(f"all_pass = {all_pass}")
    return 0 if all_pass else 1


def _grid(args) -> List[tuple]:
    # (t, v) pairs, t outer
    vs = [float(v) for v in np.linspace(*args.v_range, args.steps)]
    t_lo, t_hi = args.t_range
    if t_lo <= 0:
        raise ThetaError(f"t range must be positive, got {t_lo!r} {t_hi!r}")
    if args.geometric:
        ts = [float(t) for t in np.geomspace(t_lo, t_hi, args.steps)]
    else:
        ts = [float(t) for t in np.linspace(t_lo, t_hi, args.steps)]
    return [(t, v) for t in ts for v in vs]


def cmd_table(args, console: Console) -> int:
    grid = _grid(args)
    fn = EVALUATORS[args.method]
    rows = parallel_map(lambda tv: eval_row(args.kind, tv[1], tv[0], fn(args.kind, tv[1], tv[0], args.tol)), grid)

    if args.format == "json":
        text = json.dumps([_json_ready(r) for r in rows]) + "\n"
    else:
        buf = io.StringIO()
        _write_csv(rows, TABLE_HEADER, buf)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        log.info("wrote %d rows to %s", len(rows), args.out)
    else:
        console.out(text, end="")
    return 0


def cmd_residual(args, console: Console) -> int:
    """Series vs transformed disagreement over a grid; exit 1 above --max"""
    rows = parallel_map(
        lambda tv: {"kind": int(args.kind), "v": tv[1], "t": tv[0],
                    "residual": transform_identity_residual(args.kind, tv[1], tv[0])},
        _grid(args))
    worst = max(r["residual"] for r in rows)
    if args.format == "json":
        console.print_json(json.dumps({"max_residual": worst, "rows": rows}))
    else:
        buf = io.StringIO()
        _write_csv(rows, RESIDUAL_HEADER, buf)
        console.out(buf.getvalue(), end="")
    log.info("max identity residual %.3g over %d points", worst, len(rows))
    if args.max is not None and worst > args.max:
        print(f"ERROR: max residual {worst!r} exceeds {args.max!r}", file=sys.stderr)
        return 1
    return 0


def cmd_history(args, console: Console) -> int:
    ledger = args.ledger or get_settings().ledger_path
    if not ledger:
        raise ThetaError("no ledger configured; pass --ledger or set THETA_GAUSS_LEDGER")
    for entry in read_recent(args.limit, ledger):
        console.out(json.dumps(entry, ensure_ascii=False))
    return 0


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="theta-gauss",
        description="Certified Jacobi theta evaluation and Gaussian-approximation bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  theta-gauss eval --kind 3 --v 0.3 --t 0.01 --format json
  theta-gauss certify --kind 2 --C 1 --eps 0.5 --t 0.004,0.006
  theta-gauss certify --profile decay --format csv
  theta-gauss table --kind 3 --v-range 0 1 --t-range 0.01 10 --steps 9 --geometric --out grid.csv
  theta-gauss residual --kind 1 --v-range -2 2 --t-range 0.05 20 --steps 9 --geometric --max 1e-11
        """,
    )
    ap.add_argument("--log-level", default=None, help="Override THETA_GAUSS_LOG_LEVEL")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="Evaluate one theta value")
    ev.add_argument("--kind", type=_kind, required=True)
    ev.add_argument("--v", type=float, required=True)
    ev.add_argument("--t", type=float, required=True)
    ev.add_argument("--tol", type=float, default=1e-12)
    ev.add_argument("--method", choices=sorted(EVALUATORS), default="auto")
    ev.add_argument("--format", choices=["plain", "json", "csv"], default="plain")
    ev.add_argument("--check-oracle", action="store_true", help="Report the relative error against mpmath")

    ce = sub.add_parser("certify", help="Check the Gaussian and two-term bounds on a grid")
    ce.add_argument("--kind", type=_kind, default=None)
    ce.add_argument("--C", type=float, default=None)
    ce.add_argument("--eps", type=float, default=None)
    ce.add_argument("--t", type=parse_t_list, default=None, help="0.1,0.2 or start:stop:count (geometric)")
    ce.add_argument("--x-count", type=_positive_int, default=None)
    ce.add_argument("--a", type=float, default=None, help="Two-term bound parameter (default 1)")
    ce.add_argument("--format", choices=["plain", "json", "csv"], default="plain")
    ce.add_argument("--profile", default=None, help="Named profile from theta/profiles.yaml")
    ce.add_argument("--ledger", default=None, help="JSONL ledger to append the run to")

    ta = sub.add_parser("table", help="Evaluate on a v x t grid")
    ta.add_argument("--kind", type=_kind, required=True)
    ta.add_argument("--v-range", nargs=2, type=float, metavar=("LO", "HI"), action=_RangeAction, required=True)
    ta.add_argument("--t-range", nargs=2, type=float, metavar=("LO", "HI"), action=_RangeAction, required=True)
    ta.add_argument("--steps", type=_positive_int, default=5)
    ta.add_argument("--geometric", action="store_true", help="Geometric t spacing")
    ta.add_argument("--tol", type=float, default=1e-12)
    ta.add_argument("--method", choices=sorted(EVALUATORS), default="auto")
    ta.add_argument("--format", choices=["csv", "json"], default="csv")
    ta.add_argument("--out", default=None)

    re_ = sub.add_parser("residual", help="Series vs transformed identity residual on a grid")
    re_.add_argument("--kind", type=_kind, required=True)
    re_.add_argument("--v-range", nargs=2, type=float, metavar=("LO", "HI"), action=_RangeAction, required=True)
    re_.add_argument("--t-range", nargs=2, type=float, metavar=("LO", "HI"), action=_RangeAction, required=True,
                     help=f"Within [{IDENTITY_T_RANGE[0]}, {IDENTITY_T_RANGE[1]}]")
    re_.add_argument("--steps", type=_positive_int, default=5)
    re_.add_argument("--geometric", action="store_true", help="Geometric t spacing")
    re_.add_argument("--format", choices=["csv", "json"], default="csv")
    re_.add_argument("--max", type=float, default=None, help="Exit 1 when any residual exceeds this")

    hi = sub.add_parser("history", help="Show recent certification runs")
    hi.add_argument("--limit", type=_positive_int, default=20)
    hi.add_argument("--ledger", default=None)
    return ap


COMMANDS = {"eval": cmd_eval, "certify": cmd_certify, "table": cmd_table,
            "residual": cmd_residual, "history": cmd_history}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        level = args.log_level or get_settings().log_level
        configure_logging(level)
    except ValueError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 1

    console = Console(highlight=False, soft_wrap=True)
    try:
        return COMMANDS[args.command](args, console)
    except (ThetaError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
