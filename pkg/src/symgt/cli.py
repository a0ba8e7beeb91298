"""Command-line entry point: ``symgt <command> [options]``.

Payloads (JSON or CSV) go to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 property violation or decoding ambiguity, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import design_bounds as db
from .decoding_sim import CSV_HEADER, TrialConfig, run_trials
from .info_measures import AGT, GGT, SGT, TestModel
from .superimposed_codes import (
    bch_parity_check,
    find_dependent_columns,
    load_matrix,
    save_matrix,
    verify_disjunct,
    verify_separable,
)

TABLE1_HEADER = "m,p_star,eta1_star,eta2_star,alpha"
ALPHA_HEADER = "m,alpha_A,alpha_S,alpha_G"
BOUND_KINDS = (
    "sufficient_n",
    "necessary_n",
    "disjunct_maxN",
    "disjunct_maxN_agt",
    "separable_maxN",
    "rate_ratio",
    "gv_estimate",
    "sphere_estimate",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _need(args, *names) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _model_from(args) -> TestModel:
    kind = args.model[0] if isinstance(args.model, list) else args.model
    if kind is None:
        raise UsageError("--model is required")
    p = 0.5 if args.p is None else args.p
    try:
        if kind == GGT:
            return TestModel(kind, p, None, args.eta1, args.eta2)
        return TestModel(kind, p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands ---------------------------------------------------------------


def cmd_table1(args) -> int:
    if args.m_max is None or args.m_max < 2:
        raise UsageError("table1 needs --m-max >= 2")
    rows = []
    for m in range(2, args.m_max + 1):
        print(f"optimising m={m}", file=sys.stderr)
        rows.extend(db.alpha_opt(m, GGT).rows())
    rows.sort(key=lambda r: (r["m"], r["p_star"]))
    if args.format == "json":
        _emit_json(rows)
    else:
        out = [TABLE1_HEADER]
        out += [f"{r['m']},{r['p_star']:.3f},{r['eta1_star']},{r['eta2_star']},{r['alpha']!r}" for r in rows]
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_alpha(args) -> int:
    if args.m_max is None or args.m_max < 2:
        raise UsageError("alpha needs --m-max >= 2")
    kinds = args.model or [AGT, SGT, GGT]
    if args.q is not None and GGT in kinds:
        if args.model:
            raise UsageError("noisy GGT is not supported")
        kinds = [k for k in kinds if k != GGT]
    rows = []
    for m in range(2, args.m_max + 1):
        row = {"m": m, "alpha_A": None, "alpha_S": None, "alpha_G": None}
        for kind in kinds:
            res = db.alpha_opt(m, kind, None if kind == GGT else args.q, dps=args.dps)
            row["alpha_" + {AGT: "A", SGT: "S", GGT: "G"}[kind]] = float(res.value)
        rows.append(row)
    if args.format == "json":
        _emit_json({"q": args.q, "rows": rows})
    else:
        fmt = lambda v: "" if v is None else repr(v)  # noqa: E731
        out = [ALPHA_HEADER]
        out += [f"{r['m']},{fmt(r['alpha_A'])},{fmt(r['alpha_S'])},{fmt(r['alpha_G'])}" for r in rows]
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def _read_matrix(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return load_matrix(text)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read code matrix from {path}: {exc}") from exc


def cmd_verify(args) -> int:
    _need(args, "file", "property")
    code = _read_matrix(args.file)
    if args.property == "dmin5":
        dep = find_dependent_columns(code)
        payload = {"verdict": dep is None, "property": "dmin5", "m": None}
        if dep is not None:
            payload["counterexample"] = {"dependent_columns": list(dep)}
        _emit_json(payload)
        return 0 if dep is None else 1
    _need(args, "m")
    check = verify_disjunct if args.property == "disjunct" else verify_separable
    try:
        witness = check(code, args.m, force=args.force)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit_json(witness.to_dict(code))
    return 0 if witness.verdict else 1


def cmd_construct(args) -> int:
    _need(args, "k")
    try:
        H = bch_parity_check(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(save_matrix(H))
    return 0


def _bound_report(args) -> dict:
    kind = args.kind
    try:
        if kind in ("sufficient_n", "necessary_n"):
            _need(args, "N", "m")
            fn = db.sufficient_tests if kind == "sufficient_n" else db.necessary_tests
            return fn(args.N, args.m, _model_from(args)).to_dict()
        if kind in ("disjunct_maxN", "disjunct_maxN_agt"):
            _need(args, "n", "m")
            fn = db.lll_disjunct_maxN if kind == "disjunct_maxN" else db.lll_disjunct_maxN_agt
            return fn(args.n, args.m).to_dict()
        if kind == "separable_maxN":
            _need(args, "n")
            return db.lll_separable_maxN(args.n).to_dict()
        if kind == "rate_ratio":
            _need(args, "m")
            ratio = db.rate_ratio(args.m)
            logs = db.disjunct_rate(args.m, True) / db.disjunct_rate(args.m, False)
            return {"kind": kind, "exact": ratio, "asymptotic": logs, "m": args.m, "model": None, "inputs": {"m": args.m}}
        _need(args, "r")
        gv, sphere = db.construction_size_estimates(args.r)
        if kind == "gv_estimate":
            exact = db.gv_max_columns(args.r)
            return {"kind": kind, "exact": exact, "asymptotic": gv, "m": 2, "model": SGT, "inputs": {"r": args.r}}
        exact = db.sphere_min_columns(args.r)
        return {"kind": kind, "exact": exact, "asymptotic": sphere, "m": 2, "model": SGT, "inputs": {"r": args.r}}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bounds(args) -> int:
    _emit_json(_bound_report(args))
    return 0


def cmd_simulate(args) -> int:
    _need(args, "N", "m", "n")
    model = _model_from(args)
    try:
        config = TrialConfig(
            N=args.N,
            m=args.m,
            n=args.n,
            model=model,
            trials=args.trials,
            seed=args.seed,
            design=_read_matrix(args.file) if args.file else None,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = run_trials(config)
    if args.format == "csv":
        sys.stdout.write(CSV_HEADER + "\n" + report.csv_row() + "\n")
    else:
        payload = report.to_dict()
        payload["stderr"] = report.stderr
        _emit_json(payload)
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symgt", description="Symmetric group testing toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, fmt_default="json"):
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)

    sp = sub.add_parser("table1", help="optimal GGT probabilities and thresholds")
    sp.add_argument("--m-max", type=int)
    common(sp, "csv")
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("alpha", help="optimised alpha versus m")
    sp.add_argument("--m-max", type=int)
    sp.add_argument("--model", action="append", choices=(AGT, SGT, GGT))
    sp.add_argument("--q", type=float)
    sp.add_argument("--dps", type=int, help="refine in mpmath at this many digits")
    common(sp, "csv")
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("verify", help="check a code matrix file")
    sp.add_argument("--file")
    sp.add_argument("--property", choices=("disjunct", "separable", "dmin5"))
    sp.add_argument("--m", type=int)
    sp.add_argument("--force", action="store_true", help="lift the size guard")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("construct", help="print a construction")
    sp.add_argument("kind", choices=("bch",))
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("bounds", help="evaluate a bound")
    sp.add_argument("kind", choices=BOUND_KINDS)
    for flag in ("--N", "--m", "--n", "--r", "--eta1", "--eta2"):
        sp.add_argument(flag, type=int)
    sp.add_argument("--model", choices=(AGT, SGT, GGT))
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("simulate", help="Monte Carlo error rate")
    for flag in ("--N", "--m", "--n", "--eta1", "--eta2"):
        sp.add_argument(flag, type=int)
    sp.add_argument("--model", choices=(AGT, SGT, GGT), default=SGT)
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--file", help="fixed design matrix instead of random Bernoulli(p)")
    common(sp)
    sp.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        return args.func(args)
    except UsageError as exc:
        print(f"symgt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
