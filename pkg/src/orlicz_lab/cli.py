"""Command-line front end.

Every command writes one report (JSON by default, CSV on request) that
embeds its effective configuration.  Exit codes: 0 when every ``pass`` /
``holds`` field is true, 1 when one is false or a contract error occurs,
2 when Undecided verdicts dominate, 64 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from .catalog import FAMILY_NAMES, catalog
from .convergence import CONVERGED, DIVERGED, UNDECIDED, Budget, detect_strong, detect_weak
from .ito_nisio import (DICHOTOMY_BUDGET, dichotomy_experiment, equidistribution_check,
                        levy_check_exhaustive)
from .orlicz_pettis import OP_BUDGET, BudgetExhausted, extract_blocks, op_experiment
from .randomness import Seed, default_seed
from .series import CoefficientSeq, SIGNS, partial_sum
from .space_core import (ContractError, density_sup, monomial_functionals, norm, norming_family,
                         pair)

SCHEMA = 1
MONOMIAL_LABELS = ("1_[0,1]", "1_[0,1/2]", "t", "t^2")
EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _param(text: str) -> tuple[str, Fraction]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("parameters look like name=value")
    return key.strip(), _fraction(value)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if hasattr(x, "item"):
        return x.item()
    return str(x)


def _budget(args) -> Budget:
    defaults = args.budget_default
    return Budget(n_max=args.n_max or defaults.n_max,
                  eps_grid=tuple(args.eps) if args.eps else defaults.eps_grid,
                  k_functionals=args.k or defaults.k_functionals,
                  candidate_count=args.candidates or defaults.candidate_count)


def _family(args, precision="float64"):
    params = dict(args.param or [])
    return catalog(args.family, params, precision)


def _family_config(spec) -> dict:
    return {"family": spec.name, "params": {k: str(v) for k, v in spec.params}}


# --- commands -------------------------------------------------------------

def cmd_levy(args) -> dict:
    s, spec = _family(args, "exact")
    res = levy_check_exhaustive(s.terms(args.n - 1), args.r)
    return {**_family_config(spec), "result": res, "pass": res["holds"]}


def cmd_equidist(args) -> dict:
    s, spec = _family(args, "exact")
    res = equidistribution_check(s.terms(args.m), args.n, args.m)
    return {**_family_config(spec), "result": res, "pass": res["multiset_equal"]}


def cmd_dichotomy(args) -> dict:
    s, spec = _family(args)
    b = _budget(args)
    res = dichotomy_experiment(s, args.samples, b, norming_family(s.space), Seed(args.seed))
    return {**_family_config(spec), "budget": b.to_dict(), "result": res,
            "pass": res["pass"], "undecided": res["inconclusive"]}


def cmd_op_demo(args) -> dict:
    s, spec = _family(args)
    b = _budget(args)
    T = "all" if args.T == "all" else frozenset(int(t) for t in args.T.split(",") if t)
    out = {**_family_config(spec), "budget": b.to_dict(),
           "T": "all" if T == "all" else sorted(T)}
    try:
        part = extract_blocks(s, args.delta, args.blocks, b)
    except BudgetExhausted as e:
        out["extraction"] = {"status": "BudgetExhausted", "message": str(e),
                             "blocks": [list(x) for x in e.blocks], "delta": e.delta}
        out["pass"] = False
        return out
    out["extraction"] = {"status": "ok", "blocks": part.to_list(), "delta": part.delta,
                         "block_norms": list(part.block_norms)}
    fam = _weak_family(s.space)
    res = op_experiment(s, part, T, args.samples, fam, b, Seed(args.seed))
    out["result"] = res
    out["pass"] = res["pass"]
    out["undecided"] = res["frac_undecided"] > 0.2
    return out


def _weak_family(space):
    try:
        return norming_family(space)
    except ContractError:
        return monomial_functionals(space)


def counterexample_budget(n: int) -> Budget:
    """Budget for the monomial table: eps = 2^-1, 2^-3, ... above 1 / (3n/4 + 1)."""
    cap = (3 * n) // 4
    grid = tuple(Fraction(1, 2 ** k) for k in range(1, 64, 2) if 2 ** k < cap + 1)
    if not grid:
        raise ContractError("n too small for a counterexample table (need n >= 4)")
    return Budget(n_max=n, eps_grid=grid)


def counterexample(n: int) -> dict:
    """Pairings and norms of Sigma_N = t^N, plus the detector verdicts."""
    s, spec = catalog("linf_monomial", precision="exact")
    fs = monomial_functionals(s.space)
    ones = CoefficientSeq.constant(SIGNS, 1)
    labels = MONOMIAL_LABELS
    rows = []
    for N in range(n + 1):
        sN = partial_sum(s, ones, N)
        vals = [pair(L, sN) for L in fs.functionals]
        bounds = [Fraction(density_sup(L)).limit_denominator() / (N + 1) for L in fs.functionals]
        rows.append({"N": N, **{f"pair[{lab}]": v for lab, v in zip(labels, vals)},
                     "norm": norm(sN),
                     "bound_ok": all(abs(v) <= bd for v, bd in zip(vals, bounds))})
    b = counterexample_budget(n)
    sf = catalog("linf_monomial")[0]
    fs_float = monomial_functionals(sf.space)
    weak = detect_weak(sf, ones, fs_float, b)
    strong = detect_strong(sf, ones, b)
    weak_to_zero = weak.outcome == CONVERGED and all(
        r["candidate"] is None for r in weak.certificate["per_eps"])
    ok = (all(r["bound_ok"] for r in rows) and all(r["norm"] == 1 for r in rows)
          and weak_to_zero and strong.outcome == DIVERGED)
    return {"rows": rows, "budget": b.to_dict(), "weak": weak.to_dict(),
            "strong": strong.to_dict(), "weak_limit_zero": weak_to_zero, "pass": ok}


def cmd_counterexample(args) -> dict:
    res = counterexample(args.n)
    undecided = UNDECIDED in (res["weak"]["outcome"], res["strong"]["outcome"])
    return {"family": "linf_monomial", "params": {}, "result": res, "pass": res["pass"],
            "undecided": undecided}


def cmd_catalog(args) -> dict:
    rows = []
    for name in FAMILY_NAMES:
        _, spec = catalog(name)
        d = spec.to_dict()
        rows.append({"name": name, "space": d["space"]["kind"], "params": d["params"],
                     **{f"oracle.{k}": v for k, v in d["oracle"].items()}})
    return {"result": {"families": rows}, "pass": True}


# --- plumbing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orlicz-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, family=True, budget=False):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, default=None,
                        help="default: $ORLICZ_LAB_SEED or a fixed constant")
        if family:
            sp.add_argument("--family", required=True, choices=FAMILY_NAMES)
            sp.add_argument("--param", type=_param, action="append",
                            help="family parameter, e.g. alpha=3/5 (repeatable)")
        if budget:
            sp.add_argument("--n-max", type=int)
            sp.add_argument("--eps", type=_fraction, nargs="+")
            sp.add_argument("--k", type=int, help="functionals per weak check")
            sp.add_argument("--candidates", type=int)

    sp = sub.add_parser("levy", help="exhaustive maximal inequality on a family prefix")
    common(sp)
    sp.add_argument("--n", type=int, required=True, help="number of terms")
    sp.add_argument("--r", type=_fraction, required=True)
    sp.set_defaults(func=cmd_levy)

    sp = sub.add_parser("equidist", help="multiset check of Sigma_M against Sigma_M - 2 Sigma_N")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_equidist)

    sp = sub.add_parser("dichotomy", help="strong vs weak verdicts over random signs")
    common(sp, budget=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_dichotomy, budget_default=DICHOTOMY_BUDGET)

    sp = sub.add_parser("op-demo", help="scan, extract blocks, run the coarse experiment")
    common(sp, budget=True)
    sp.add_argument("--delta", type=_fraction, default=None)
    sp.add_argument("--blocks", type=int, default=8)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--T", default="all", help='"all" or comma-separated block ids')
    sp.set_defaults(func=cmd_op_demo, budget_default=OP_BUDGET)

    sp = sub.add_parser("counterexample", help="monomial table of pairings and norms")
    common(sp, family=False)
    sp.add_argument("--n", type=int, default=64)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("catalog", help="list the series families")
    common(sp, family=False)
    sp.set_defaults(func=cmd_catalog)
    return p


def _config(args) -> dict:
    skip = {"func", "format", "out", "budget_default"}
    return _jsonable({k: v for k, v in sorted(vars(args).items()) if k not in skip})


def _flatten(d, prefix="") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out[key] = json.dumps(v)
        else:
            out[key] = json.dumps(v) if isinstance(v, list) else v
    return out


def to_csv(report: dict) -> str:
    """Table-shaped results become one row each; anything else one flattened row."""
    result = report.get("result", {})
    table = result.get("rows") or result.get("families")
    rows = table if table else [_flatten(report)]
    buf = io.StringIO()
    fields = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
    return buf.getvalue()


def run(argv=None) -> tuple[int, dict | None]:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE, None
    if args.seed is None:
        args.seed = default_seed()
    if hasattr(args, "budget_default"):
        try:
            b = _budget(args)
        except ContractError as e:
            print(f"orlicz-lab {args.command}: {e}", file=sys.stderr)
            return EXIT_USAGE, None
        args.n_max, args.eps = b.n_max, list(b.eps_grid)
        args.k, args.candidates = b.k_functionals, b.candidate_count
    report = {"schema": SCHEMA, "command": args.command, "config": _config(args),
              "timestamp": datetime.now(timezone.utc).isoformat()}
    try:
        body = args.func(args)
    except ContractError as e:
        report.update({"error": type(e).__name__, "message": str(e), "pass": False})
        code = EXIT_FAIL
    else:
        undecided = body.pop("undecided", False)
        report.update(body)
        code = EXIT_OK if report["pass"] else (EXIT_UNDECIDED if undecided else EXIT_FAIL)
    report = _jsonable(report)
    text = to_csv(report) if args.format == "csv" else json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code, report


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
