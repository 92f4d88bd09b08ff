"""Command-line interface.

Every command reads bid lists in the canonical JSON layout of
:meth:`sslearn.core.BidList.dumps` and writes plain ``key=value`` reports.
Exit status is 0 on success, 1 when learning or validation fails and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from .bridge import ValuationOracle, demand_from_valuation
from .core import BidList, bidlists_equal, format_point, load_bidlist, parse_point, random_bidlist
from .gadgets import CellOutOfRange, adversarial_instance, lower_bound_experiment
from .learn_general import LimitExceeded, Limits, NoFacetFound, learn_general_run, verify_learned
from .learn_positive import InvariantViolation, learn_positive_bids
from .oracle import CATEGORIES, DemandOracle, demand_set, is_marginal
from .validity import is_valid


class UsageError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def format_report(bids: BidList, rows: dict) -> str:
    head = f"n={bids.n} B={len(bids)} M={bids.magnitude} W={bids.max_weight}"
    return "\n".join([head] + [f"{k}={_fmt(v)}" for k, v in rows.items()]) + "\n"


def _ledger_rows(oracle) -> dict:
    snap = oracle.ledger.snapshot()
    rows = {"queries_total": snap["total"]}
    rows.update({f"queries_{c}": snap[c] for c in CATEGORIES})
    return rows


def _emit(text: str, report: str | None, out) -> None:
    out.write(text)
    if report:
        with open(report, "w") as fh:
            fh.write(text)


def _load(path: str | None) -> BidList:
    if not path:
        raise UsageError("--bids is required")
    try:
        return load_bidlist(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a bid-list file: {exc}") from exc


def _price(text: str | None, n: int):
    if text is None:
        raise UsageError("--price is required")
    try:
        p = parse_point(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(p) != n:
        raise UsageError(f"price has {len(p)} entries, bid list has {n} goods")
    return p


def _save(bids: BidList, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(bids.dumps())


# --------------------------------------------------------------------------
# commands


def cmd_demand(args, out) -> int:
    bids = _load(args.bids)
    p = _price(args.price, bids.n)
    oracle = DemandOracle(bids)
    rows = {"price": format_point(p), "marginal": is_marginal(bids, p), "bundle": oracle.query(p)}
    if rows["marginal"] and args.all:
        rows["demand_set"] = " ".join("(" + _fmt(x) + ")" for x in sorted(demand_set(bids, p)))
    _emit(format_report(bids, rows), args.report, out)
    return 0


def cmd_learn_positive(args, out) -> int:
    hidden = _load(args.bids)
    oracle = DemandOracle(hidden)
    try:
        learnt = learn_positive_bids(oracle)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ok = bidlists_equal(learnt, hidden)
    _save(learnt, args.out)
    rows = _ledger_rows(oracle)
    rows["recovered"] = ok
    _emit(format_report(hidden, rows), args.report, out)
    return 0 if ok else 1


def cmd_learn_general(args, out) -> int:
    hidden = _load(args.bids)
    oracle = DemandOracle(hidden)
    try:
        run = learn_general_run(oracle, Limits(max_vertices=args.max_vertices))
    except (LimitExceeded, NoFacetFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = _ledger_rows(oracle)
    check = DemandOracle(hidden)
    rows["hyperplanes"] = len(run.arrangement)
    rows["vertices"] = len(run.arrangement.vertices)
    rows["verified"] = verify_learned(check, run.bids, args.trials, args.seed, run.magnitude)
    rows["recovered"] = bidlists_equal(run.bids, hidden)
    _save(run.bids, args.out)
    _emit(format_report(hidden, rows), args.report, out)
    return 0 if rows["recovered"] and rows["verified"] else 1


def cmd_validate(args, out) -> int:
    bids = _load(args.bids)
    result = is_valid(bids)
    rows = {"valid": result is True}
    if result is not True:
        rows.update(price=format_point(result.p), goods=(result.i, result.j), support_weight=result.total)
    _emit(format_report(bids, rows), args.report, out)
    return 0 if result is True else 1


def cmd_gadget(args, out) -> int:
    cell = (0,) * args.n if args.cell is None else tuple(int(v) for v in args.cell.split(","))
    try:
        bids = adversarial_instance(args.n, args.k, cell)
    except CellOutOfRange as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        _save(bids, args.out)
    else:
        out.write(bids.dumps())
    return 0


def cmd_bench(args, out) -> int:
    rng = random.Random(args.seed)
    cols = ["instance", "n", "B", "M", "W"] + list(CATEGORIES) + ["total", "recovered"]
    lines = ["\t".join(cols)]
    failures = 0
    for k in range(args.count):
        n = rng.randint(1, args.n)
        size = rng.randint(1, args.size)
        hidden = random_bidlist(rng, n, size, rng.randint(0, args.magnitude), max_weight=args.max_weight)
        oracle = DemandOracle(hidden)
        if args.learner == "positive":
            learnt = learn_positive_bids(oracle)
        else:
            learnt = learn_general_run(oracle, Limits(max_vertices=args.max_vertices)).bids
        ok = bidlists_equal(learnt, hidden)
        failures += not ok
        snap = oracle.ledger.snapshot()
        row = [k, n, len(hidden), hidden.magnitude, hidden.max_weight] + [snap[c] for c in CATEGORIES]
        row += [snap["total"], _fmt(ok)]
        lines.append("\t".join(str(v) for v in row))
    _emit("\n".join(lines) + "\n", args.report, out)
    return 0 if failures == 0 else 1


def cmd_bench_lower_bound(args, out) -> int:
    rep = lower_bound_experiment(args.n, args.k, args.seed, Limits(max_vertices=args.max_vertices))
    head = f"n={rep['n']} B={rep['B']} M={rep['M']} W={rep['W']}"
    rows = {
        "k": rep["k"],
        "B_units": rep["B_units"],
        "B_formula": rep["B_formula"],
        "hidden_cell": rep["hidden_cell"],
        "located_cell": rep["located_cell"],
        "recovered": rep["recovered"],
        "hyperplanes": rep["hyperplanes"],
        "vertices": rep["vertices"],
        "queries_total": rep["queries_used"],
    }
    rows.update({f"queries_{c}": v for c, v in rep["queries_by_category"].items()})
    rows["k_power_n"] = rep["k_power_n"]
    rows["floor"] = rep["floor"]
    rows["above_floor"] = rep["queries_used"] >= rep["floor"]
    text = "\n".join([head] + [f"{k}={_fmt(v)}" for k, v in rows.items()]) + "\n"
    _emit(text, args.report, out)
    return 0 if rep["recovered"] else 1


def cmd_bridge_demo(args, out) -> int:
    bids = _load(args.bids)
    if not bids.is_positive:
        raise UsageError("bridge-demo needs a bid list with positive weights only")
    p = _price(args.price, bids.n)
    vo = ValuationOracle.from_bids(bids)
    x = demand_from_valuation(vo, p)
    direct = DemandOracle(bids).query(p)
    marginal = is_marginal(bids, p)
    rows = {
        "price": format_point(p),
        "marginal": marginal,
        "bundle_from_valuation": x,
        "bundle_direct": direct,
        "valuation_queries": vo.queries,
        "query_bound": (bids.n + 1) ** 2 * (vo.L + 1),
    }
    agree = x in demand_set(bids, p) if marginal else x == direct
    rows["agree"] = agree
    _emit(format_report(bids, rows), args.report, out)
    return 0 if agree else 1


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sslearn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--report", help="also write the report to this file")
        return sp

    sp = add("demand", cmd_demand, "evaluate demand at a price")
    sp.add_argument("--bids", required=True)
    sp.add_argument("--price", required=True, help='comma-separated rationals, e.g. "3,5/2"')
    sp.add_argument("--all", action="store_true", help="print the full demand set at marginal prices")

    sp = add("learn-positive", cmd_learn_positive, "learn a positive bid list from its demand oracle")
    sp.add_argument("--bids", required=True)
    sp.add_argument("--out", help="write the learnt list here")

    sp = add("learn-general", cmd_learn_general, "learn a valid bid list of either sign")
    sp.add_argument("--bids", required=True)
    sp.add_argument("--out", help="write the learnt list here")
    sp.add_argument("--max-vertices", type=int, default=10**6)
    sp.add_argument("--trials", type=int, default=1000, help="random prices used to verify")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("validate", cmd_validate, "check a bid list for validity")
    sp.add_argument("--bids", required=True)

    sp = add("gadget", cmd_gadget, "write an adversarial instance with an island gadget")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--cell", help='gadget position, e.g. "0,4" (default: origin)')
    sp.add_argument("--out")

    sp = add("bench", cmd_bench, "learn random instances and tabulate query counts")
    sp.add_argument("--learner", choices=("positive", "general"), default="positive")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--n", type=int, default=3, help="largest number of goods")
    sp.add_argument("--size", type=int, default=10, help="largest number of bids")
    sp.add_argument("--magnitude", type=int, default=32)
    sp.add_argument("--max-weight", type=int, default=3)
    sp.add_argument("--max-vertices", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("bench-lower-bound", cmd_bench_lower_bound, "hide a gadget and count queries to find it")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-vertices", type=int, default=10**6)

    sp = add("bridge-demo", cmd_bridge_demo, "compute demand from the valuation of a positive list")
    sp.add_argument("--bids", required=True)
    sp.add_argument("--price", required=True)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
