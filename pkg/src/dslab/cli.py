"""Command-line entry point: ``python3 -m dslab <subcommand> ...``.

Exit status 0 on success, 1 for domain/resource/parse errors (reported as
JSON on stderr), 2 for usage errors.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import approxsets, blockplan, scan, seriesmoment
from .errors import DomainError, PsiParseError, ResourceError
from .numerics import Unresolved
from .overlap import CSV_FIELDS, PairEngine
from .psifun import load_psi_file, qstr


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _psi(args):
    psi = load_psi_file(args.psi)
    if getattr(args, "c", None) is not None:
        psi = psi.with_c(args.c)
    return psi


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_en(args):
    psi = _psi(args)
    e = approxsets.build_E(args.n, psi)
    _emit(args, json.dumps({"n": args.n, "psi_n": qstr(e.psi_n),
                            "arcs": e.set.to_json_obj(), "measure": qstr(e.measure())}))


def cmd_pair(args):
    psi = _psi(args)
    st = PairEngine(psi).stats(args.m, args.n)
    if args.format == "json":
        _emit(args, json.dumps(dict(zip(CSV_FIELDS, st.csv_row()))))
    else:
        _emit(args, scan.rows_csv([st]))


def _scan_spec(args):
    with open(args.psi) as fh:
        doc = json.load(fh)
    return scan.ScanSpec(
        psi=doc, min=args.min, max=args.max, pairs=args.pairs,
        sample=args.sample, seed=args.seed,
        c=None if args.c is None else qstr(args.c),
        pairs_budget=args.pairs_budget, workers=args.workers,
    )


def cmd_scan(args):
    spec = _scan_spec(args)
    if args.sample and spec.pairs == "all":
        spec.pairs = "sampled"
    rows, summary = scan.run_scan(spec)
    if args.format == "json":
        _emit(args, scan.rows_json(rows, summary))
    else:
        _emit(args, scan.rows_csv(rows))
        if args.out:
            sys.stderr.write(json.dumps(scan.summary_json(summary)) + "\n")


def cmd_series(args):
    psi = _psi(args)
    rep = seriesmoment.series_report(psi, args.max)
    _emit(args, json.dumps(rep.to_json_obj()))


def cmd_moment(args):
    psi = _psi(args)
    cps = [k for k in (args.checkpoints or []) if k < args.max] + [args.max]
    prof = seriesmoment.second_moment_profile(psi, cps, args.pairs_budget, args.arc_budget)
    rows = [dict({k: v if k == "N" else qstr(v) for k, v in r.items()},
                 bound_le_union=r["bound"] <= r["union_measure"]) for r in prof]
    obj = dict(rows[-1])
    if len(rows) > 1:
        obj["profile"] = rows
    _emit(args, json.dumps(obj))


def cmd_blocks(args):
    psi = _psi(args)
    ctx = blockplan.make_context(args.h, psi, args.cap)
    table = blockplan.bucketize(ctx, psi, args.pairs_budget, args.sample, args.seed)
    _emit(args, json.dumps({
        "h": ctx.h, "X": ctx.X, "block": [ctx.lo, ctx.hi], "R": ctx.R_decimal(),
        "W": ctx.W, "K": ctx.K, "Psi_X": qstr(ctx.Psi_X),
        "T": {str(j): qstr(t) for j, t in table.buckets.items()},
        "pair_counts": {str(j): n for j, n in table.pair_counts.items()},
        "exhaustive": table.exhaustive,
        "partition_exact": table.exhaustive and table.total() == ctx.Psi_X,
    }))


def _plan(args, psi):
    return blockplan.plan_block(args.h, psi, args.cap, scale_mode=args.scale_mode,
                                pair_budget=args.pairs_budget, sample=args.sample, seed=args.seed)


def cmd_rescale(args):
    psi = _psi(args)
    plan = _plan(args, psi)
    obj = plan.to_json_obj()
    obj["pigeonhole_ok"] = plan.pigeonhole_ok()
    obj["scale_bound_ok"] = plan.scale_bound_ok()
    _emit(args, json.dumps(obj))


def cmd_qcheck(args):
    psi = _psi(args)
    plan = _plan(args, psi)
    rep = blockplan.quasi_independence_check(plan, psi, args.classify)
    _emit(args, json.dumps({k: (qstr(v) if isinstance(v, Fraction) else v) for k, v in rep.items()}))


def cmd_golden(args):
    path = args.golden_path or scan.GOLDEN_PATH
    if args.regenerate:
        recs = scan.regenerate_goldens(args.name)
        if args.name and os.path.exists(path):
            merged = scan.load_goldens(path)
            merged.update(recs)
            recs = merged
        scan.write_goldens(recs, path)
        _emit(args, json.dumps({k: v["value"] for k, v in recs.items()}))
        return 0
    bad = scan.verify_goldens(path, args.name)
    _emit(args, json.dumps({"mismatches": [list(b) for b in bad]}))
    return 1 if bad else 0


def build_parser():
    p = argparse.ArgumentParser(prog="python3 -m dslab", description="Exact experiments on the coprime approximation sets E_n.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write output to PATH instead of stdout")
        return sp

    def psi_opts(sp, need=True):
        sp.add_argument("--psi", required=need, help="psi JSON document")
        sp.add_argument("--c", type=_rational, help="override the extra-divergence constant")

    def budget_opts(sp):
        sp.add_argument("--pairs-budget", type=int, default=None, help="maximum number of pairs")
        sp.add_argument("--sample", type=int, default=None, help="sample COUNT pairs instead")
        sp.add_argument("--seed", type=int, default=0)

    sp = add("en", cmd_en, "arcs and measure of E_n")
    psi_opts(sp)
    sp.add_argument("--n", type=int, required=True)

    sp = add("pair", cmd_pair, "PairStats row for (m, n)")
    psi_opts(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = add("scan", cmd_scan, "PairStats for all pairs min <= m < n <= max")
    psi_opts(sp)
    sp.add_argument("--min", type=int, required=True)
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--pairs", choices=("all", "cross-block", "within-block", "sampled"), default="all")
    sp.add_argument("--pairs-budget", type=int, default=scan.PAIR_BUDGET)
    sp.add_argument("--sample", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = add("series", cmd_series, "partial sums of the plain and damped series")
    psi_opts(sp)
    sp.add_argument("--max", type=int, required=True, help="cutoff N")

    sp = add("moment", cmd_moment, "second-moment lower bound for E_1..E_N")
    psi_opts(sp)
    sp.add_argument("--max", type=int, required=True, help="cutoff N")
    sp.add_argument("--pairs-budget", type=int, default=None)
    sp.add_argument("--arc-budget", type=int, default=None)
    sp.add_argument("--checkpoints", type=lambda t: [int(x) for x in t.split(",") if x],
                    help="comma-separated extra cutoffs below --max")

    for name, fn, help_ in (("blocks", cmd_blocks, "bucket table of one block"),
                            ("rescale", cmd_rescale, "k selection and rescaled psi for one block"),
                            ("qcheck", cmd_qcheck, "quasi-independence check on one block")):
        sp = add(name, fn, help_)
        psi_opts(sp)
        sp.add_argument("--h", type=int, required=True)
        sp.add_argument("--cap", type=int, default=None, help="truncate the block to n < CAP")
        budget_opts(sp)
        if name != "blocks":
            sp.add_argument("--scale-mode", choices=("dyadic", "paper"), default="dyadic")
        if name == "qcheck":
            sp.add_argument("--classify", choices=("psi", "rho"), default="psi")

    sp = add("golden", cmd_golden, "verify or regenerate the golden constants")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--verify", action="store_true", default=True)
    g.add_argument("--regenerate", action="store_true")
    sp.add_argument("--name", action="append", help="restrict to this record (repeatable)")
    sp.add_argument("--golden-path", default=None)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.fn(args)
    except (DomainError, ResourceError, PsiParseError, Unresolved, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
