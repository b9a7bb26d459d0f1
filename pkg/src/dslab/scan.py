"""
Pair scans with a deterministic parallel reduction, and golden records.

A scan evaluates PairStats for a set of pairs m < n.  The pair list is cut
into chunks that worker processes evaluate independently; rows are sorted
by (m, n) before emission and the summary is merged with exact rational
arithmetic, so the output does not depend on the worker count.
"""

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd, log

import numpy as np

from . import blockplan
from .blocks import block_index
from .errors import DomainError, ResourceError
from .numerics import lt_ln
from .overlap import CSV_FIELDS, PairEngine
from .psifun import PsiFunction, load_psi, qstr

PAIR_BUDGET = 10**7
CHUNK = 2048
GOLDEN_PATH = os.path.join(os.path.dirname(__file__), "data", "golden.json")


@dataclass
class ScanSpec:
    psi: dict                   # psi JSON document (decoded)
    min: int = 1
    max: int = 1
    pairs: str = "all"          # all | cross-block | within-block | sampled | list
    explicit: list = None       # [(m, n), ...] when pairs == "list"
    sample: int = None
    seed: int = 0
    c: str = None
    pairs_budget: int = PAIR_BUDGET
    workers: int = 1

    def load(self):
        psi = load_psi(self.psi)
        return psi.with_c(Fraction(self.c)) if self.c is not None else psi


def enumerate_pairs(spec, psi):
    lo, hi = spec.min, spec.max
    if spec.pairs == "list":
        out = sorted({(min(m, n), max(m, n)) for m, n in spec.explicit if m != n})
    elif spec.pairs == "sampled":
        if not spec.sample:
            raise DomainError("sampled scans need --sample COUNT")
        rng = np.random.default_rng(spec.seed)
        a = rng.integers(lo, hi + 1, size=spec.sample).tolist()
        b = rng.integers(lo, hi + 1, size=spec.sample).tolist()
        out = sorted({(min(x, y), max(x, y)) for x, y in zip(a, b) if x != y})
    elif spec.pairs in ("all", "cross-block", "within-block"):
        total = (hi - lo + 1) * (hi - lo) // 2 if hi >= lo else 0
        if total > spec.pairs_budget:
            raise ResourceError(
                f"range [{lo}, {hi}] has {total} pairs, over the pair budget "
                f"{spec.pairs_budget}; raise --pairs-budget or use --sample"
            )
        out = [(m, n) for m in range(lo, hi + 1) for n in range(m + 1, hi + 1)]
        if spec.pairs != "all":
            tb, gb = psi.tower_base, psi.growth_base
            blk = {k: block_index(k, tb, gb) for k in range(max(lo, 1), hi + 1)}
            same = spec.pairs == "within-block"
            out = [(m, n) for m, n in out
                   if blk[m] is not None and blk[n] is not None and (blk[m] == blk[n]) == same]
    else:
        raise DomainError(f"unknown pair filter {spec.pairs!r}")
    if out and out[0][0] < 1:
        raise DomainError("pairs must consist of positive integers")
    return out


def _empty_summary():
    return {
        "pairs": 0,
        "sum_inter": Fraction(0),
        "sum_product": Fraction(0),
        "trouble_pairs": 0,
        "trouble_mass": Fraction(0),
        "max_ratio": None,
        "max_ratio_pair": None,
        "max_P": None,
        "max_P_pair": None,
        "elementary_bound_violations": 0,
        "min_length_violations": 0,
        "P_below_one": 0,
    }


def _better(val, pair, cur, cur_pair):
    if val is None:
        return False
    if cur is None or val > cur:
        return True
    return val == cur and pair < cur_pair


def _merge(a, b):
    out = dict(a)
    for key in ("pairs", "sum_inter", "sum_product", "trouble_pairs", "trouble_mass",
                "elementary_bound_violations", "min_length_violations", "P_below_one"):
        out[key] = a[key] + b[key]
    for name in ("max_ratio", "max_P"):
        if _better(b[name], b[name + "_pair"], a[name], a[name + "_pair"]):
            out[name], out[name + "_pair"] = b[name], b[name + "_pair"]
    return out


def in_trouble_range(st):
    """1 <= A/gcd(m,n) < log(mn): too few h values to average over."""
    r = st.A / gcd(st.m, st.n)
    return r >= 1 and lt_ln(r, st.m * st.n)


def _evaluate_chunk(args):
    psi, pairs = args
    limit = max(n for _, n in pairs)
    eng = PairEngine(psi, limit=limit)
    rows = []
    summ = _empty_summary()
    for m, n in pairs:
        st = eng.stats(m, n)
        rows.append(st)
        summ["pairs"] += 1
        summ["sum_inter"] += st.lambda_inter
        summ["sum_product"] += st.lambda_m * st.lambda_n
        if in_trouble_range(st):
            summ["trouble_pairs"] += 1
            summ["trouble_mass"] += st.lambda_inter
        if st.psi_m > 0 and st.psi_n > 0:
            summ["elementary_bound_violations"] += not st.elementary_bound_ok()
            summ["min_length_violations"] += not st.min_length_bound_ok()
        summ["P_below_one"] += st.P < 1
        r = st.ratio
        if _better(r, (m, n), summ["max_ratio"], summ["max_ratio_pair"]):
            summ["max_ratio"], summ["max_ratio_pair"] = r, (m, n)
        if _better(st.P, (m, n), summ["max_P"], summ["max_P_pair"]):
            summ["max_P"], summ["max_P_pair"] = st.P, (m, n)
    return rows, summ


def run_scan(spec):
    """(rows sorted by (m, n), merged summary)."""
    psi = spec.load()
    pairs = enumerate_pairs(spec, psi)
    if not pairs:
        return [], _empty_summary()
    chunks = [(psi, pairs[i:i + CHUNK]) for i in range(0, len(pairs), CHUNK)]
    if spec.workers <= 1:
        results = list(map(_evaluate_chunk, chunks))
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as ex:
            results = list(ex.map(_evaluate_chunk, chunks))
    rows = []
    summary = _empty_summary()
    for r, s in results:
        rows.extend(r)
        summary = _merge(summary, s)
    rows.sort(key=lambda st: (st.m, st.n))
    return rows, summary


def summary_json(summary):
    out = {}
    for k, v in summary.items():
        if isinstance(v, Fraction):
            out[k] = qstr(v)
        elif isinstance(v, tuple):
            out[k] = list(v)
        else:
            out[k] = v
    return out


def rows_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for st in rows:
        w.writerow(st.csv_row())
    return buf.getvalue()


def rows_json(rows, summary):
    return json.dumps({
        "rows": [dict(zip(CSV_FIELDS, st.csv_row())) for st in rows],
        "summary": summary_json(summary),
    }, indent=1, sort_keys=True)


# -- golden records --------------------------------------------------------

RECIPROCAL = {"family": "reciprocal", "q": "1", "c": "1"}
RECIPROCAL_MINI = dict(RECIPROCAL, growth_base=2)


def _golden_specs():
    return {
        "overlap_max_ratio": {"op": "run_scan", "psi": RECIPROCAL, "min": 16, "max": 255},
        "cross_block_max_P": {"op": "cross_block_P_scan", "psi": RECIPROCAL_MINI,
                              "m_range": [2, 256], "n_range": [256, 4096]},
        "mertens_max_ratio": {"op": "mertens_ratio_scan", "psi": RECIPROCAL_MINI, "h": 2},
        "nonexceptional_max_ratio": {"op": "quasi_independence_check", "psi": RECIPROCAL_MINI,
                                     "h": 2, "scale_mode": "dyadic", "classify": "psi"},
        "exceptional_mass_ratio": {"op": "quasi_independence_check", "psi": RECIPROCAL_MINI,
                                   "h": 2, "scale_mode": "dyadic", "classify": "psi"},
    }


def compute_golden(name, gspec, cache=None):
    cache = {} if cache is None else cache
    op = gspec["op"]
    psi = load_psi(gspec["psi"])
    if op == "run_scan":
        _, summ = run_scan(ScanSpec(gspec["psi"], gspec["min"], gspec["max"]))
        return summ["max_ratio"]
    if op == "cross_block_P_scan":
        rep = blockplan.cross_block_P_scan(psi, tuple(gspec["m_range"]), tuple(gspec["n_range"]))
        return rep["max_P"]
    if op == "mertens_ratio_scan":
        ctx = blockplan.make_context(gspec["h"], psi, gspec.get("cap"))
        return blockplan.mertens_ratio_scan(ctx, psi)["max_ratio"]
    if op == "quasi_independence_check":
        key = json.dumps(gspec, sort_keys=True)
        if key not in cache:
            plan = blockplan.plan_block(gspec["h"], psi, gspec.get("cap"),
                                        scale_mode=gspec["scale_mode"])
            cache[key] = blockplan.quasi_independence_check(plan, psi, gspec["classify"])
        rep = cache[key]
        return rep["max_nonexceptional_ratio"] if name == "nonexceptional_max_ratio" else rep["mass_ratio"]
    raise DomainError(f"unknown golden op {op!r}")


def regenerate_goldens(names=None):
    specs = _golden_specs()
    cache = {}
    out = {}
    for name, gspec in specs.items():
        if names and name not in names:
            continue
        out[name] = {"value": qstr(compute_golden(name, gspec, cache)), "spec": gspec}
    return out


def load_goldens(path=GOLDEN_PATH):
    with open(path) as fh:
        return json.load(fh)


def write_goldens(records, path=GOLDEN_PATH):
    with open(path, "w") as fh:
        json.dump(records, fh, indent=1, sort_keys=True)
        fh.write("\n")


def verify_goldens(path=GOLDEN_PATH, names=None):
    """[(name, stored, regenerated)] for every record that no longer matches."""
    stored = load_goldens(path)
    cache = {}
    bad = []
    for name, rec in sorted(stored.items()):
        if names and name not in names:
            continue
        value = qstr(compute_golden(name, rec["spec"], cache))
        if value != rec["value"]:
            bad.append((name, rec["value"], value))
    return bad
