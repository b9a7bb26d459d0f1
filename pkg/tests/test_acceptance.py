"""Acceptance criteria 1-9.  Each test records its clauses; conftest prints one line per criterion."""

import time
from fractions import Fraction as Q

import mpmath
import pytest

from conftest import record
from dslab import blockplan, scan
from dslab.approxsets import measure_formula_check
from dslab.blocks import block_bounds, block_index
from dslab.numtheory import euler_phi
from dslab.overlap import count_sigma, factor_P
from dslab.psifun import PsiFunction
from dslab.seriesmoment import fc_eval, second_moment_bound, series_report

HALF = PsiFunction.constant("1/2")
RECIP = PsiFunction.reciprocal(1)
RECIP_MINI = PsiFunction(**{**RECIP.__dict__, "growth_base": 2})
GOLDEN = scan.load_goldens()


@pytest.fixture(scope="module")
def scan_1():
    t = time.perf_counter()
    out = scan.run_scan(scan.ScanSpec(scan.RECIPROCAL, 16, 255, workers=1))
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def scan_8():
    return scan.run_scan(scan.ScanSpec(scan.RECIPROCAL, 16, 255, workers=8))


def test_criterion_1_measure_formula():
    t = time.perf_counter()
    bad = [(n, name) for name, psi in (("1/2", HALF), ("1/n", RECIP))
           for n in range(1, 2001)
           if (lambda r: not r[2] or r[0] != 2 * psi(n) * euler_phi(n) / n)(measure_formula_check(n, psi))]
    dt = time.perf_counter() - t
    # at n = 1 with psi = 1/n the formula gives 2, above the measure of the whole circle
    ok = record(1, "exact measure n<=2000 both families", not bad,
                f"{len(bad)} mismatches: " + ", ".join(f"n={n} psi={name}" for n, name in bad))
    capped = all(measure_formula_check(n, psi)[0] == min(1, 2 * psi(n) * euler_phi(n) / n)
                 for psi in (HALF, RECIP) for n in range(1, 2001))
    record(1, "min(1, formula) everywhere", capped)
    ok &= record(1, "runtime<60s", dt < 60, f"{dt:.1f}s")
    assert ok


def test_criterion_2_sigma_oracle():
    bad = [(m, n) for psi in (HALF, RECIP) for m in range(2, 129) for n in range(m + 1, 129)
           if count_sigma(m, n, psi, "fast") != count_sigma(m, n, psi, "brute")]
    ok = record(2, "fast==brute 2<=m<n<=128", not bad, f"{len(bad)} mismatches")
    spots = (count_sigma(3, 4, HALF), count_sigma(2, 3, HALF))
    ok &= record(2, "Sigma(3,4)=Sigma(2,3)=2", spots == (2, 2), f"got {spots}")
    assert ok


def test_criterion_3_pairwise_inequalities(scan_1):
    (rows, summ), dt = scan_1
    assert len(rows) == 240 * 239 // 2
    elem = sum(not r.elementary_bound_ok() for r in rows)
    minlen = sum(not r.min_length_bound_ok() for r in rows)
    pbad = sum(r.P < 1 for r in rows)
    ok = record(3, "lambda_inter<=8psi(m)psi(n)", elem == 0 and summ["elementary_bound_violations"] == 0,
                f"{elem} violations")
    ok &= record(3, "min-length bound", minlen == 0 and summ["min_length_violations"] == 0,
                 f"{minlen} violations")
    ok &= record(3, "P>=1", pbad == 0, f"{pbad} violations")
    ok &= record(3, "runtime<300s", dt < 300, f"{dt:.1f}s")
    assert ok


def test_criterion_4_overlap_constant(scan_1, scan_8):
    r1, r8 = scan_1[0][1]["max_ratio"], scan_8[1]["max_ratio"]
    stored = Q(GOLDEN["overlap_max_ratio"]["value"])
    ok = record(4, "finite", r1 is not None, f"max ratio {r1} = {float(r1):.6f} at {scan_1[0][1]['max_ratio_pair']}")
    ok &= record(4, "bit-identical regeneration", r1 == r8)
    ok &= record(4, "matches golden", r1 == stored, f"golden {stored}")
    assert ok


def test_criterion_5_second_moment():
    hand = second_moment_bound(PsiFunction.from_table({2: "1/2", 3: "1/2"}), 3)
    ok = record(5, "hand case 49/78<=2/3", hand[2:] == (Q(49, 78), Q(2, 3)) and hand[2] <= hand[3])
    for name, psi in (("1/2", HALF), ("1/n", RECIP)):
        for N in (8, 32, 128, 512):
            _, _, bound, union = second_moment_bound(psi, N)
            ok &= record(5, f"psi={name} N={N}", bound <= union, f"{float(bound):.4f}<={float(union):.4f}")
    assert ok


def test_criterion_6_block_machinery():
    t = time.perf_counter()
    default = {15: 0, 16: 1, 255: 1, 256: 1, 65535: 1, 65536: 2}
    mini = {15: 1, 16: 2, 255: 2, 256: 3, 65535: 3, 65536: 4}
    ok_idx = all(block_index(n) == h and block_bounds(h)[0] <= n < block_bounds(h)[1]
                 for n, h in default.items())
    ok_idx &= all(block_index(n, 2, 2) == h and block_bounds(h, 2, 2)[0] <= n < block_bounds(h, 2, 2)[1]
                  for n, h in mini.items())
    ok = record(6, "block_index boundaries", ok_idx)
    for h, cap in ((2, None), (3, 4096)):
        plan = blockplan.plan_block(h, RECIP_MINI, cap=cap, c=1, scale_mode="paper")
        ctx = plan.context
        tag = f"[{ctx.lo},{ctx.hi})"
        ok &= record(6, f"{tag} sum T_j=Psi(X)", plan.table.exhaustive and plan.table.total() == ctx.Psi_X)
        ok &= record(6, f"{tag} pigeonhole", plan.pigeonhole_ok(), f"k*={plan.k_star} K={ctx.K}")
        rho_ok = all(plan.rho(n) <= RECIP(n) for n in range(1, 2 * ctx.hi))
        ok &= record(6, f"{tag} rho<=psi", rho_ok)
        ok &= record(6, f"{tag} scale bound (paper mode)", plan.scale_bound_ok())
    dt = time.perf_counter() - t
    ok &= record(6, "runtime<600s", dt < 600, f"{dt:.1f}s")
    assert ok


def test_criterion_7_cross_block():
    rep = blockplan.cross_block_P_scan(RECIP_MINI, (2, 256), (256, 4096))
    stored = Q(GOLDEN["cross_block_max_P"]["value"])
    ok = record(7, "max P matches golden", rep["max_P"] == stored,
                f"max P {rep['max_P']} at {rep['argmax'][:1]} over {rep['pairs_scanned']} pairs")
    ok &= record(7, "P(8,20)=5/2", factor_P(8, 20, RECIP) == Q(5, 2))
    assert ok


@pytest.fixture(scope="module")
def series_1e6():
    cps = [16, 17, 32, 100, 1000, 10**4, 10**5]
    return series_report(PsiFunction.reciprocal("1/2"), 10**6, checkpoints=cps)


def test_criterion_8_series_ratio(series_1e6):
    # implemented as stated; the ratio approaches 3/pi^2 only like 1 + 1.147/ln N
    ratio = float(series_1e6.partial_plain) / mpmath.log(10**6)
    target = 3 / mpmath.pi**2
    rel = abs(ratio / target - 1)
    assert record(8, "plain/ln N within 2% of 3/pi^2 at N=1e6", rel <= 0.02,
                  f"ratio {float(ratio):.5f} vs {float(target):.5f}, off by {float(rel) * 100:.2f}%")


def test_criterion_8_extra_and_fc(series_1e6):
    from gmpy2 import mpq
    ok_extra = all(mpq(e.value) + mpq(e.error) <= p for _, p, e, _ in series_1e6.growth_samples)
    ok = record(8, "extra<=plain at N in {16..1e6}", ok_extra and series_1e6.extra_le_plain())
    x = mpmath.exp(-mpmath.exp(mpmath.e))
    spot = (fc_eval(0, 1) == 0, fc_eval(2, 1) == 1,
            mpmath.almosteq(fc_eval(x, 1), x * mpmath.exp(-mpmath.e), rel_eps=mpmath.mpf(10) ** -12))
    ok &= record(8, "f_c spot values", all(spot))
    assert ok


def test_criterion_9_determinism(scan_1, scan_8):
    a, b = scan.rows_csv(scan_1[0][0]), scan.rows_csv(scan_8[0])
    assert record(9, "workers 1 vs 8 byte-identical CSV", a == b, f"{len(a)} bytes")
