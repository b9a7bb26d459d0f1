"""
The block-by-block rescaling procedure, run on finite data.

Integers are grouped into tower blocks [X, X^4).  Within one block every
ordered pair m != n is put in bucket j = floor(ln D(m,n)).  Bucket masses
T_j drive the weighted choice of a shift k, and psi is then scaled down
by (a rational surrogate of) e^{-k} on the block.  Each inequality the
argument relies on can be checked on the output.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from mpmath import iv

from . import numerics
from .blocks import block_bounds, block_index
from .errors import DomainError, ResourceError
from .numerics import certified_floor, floor_ln, iv_rational
from .numtheory import FactorTable, totient_sieve
from .overlap import PairEngine
from .psifun import PsiFunction, qstr, validate_normalization

__all__ = [
    "BlockContext", "BucketTable", "RescalePlan", "block_index", "block_bounds",
    "split_by_parity", "make_context", "bucketize", "select_k", "rescale",
    "plan_block", "cross_block_P_scan", "mertens_ratio_scan",
    "quasi_independence_check",
]

PAIR_BUDGET = 5 * 10**7
PAPER_SCALE_BITS = 96
SCALE_EPS = Fraction(1, 2**90)
# float log(D) values this close to an integer are re-decided exactly
_AMBIGUOUS = 1e-9


def split_by_parity(psi):
    """(even-block part, odd-block part) of psi."""
    return psi.with_filter("even_blocks"), psi.with_filter("odd_blocks")


def _loglog(X):
    return lambda: iv.log(iv.log(iv.mpf(X)))


def _k_bound(X, c):
    """c * R * log R with R = log log X, as an interval thunk."""
    R = _loglog(X)
    return lambda: iv_rational(c) * R() * iv.log(R())


@dataclass(frozen=True)
class BlockContext:
    h: int
    X: int
    lo: int   # block range [lo, hi) after the cap
    hi: int
    c: Fraction
    W: int    # floor(R): number of extra buckets in a selection window
    K: int    # floor(c R log R), clipped at 0
    Psi_X: Fraction
    tower_base: int = 2
    growth_base: int = 4

    @property
    def R(self):
        return _loglog(self.X)

    def R_decimal(self, digits=30):
        return numerics.decimal(self.R, digits)

    @property
    def candidates(self):
        # integers k <= c R log R; the shift is at least 1 when that allows it
        return list(range(1, self.K + 1)) if self.K >= 1 else [0]


def _weights(psi, lo, hi):
    """(ns, values, u) over n in [lo, hi) with psi(n) > 0; u = psi(n) phi(n) / n."""
    vals = psi.values(lo, hi - 1)
    phi = totient_sieve(max(hi - 1, 1))
    ns, vs, us = [], [], []
    for n, v in zip(range(lo, hi), vals):
        if v > 0:
            ns.append(n)
            vs.append(v)
            us.append(v * int(phi[n]) / n)
    return ns, vs, us


def make_context(h, psi, cap=None, c=None):
    """Context for block h of psi's tower, optionally truncated to n < cap."""
    tb, gb = psi.tower_base, psi.growth_base
    X, top = block_bounds(h, tb, gb)
    hi = top if cap is None else min(top, cap)
    if X < 3:
        raise DomainError(f"block {h} has X = {X}; log log X <= 0 so it cannot be rescaled")
    c = psi.c if c is None else Fraction(c)
    W = certified_floor(_loglog(X))
    K = max(0, certified_floor(_k_bound(X, c)))
    _, _, us = _weights(psi, X, hi) if hi > X else ([], [], [])
    s1 = sum(us, Fraction(0))
    s2 = sum((u * u for u in us), Fraction(0))
    return BlockContext(h, X, X, max(hi, X), c, W, K, s1 * s1 - s2, tb, gb)


@dataclass
class BucketTable:
    buckets: dict = field(default_factory=dict)      # j -> T_j
    pair_counts: dict = field(default_factory=dict)  # j -> |D_j| (ordered pairs)
    exhaustive: bool = True

    def total(self):
        return sum(self.buckets.values(), Fraction(0))

    def get(self, j):
        return self.buckets.get(j, Fraction(0))


def bucketize(ctx, psi, pair_budget=None, sample=None, seed=0):
    """Bucket all ordered pairs m != n of the block by floor(ln D(m,n)).

    With more than `pair_budget` pairs, `sample` unordered pairs are drawn
    uniformly (seeded) and the bucket sums are scaled up; such a table is
    marked non-exhaustive and does not partition Psi_X exactly.
    """
    budget = PAIR_BUDGET if pair_budget is None else pair_budget
    ns, vs, us = _weights(psi, ctx.lo, ctx.hi)
    size = len(ns)
    n_pairs = size * (size - 1)
    if size < 2:
        return BucketTable()
    if n_pairs > budget and sample is None:
        raise ResourceError(
            f"block [{ctx.lo}, {ctx.hi}) has {n_pairs} ordered pairs, over the pair "
            f"budget {budget}; raise --pairs-budget, lower --cap or pass --sample"
        )
    L = lcm(*(u.denominator for u in us))
    U = np.empty(size, dtype=object)
    U[:] = [u.numerator * (L // u.denominator) for u in us]
    N = np.array(ns, dtype=np.int64)
    pf = np.array([float(v) for v in vs])
    sums = defaultdict(int)
    counts = defaultdict(int)

    def exact_j(i, k):
        m, n = ns[i], ns[k]
        return floor_ln(max(n * vs[i], m * vs[k]) / gcd(m, n))

    if n_pairs <= budget:
        for i in range(size - 1):
            m = ns[i]
            rest = N[i + 1:]
            D = np.maximum(rest * pf[i], m * pf[i + 1:]) / np.gcd(m, rest)
            lg = np.log(D)
            j = np.floor(lg).astype(np.int64)
            for k in np.flatnonzero(np.abs(lg - np.rint(lg)) < _AMBIGUOUS):
                j[k] = exact_j(i, i + 1 + int(k))
            Urest = U[i + 1:]
            for jj in np.unique(j).tolist():
                mask = j == jj
                sums[jj] += U[i] * Urest[mask].sum()
                counts[jj] += 2 * int(np.count_nonzero(mask))
        scale = Fraction(2, L * L)
        table = BucketTable({jj: s * scale for jj, s in sorted(sums.items())},
                            dict(sorted(counts.items())), True)
        return table

    rng = np.random.default_rng(seed)
    for _ in range(sample):
        i, k = sorted(rng.choice(size, size=2, replace=False).tolist())
        jj = exact_j(i, k)
        sums[jj] += U[i] * U[k]
        counts[jj] += 1
    scale = Fraction(n_pairs, sample) / (L * L)
    return BucketTable({jj: s * scale for jj, s in sorted(sums.items())},
                       dict(sorted(counts.items())), False)


def _window(table, k, W):
    return sum((table.get(j) / (j + 1 - k) for j in range(k, k + W + 1)), Fraction(0))


@dataclass
class RescalePlan:
    context: BlockContext
    table: BucketTable
    S_over_R: dict      # k -> S(k)/R, exact
    k_star: int
    scale_mode: str
    scale: Fraction
    rho: PsiFunction

    def S_decimal(self, k, digits=30):
        q = self.S_over_R[k]
        return numerics.decimal(lambda: self.context.R() * iv_rational(q), digits)

    def pigeonhole_ok(self):
        S = self.S_over_R
        return S[self.k_star] * len(S) <= sum(S.values(), Fraction(0))

    def scale_bound_ok(self):
        """-ln(scale) <= c R log R (+ 2^-90), decided in interval arithmetic."""
        X, c = self.context.X, self.context.c
        lhs = numerics.upper(lambda: -iv.log(iv_rational(self.scale)))
        rhs = numerics.lower(_k_bound(X, c))
        return lhs <= rhs + SCALE_EPS

    def to_json_obj(self, digits=30):
        ctx = self.context
        return {
            "h": ctx.h,
            "X": ctx.X,
            "block": [ctx.lo, ctx.hi],
            "R": self.context.R_decimal(digits),
            "R_digits": digits,
            "W": ctx.W,
            "K": ctx.K,
            "c": qstr(ctx.c),
            "Psi_X": qstr(ctx.Psi_X),
            "T": {str(j): qstr(t) for j, t in self.table.buckets.items()},
            "pair_counts": {str(j): n for j, n in self.table.pair_counts.items()},
            "exhaustive": self.table.exhaustive,
            "S_over_R": {str(k): qstr(s) for k, s in self.S_over_R.items()},
            "S": {str(k): self.S_decimal(k, digits) for k in self.S_over_R},
            "k_star": self.k_star,
            "scale_mode": self.scale_mode,
            "scale": qstr(self.scale),
            "rho": self.rho.to_json_obj(),
        }


def scale_factor(k, mode="dyadic"):
    """Exact surrogate for e^{-k}: 2^{-k}, or e^{-k} rounded down to 96 bits."""
    if mode == "dyadic":
        return Fraction(1, 2**k)
    if mode == "paper":
        one = 1 << PAPER_SCALE_BITS
        return Fraction(certified_floor(lambda: iv.exp(-k) * one), one)
    raise DomainError(f"unknown scale mode {mode!r}")


def select_k(ctx, table, c=None, scale_mode="dyadic", psi=None):
    """Pick k_star minimising S(k) over the admissible shifts; build the plan."""
    if c is not None and Fraction(c) != ctx.c:
        K = max(0, certified_floor(_k_bound(ctx.X, Fraction(c))))
        ctx = BlockContext(ctx.h, ctx.X, ctx.lo, ctx.hi, Fraction(c), ctx.W, K,
                           ctx.Psi_X, ctx.tower_base, ctx.growth_base)
    S = {k: _window(table, k, ctx.W) for k in ctx.candidates}
    k_star = min(S, key=lambda k: (S[k], k))
    scale = scale_factor(k_star, scale_mode)
    plan = RescalePlan(ctx, table, S, k_star, scale_mode, scale, None)
    if psi is not None:
        plan.rho = rescale(plan, psi)
    return plan


def rescale(plan, psi):
    """rho = scale * psi on the block, 0 elsewhere."""
    ctx = plan.context
    return psi.with_c(ctx.c).scaled(plan.scale, ctx.lo, ctx.hi - 1)


def plan_block(h, psi, cap=None, c=None, scale_mode="dyadic", **bucket_kw):
    ctx = make_context(h, psi, cap, c)
    table = bucketize(ctx, psi, **bucket_kw)
    return select_k(ctx, table, scale_mode=scale_mode, psi=psi)


# -- scans ----------------------------------------------------------------

def _int_psi(psi, lo, hi):
    """{n: (num, den)} for lo <= n < hi with psi(n) > 0."""
    return {n: (v.numerator, v.denominator)
            for n, v in zip(range(lo, hi), psi.values(lo, hi - 1)) if v > 0}


def _int_P(m, n, vm, vn, primes):
    """P(m,n) as an unreduced (num, den) pair using integer arithmetic only."""
    g = gcd(m, n)
    a = n * vm[0] * vn[1]
    b = m * vn[0] * vm[1]
    Dnum = a if a > b else b
    Dden = g * vm[1] * vn[1]
    num = den = 1
    for p in primes:
        if p * Dden > Dnum:
            num *= p
            den *= p - 1
    return num, den, Fraction(Dnum, Dden)


def cross_block_P_scan(psi, m_range, n_range, sample=None, seed=0, keep=10):
    """Exact P(m,n) over pairs m < n from different blocks.

    `m_range`/`n_range` are half-open (lo, hi).  With `sample`, that many
    pairs are drawn uniformly (seeded) instead of scanning all of them.
    """
    m_lo, m_hi = m_range
    n_lo, n_hi = n_range
    tb, gb = psi.tower_base, psi.growth_base
    top = max(m_hi, n_hi)
    ft = FactorTable(top)
    vals = _int_psi(psi, 1, top)
    lo_all = min(m_lo, n_lo)
    warnings = [f"n={n}: psi={qstr(v)} {why}"
                for n, v, why in validate_normalization(psi, lo_all, top - 1)
                if why == "below 1/n"]
    blk = {n: block_index(n, tb, gb) for n in range(lo_all, top)}

    def pairs():
        if sample is None:
            for m in range(m_lo, m_hi):
                if m not in vals or blk[m] is None:
                    continue
                for n in range(max(n_lo, m + 1), n_hi):
                    yield m, n
        else:
            rng = np.random.default_rng(seed)
            ms = rng.integers(m_lo, m_hi, size=sample).tolist()
            nn = rng.integers(n_lo, n_hi, size=sample).tolist()
            yield from sorted({(min(a, b), max(a, b)) for a, b in zip(ms, nn) if a != b})

    best = None
    worst = []
    scanned = 0
    for m, n in pairs():
        vm, vn = vals.get(m), vals.get(n)
        if vm is None or vn is None or blk[m] is None or blk[n] is None or blk[m] == blk[n]:
            continue
        scanned += 1
        g = gcd(m, n)
        primes = set(ft.primes_of(m // g))
        primes.update(ft.primes_of(n // g))
        num, den, _ = _int_P(m, n, vm, vn, primes)
        if best is None or num * best[1] > best[0] * den:
            best = (num, den)
            worst = [(m, n)]
        elif num * best[1] == best[0] * den and len(worst) < keep:
            worst.append((m, n))
    return {
        "pairs_scanned": scanned,
        "max_P": None if best is None else Fraction(*best),
        "argmax": worst,
        "warnings": warnings,
    }


def mertens_ratio_scan(ctx, psi):
    """max of P(m,n) (1 + ln D(m,n)) / R over block pairs with D >= 1.

    Values are certified upper bounds (interval arithmetic at 128 bits).
    """
    vals = _int_psi(psi, ctx.lo, ctx.hi)
    ns = sorted(vals)
    ft = FactorTable(max(ctx.hi, 2))
    R_f = float(numerics.lower(ctx.R))
    est = []
    for i, m in enumerate(ns):
        for n in ns[i + 1:]:
            g = gcd(m, n)
            primes = set(ft.primes_of(m // g))
            primes.update(ft.primes_of(n // g))
            num, den, D = _int_P(m, n, vals[m], vals[n], primes)
            if D < 1:
                continue
            est.append((num / den * (1 + np.log(float(D))) / R_f, m, n, Fraction(num, den), D))
    if not est:
        return {"pairs": 0, "max_ratio": None, "argmax": None}
    top = max(e[0] for e in est)
    best = None
    for f, m, n, P, D in est:
        if f < top * (1 - 1e-9):
            continue
        ub = numerics.upper(lambda: iv_rational(P) * (1 + iv.log(iv_rational(D))) / ctx.R())
        if best is None or ub > best[0]:
            best = (ub, m, n)
    return {"pairs": len(est), "max_ratio": best[0], "argmax": best[1:],
            "max_ratio_decimal": f"{float(best[0]):.12g}"}


def quasi_independence_check(plan, psi, classify="psi"):
    """Split block pairs into the exceptional window and the rest.

    A pair is exceptional when its bucket index lies in
    [k_star, k_star + W].  Buckets come from D computed with psi
    (classify="psi", the default) or with rho (classify="rho").  For the
    other pairs the ratio lambda(E_m & E_n) / (lambda(E_m) lambda(E_n)) of the
    rho-sets is reported; exceptional pairs contribute their weight times
    P (computed with rho) to the exceptional mass.
    """
    if classify not in ("psi", "rho"):
        raise DomainError(f"classify must be 'psi' or 'rho', got {classify!r}")
    ctx = plan.context
    rho = plan.rho if plan.rho is not None else rescale(plan, psi)
    eng = PairEngine(rho, limit=max(ctx.hi, 2))
    basis = psi if classify == "psi" else rho
    ns = [n for n in range(ctx.lo, ctx.hi) if eng.psi_of(n) > 0]
    lo_j, hi_j = plan.k_star, plan.k_star + ctx.W
    best = None
    best_pair = None
    exc_pairs = 0
    exc_mass = Fraction(0)
    block_mass = Fraction(0)
    for i, m in enumerate(ns):
        for n in ns[i + 1:]:
            st = eng.stats(m, n)
            w = 2 * st.weight
            block_mass += w
            D = max(n * basis(m), m * basis(n)) / gcd(m, n)
            if D > 0 and lo_j <= floor_ln(D) <= hi_j:
                exc_pairs += 1
                exc_mass += w * st.P
                continue
            r = st.lambda_inter / (st.lambda_m * st.lambda_n)
            if best is None or r > best:
                best, best_pair = r, (m, n)
    return {
        "classify": classify,
        "pairs": len(ns) * (len(ns) - 1) // 2,
        "max_nonexceptional_ratio": best,
        "argmax": best_pair,
        "exceptional_pairs": exc_pairs,
        "exceptional_mass": exc_mass,
        "block_mass": block_mass,
        "mass_ratio": exc_mass / block_mass if block_mass else None,
    }
