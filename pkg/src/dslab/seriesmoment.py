"""
Divergence diagnostics and the second-moment lower bound.

The plain series sum phi(n) psi(n) / n is summed exactly (gmpy2 rationals,
pairwise tree summation so denominators stay balanced).  The damped
series have irrational terms; they are summed in float64 with a
correctly rounded final sum and a reported absolute error bound.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from gmpy2 import mpq

from .approxsets import truncated_union
from .circleset import intersection_measure
from .errors import DomainError, ResourceError
from .numtheory import totient_sieve
from .overlap import PairEngine
from .psifun import qstr

EPS = 2.0**-52
EXTRA_START = 16
PAIR_BUDGET = 10**6


# -- the damping functions ------------------------------------------------

def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def fc_eval(x, c):
    """f_c(x) at the current mpmath precision.

    Between e^{-e} and 1 the damping exponent would be positive (and below
    e^{-1} the double logarithm is not even real); the exponent is clamped
    at 0 there, so f_c(x) = x.
    """
    x, c = _mp(x), _mp(c)
    if x < 0:
        raise DomainError("f_c is defined for x >= 0")
    if x == 0:
        return mpmath.mpf(0)
    if x >= 1:
        return mpmath.mpf(1)
    L = -mpmath.log(x)
    if L <= mpmath.e:
        return x
    return x * mpmath.exp(-c * mpmath.log(L) * mpmath.log(mpmath.log(L)))


def hpv_f_eval(x):
    """x exp(log x / log(-log x)) on (0, 1); 0 at 0 and 1 from 1 on.

    At x = 1/e the inner logarithm vanishes; the left limit 0 is returned.
    On (1/e, 1) the inner logarithm is negative and the value exceeds x;
    only the behaviour as x -> 0 matters for damping, so that is left as is.
    """
    x = _mp(x)
    if x < 0:
        raise DomainError("f is defined for x >= 0")
    if x == 0:
        return mpmath.mpf(0)
    if x >= 1:
        return mpmath.mpf(1)
    inner = mpmath.log(-mpmath.log(x))
    if inner == 0:
        return mpmath.mpf(0)
    return x * mpmath.exp(mpmath.log(x) / inner)


def fc_monotonicity_report(c, lo_exp=-60, hi_exp=None, points=400):
    """Scan f_c on the grid x = e^{-e^t}; report any decrease.

    x runs from e^{lo_exp} up to e^{-hi_exp} (the clamp boundary e^{-e}
    by default), with t evenly spaced.  Returns (grid size, list of
    (x_i, x_{i+1}) where f_c decreased).
    """
    hi_exp = math.e if hi_exp is None else hi_exp
    ts = np.linspace(math.log(-lo_exp), math.log(hi_exp), points)
    xs = [mpmath.exp(-mpmath.exp(t)) for t in ts.tolist()]
    vals = [fc_eval(x, c) for x in xs]
    bad = [(xs[i], xs[i + 1]) for i in range(len(xs) - 1)
           if xs[i] < xs[i + 1] and vals[i] > vals[i + 1]]
    return len(xs), bad


# -- series ---------------------------------------------------------------

def _tree_sum(terms):
    if not terms:
        return mpq(0)
    while len(terms) > 1:
        nxt = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


@dataclass
class Damped:
    value: float
    error: float

    def hi(self):
        return self.value + self.error

    def to_json_obj(self):
        return [repr(self.value), repr(self.error)]


@dataclass
class SeriesReport:
    N: int
    c: Fraction
    partial_plain: object          # gmpy2.mpq, exact
    partial_extra: Damped
    partial_fc: Damped
    growth_samples: list = field(default_factory=list)

    def extra_le_plain(self):
        """partial_extra <= partial_plain, with the error bar on the damped side."""
        return mpq(self.partial_extra.value) + mpq(self.partial_extra.error) <= self.partial_plain

    def to_json_obj(self):
        def q(x):
            return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)

        return {
            "N": self.N,
            "c": qstr(self.c),
            "partial_plain": q(self.partial_plain),
            "partial_plain_float": float(self.partial_plain),
            "partial_extra": self.partial_extra.to_json_obj(),
            "partial_fc": self.partial_fc.to_json_obj(),
            "growth_samples": [
                {"N": n, "plain": float(p), "extra": e.to_json_obj(), "fc": f.to_json_obj()}
                for n, p, e, f in self.growth_samples
            ],
        }


def _damped_sum(terms, rel):
    """fsum of non-negative float terms with per-term relative error `rel`."""
    s = math.fsum(terms.tolist())
    err = float(np.sum(terms * rel)) * (1 + 4 * EPS) + 2 * EPS * s
    return s, err


def series_report(psi, N, checkpoints=None, c=None):
    """Partial sums up to N, recorded at every checkpoint <= N (and at N)."""
    if N < EXTRA_START:
        raise DomainError(f"the damped series starts at n = {EXTRA_START}; N = {N} is too small")
    c = psi.c if c is None else Fraction(c)
    cf = float(c)
    if checkpoints is None:
        checkpoints = [10**k for k in range(2, 20) if 10**k < N]
    cps = sorted({k for k in checkpoints if EXTRA_START <= k <= N} | {N})

    phi = totient_sieve(N)
    vals = psi.values(1, N)
    n = np.arange(1, N + 1, dtype=np.float64)
    pf = np.array([float(v) for v in vals])
    phif = phi[1:].astype(np.float64)
    base = phif * pf / n          # phi(n) psi(n) / n

    # terms damped by exp(-c loglog n logloglog n), n >= 16
    L2 = np.zeros(N)
    L3 = np.zeros(N)
    tail = slice(EXTRA_START - 1, N)
    L2[tail] = np.log(np.log(n[tail]))
    L3[tail] = np.log(L2[tail])
    arg = cf * L2 * L3
    extra = np.where(n >= EXTRA_START, base * np.exp(-arg), 0.0)
    rel_extra = (16 + 32 * arg + 32 * cf * L2) * EPS

    # f_c(psi(n)/n) phi(n)
    x = pf / n
    with np.errstate(divide="ignore", invalid="ignore"):
        L = -np.log(x)
        lnL = np.log(L)
        damp = cf * lnL * np.log(lnL)
        fc = np.where(L > math.e, x * np.exp(-damp), x) * phif
    ge1 = np.array([v >= k for v, k in zip(vals, range(1, N + 1))])  # psi(n)/n >= 1
    fc = np.where(ge1, phif, fc)
    fc = np.where(pf == 0, 0.0, fc)
    rel_fc = np.where((L > math.e) & ~ge1, (16 + 32 * np.abs(damp) + 32 * cf * np.abs(lnL)) * EPS, 8 * EPS)
    rel_fc = np.nan_to_num(rel_fc)

    samples = []
    plain_total = mpq(0)
    start = 1
    for cp in cps:
        seg = [mpq(int(phi[k]) * v.numerator, k * v.denominator)
               for k, v in zip(range(start, cp + 1), vals[start - 1:cp]) if v]
        plain_total += _tree_sum(seg)
        e = Damped(*_damped_sum(extra[:cp], rel_extra[:cp]))
        f = Damped(*_damped_sum(fc[:cp], rel_fc[:cp]))
        samples.append((cp, plain_total, e, f))
        start = cp + 1
    _, plain, e, f = samples[-1]
    return SeriesReport(N, c, plain, e, f, samples)


# -- second moment ---------------------------------------------------------

def second_moment_profile(psi, checkpoints, pair_budget=None, arc_budget=None):
    """Second-moment bound at each cutoff N in `checkpoints`, plus its running max.

    Returns a list of dicts with keys N, numerator, denominator, bound,
    union_measure and running_max (the largest bound at any cutoff <= N).
    Pair intersections are computed once and accumulated across cutoffs.
    """
    cps = sorted(set(checkpoints))
    if not cps or cps[0] < 1:
        raise DomainError("checkpoints must be positive integers")
    N = cps[-1]
    budget = PAIR_BUDGET if pair_budget is None else pair_budget
    eng = PairEngine(psi, limit=max(N, 2))
    ns = [n for n in range(1, N + 1) if eng.psi_of(n) > 0]
    if len(ns) * (len(ns) - 1) // 2 > budget:
        raise ResourceError(
            f"{len(ns)} active sets need {len(ns) * (len(ns) - 1) // 2} pair intersections, "
            f"over the pair budget {budget}; raise --pairs-budget"
        )
    sets = []
    first = cross = Fraction(0)
    best = None
    out = []
    i = 0
    for cp in cps:
        while i < len(ns) and ns[i] <= cp:
            e = eng.e_of(ns[i])
            first += e.measure()
            cross += sum((intersection_measure(e, s) for s in sets), Fraction(0))
            sets.append(e)
            i += 1
        numerator = first * first
        denominator = first + 2 * cross
        bound = numerator / denominator if denominator > 0 else Fraction(0)
        union = truncated_union(psi, 1, cp, arc_budget).measure() if sets else Fraction(0)
        best = bound if best is None else max(best, bound)
        out.append({"N": cp, "numerator": numerator, "denominator": denominator,
                    "bound": bound, "union_measure": union, "running_max": best})
    return out


def second_moment_bound(psi, N, pair_budget=None, arc_budget=None):
    """(numerator, denominator, bound, union_measure) for E_1..E_N.

    numerator = (sum lambda(E_n))^2, denominator = sum over all m, n of
    lambda(E_m & E_n) (diagonal included), bound = numerator/denominator.
    The finite Cauchy-Schwarz inequality says bound <= union_measure.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    r = second_moment_profile(psi, [N], pair_budget, arc_budget)[0]
    return r["numerator"], r["denominator"], r["bound"], r["union_measure"]
