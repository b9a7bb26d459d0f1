"""The approximation sets E_n and finite unions of them."""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, sqrt

import numpy as np

from .circleset import CircleIntervalUnion, union_all
from .errors import DomainError, ResourceError
from .numtheory import euler_phi

# cap on the number of arcs a truncated union may hold
ARC_BUDGET = 10**7


@dataclass(frozen=True)
class ApproxSet:
    n: int
    psi_n: Fraction
    set: CircleIntervalUnion

    def measure(self):
        return self.set.measure()


def coprime_residues(n):
    if n == 1:
        return [1]
    return [a for a in range(1, n) if gcd(a, n) == 1]


def e_set(n, psi_n, residues=None):
    """E_n as a CircleIntervalUnion for the value psi_n = psi(n)."""
    psi_n = Fraction(psi_n)
    if psi_n == 0:
        return CircleIntervalUnion.empty()
    p, q = psi_n.numerator, psi_n.denominator
    # arc around a/n has endpoints (a*q -+ p) / (n*q)
    if residues is None:
        residues = coprime_residues(n)
    return CircleIntervalUnion.from_int_arcs(n * q, [(a * q - p, a * q + p) for a in residues])


def build_E(n, psi):
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    v = psi(n)
    return ApproxSet(n, v, e_set(n, v))


def measure_formula_check(n, psi):
    """(computed, formula, equal) with formula = min(1, 2 psi(n) phi(n)/n)."""
    e = build_E(n, psi)
    computed = e.measure()
    formula = min(Fraction(1), 2 * e.psi_n * euler_phi(n) / n)
    return computed, formula, computed == formula


def truncated_union(psi, lo, hi, arc_budget=None):
    """Exact union of E_n for lo <= n <= hi."""
    if lo > hi:
        raise DomainError(f"empty range [{lo}, {hi}]")
    budget = ARC_BUDGET if arc_budget is None else arc_budget
    vals = psi.values(lo, hi)
    arcs = sum(euler_phi(n) for n, v in zip(range(lo, hi + 1), vals) if v > 0)
    if arcs > budget:
        raise ResourceError(
            f"union over [{lo}, {hi}] needs {arcs} arcs, over the arc budget {budget}; "
            "raise it with --arc-budget (or approxsets.ARC_BUDGET)"
        )
    return union_all(e_set(n, v) for n, v in zip(range(lo, hi + 1), vals) if v > 0)


def montecarlo_union_measure(psi, lo, hi, samples, seed):
    """Monte-Carlo estimate of the measure of the union of E_n, lo <= n <= hi.

    Returns (estimate, standard error).  Membership is decided per point
    from the nearest numerators a to n*x, independently of the interval
    code.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.random(samples)
    hit = np.zeros(samples, dtype=bool)
    for n, v in zip(range(lo, hi + 1), psi.values(lo, hi)):
        if v == 0:
            continue
        todo = np.flatnonzero(~hit)
        if todo.size == 0:
            break
        nx = n * x[todo]
        centre = np.rint(nx).astype(np.int64)
        reach = ceil(v)
        inside = np.zeros(todo.size, dtype=bool)
        for d in range(-reach, reach + 1):
            a = centre + d
            close = np.abs(nx - a) < float(v)
            ok = np.gcd(np.mod(a, n), n) == 1
            inside |= close & ok
        hit[todo[inside]] = True
    p = hit.mean()
    return float(p), float(sqrt(p * (1 - p) / samples))
