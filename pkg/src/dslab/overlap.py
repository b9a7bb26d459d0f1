"""
Pairwise overlap statistics for E_m and E_n.

For m != n this computes the thresholds A(m,n) and D(m,n), the overlap
factor P(m,n), the solution count Sigma(m,n), and the exact intersection
measure.  The intersection always comes from the interval algebra; the
counting bounds are only ever compared against it.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd, prod

import numpy as np

from .approxsets import coprime_residues, e_set
from .circleset import intersection_measure
from .errors import DomainError
from .numtheory import FactorTable, euler_phi, factorize
from .psifun import qstr

CSV_FIELDS = ("m", "n", "lambda_m", "lambda_n", "lambda_inter", "A", "D", "P",
              "Sigma", "lemma2_rhs", "ratio")


def _need_distinct(m, n):
    if m < 1 or n < 1:
        raise DomainError(f"m, n must be >= 1, got ({m}, {n})")
    if m == n:
        raise DomainError(f"pair quantities need m != n, got m = n = {m}")


def _A(m, n, pm, pn):
    return 2 * max(m * pn, n * pm)


def _D(m, n, pm, pn):
    return max(n * pm, m * pn) / gcd(m, n)


def _P(D, primes):
    num = den = 1
    for p in primes:
        if p > D:
            num *= p
            den *= p - 1
    return Fraction(num, den)


def quantity_A(m, n, psi):
    if m < 1 or n < 1:
        raise DomainError(f"m, n must be >= 1, got ({m}, {n})")
    return _A(m, n, psi(m), psi(n))


def quantity_D(m, n, psi):
    _need_distinct(m, n)
    return _D(m, n, psi(m), psi(n))


def factor_P(m, n, psi, primes=None):
    _need_distinct(m, n)
    if primes is None:
        g = gcd(m, n)
        primes = sorted(set(factorize(m // g).primes) | set(factorize(n // g).primes))
    return _P(quantity_D(m, n, psi), primes)


# -- Sigma(m, n) ----------------------------------------------------------

def _sigma_brute(m, n, A, strict=True):
    if m < 2 or n < 2 or A <= 0:
        return 0
    Ap, Aq = A.numerator, A.denominator
    a = np.array(coprime_residues(m), dtype=np.int64)
    b = np.array(coprime_residues(n), dtype=np.int64)
    if m * n * Aq < 2**62 and Ap < 2**62:
        diff = np.abs(a[:, None] * n - b[None, :] * m) * Aq
        return int(np.count_nonzero(diff < Ap if strict else diff <= Ap))
    cnt = 0
    for x in a.tolist():
        for y in b.tolist():
            d = abs(x * n - y * m) * Aq
            cnt += d < Ap if strict else d <= Ap
    return cnt


def _count_avoiding(lo, hi, forbidden):
    """#{lo <= s <= hi : s mod p not in forbidden[p] for every p}."""
    if hi < lo:
        return 0
    primes = sorted(forbidden)
    length = hi - lo + 1
    if length <= 2 * (1 << len(primes)):
        return sum(
            1 for s in range(lo, hi + 1)
            if all(s % p not in forbidden[p] for p in primes)
        )
    total = 0
    for k in range(len(primes) + 1):
        sign = -1 if k % 2 else 1
        for subset in combinations(primes, k):
            mod = prod(subset)
            for residues in product(*(forbidden[p] for p in subset)):
                r = _crt(residues, subset, mod)
                # s = r + mod*t inside [lo, hi]
                total += sign * ((hi - r) // mod - (lo - 1 - r) // mod)
    return total


def _crt(residues, moduli, mod):
    r = 0
    for res, p in zip(residues, moduli):
        M = mod // p
        r += res * M * pow(M, -1, p)
    return r % mod


def _sigma_fast(m, n, A, primes_m, primes_n, strict=True):
    if m < 2 or n < 2 or A <= 0:
        return 0
    g = gcd(m, n)
    mp, np_ = m // g, n // g
    Ap, Aq = A.numerator, A.denominator
    # admissible h = g*t satisfy |t| * g < A
    tmax = (Ap - 1) // (g * Aq) if strict else Ap // (g * Aq)
    inv = pow(np_, -1, mp) if mp > 1 else 0
    inv_m = {p: pow(mp, -1, p) for p in primes_m if mp % p}
    inv_n = {p: pow(np_, -1, p) for p in primes_n if np_ % p}
    total = 0
    for t in range(-tmax, tmax + 1):
        a0 = (t * inv) % mp
        b0 = (a0 * np_ - t) // mp
        # a = a0 + mp*s in [1, m-1], b = b0 + np_*s in [1, n-1]
        lo = max(-((a0 - 1) // mp), -((b0 - 1) // np_))
        hi = min((m - 1 - a0) // mp, (n - 1 - b0) // np_)
        if hi < lo:
            continue
        forbidden = {}
        dead = False
        for p in primes_m:
            if p in inv_m:
                forbidden.setdefault(p, set()).add((-a0 * inv_m[p]) % p)
            elif a0 % p == 0:
                dead = True
                break
        if dead:
            continue
        for p in primes_n:
            if p in inv_n:
                forbidden.setdefault(p, set()).add((-b0 * inv_n[p]) % p)
            elif b0 % p == 0:
                dead = True
                break
        if dead:
            continue
        total += _count_avoiding(lo, hi, forbidden)
    return total


def count_sigma(m, n, psi, method="fast", strict=True):
    """Number of coprime (a, b), 1 <= a < m, 1 <= b < n, with |an - bm| < A(m,n)."""
    if m < 1 or n < 1:
        raise DomainError(f"m, n must be >= 1, got ({m}, {n})")
    A = quantity_A(m, n, psi)
    if method == "brute":
        return _sigma_brute(m, n, A, strict)
    if method == "fast":
        return _sigma_fast(m, n, A, factorize(m).primes, factorize(n).primes, strict)
    raise DomainError(f"unknown method {method!r}")


# -- PairStats ------------------------------------------------------------

@dataclass(frozen=True)
class PairStats:
    m: int
    n: int
    psi_m: Fraction
    psi_n: Fraction
    lambda_m: Fraction
    lambda_n: Fraction
    lambda_inter: Fraction
    A: Fraction
    D: Fraction
    P: Fraction
    Sigma: int

    @property
    def lemma2_rhs(self):
        return self.lambda_m * self.lambda_n * self.P

    @property
    def ratio(self):
        rhs = self.lemma2_rhs
        return self.lambda_inter / rhs if rhs > 0 else None

    @property
    def weight(self):
        """psi(m) psi(n) phi(m) phi(n) / (mn), i.e. lambda_m lambda_n / 4."""
        return self.lambda_m * self.lambda_n / 4

    def elementary_bound_ok(self):
        return self.lambda_inter <= 8 * self.psi_m * self.psi_n

    def min_length_bound(self):
        return 2 * min(self.psi_m / self.m, self.psi_n / self.n) * self.Sigma

    def min_length_bound_ok(self):
        return self.lambda_inter <= self.min_length_bound()

    def csv_row(self):
        ratio = self.ratio
        return [str(self.m), str(self.n), qstr(self.lambda_m), qstr(self.lambda_n),
                qstr(self.lambda_inter), qstr(self.A), qstr(self.D), qstr(self.P),
                str(self.Sigma), qstr(self.lemma2_rhs), "" if ratio is None else qstr(ratio)]


class PairEngine:
    """Caches E_n, phi and factorizations for repeated pair evaluation."""

    def __init__(self, psi, limit=None, strict=True):
        self.psi = psi
        self.strict = strict
        self.table = FactorTable(limit) if limit else None
        self._sets = {}
        self._psi = {}

    def psi_of(self, n):
        v = self._psi.get(n)
        if v is None:
            v = self._psi[n] = self.psi(n)
        return v

    def primes_of(self, n):
        if self.table is not None and n <= self.table.limit:
            return self.table.primes_of(n)
        return factorize(n).primes

    def phi(self, n):
        if self.table is not None and n <= self.table.limit:
            return self.table.phi(n)
        return euler_phi(n)

    def e_of(self, n):
        s = self._sets.get(n)
        if s is None:
            s = self._sets[n] = e_set(n, self.psi_of(n))
        return s

    def cross_primes(self, m, n):
        g = gcd(m, n)
        return sorted(set(self.primes_of(m // g)) | set(self.primes_of(n // g)))

    def P(self, m, n):
        _need_distinct(m, n)
        return _P(_D(m, n, self.psi_of(m), self.psi_of(n)), self.cross_primes(m, n))

    def stats(self, m, n):
        _need_distinct(m, n)
        pm, pn = self.psi_of(m), self.psi_of(n)
        A = _A(m, n, pm, pn)
        D = _D(m, n, pm, pn)
        P = _P(D, self.cross_primes(m, n))
        if pm == 0 or pn == 0:
            zero = Fraction(0)
            return PairStats(m, n, pm, pn, zero, zero, zero, A, D, P, 0)
        em, en = self.e_of(m), self.e_of(n)
        sigma = _sigma_fast(m, n, A, self.primes_of(m), self.primes_of(n), self.strict)
        return PairStats(m, n, pm, pn, em.measure(), en.measure(),
                         intersection_measure(em, en), A, D, P, sigma)


def pair_stats(m, n, psi):
    return PairEngine(psi).stats(m, n)
