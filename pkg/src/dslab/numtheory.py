"""
Exact integer number theory: totients, factorizations and the primes
of mn/gcd(m,n)^2.

Everything here works on Python ints, so nothing overflows.  Batch work
goes through the numpy sieves, which are built once and then only read.
"""

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, ResourceError

# largest sieve table we are willing to allocate (entries)
SIEVE_BUDGET = 10**8


def _check_positive(n, name="n"):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"{name} must be >= 1, got {n}")


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple  # ((prime, exponent), ...) sorted by prime

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"non-canonical factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self):
        return [p for p, _ in self.factors]

    def radical(self):
        r = 1
        for p, _ in self.factors:
            r *= p
        return r


def small_primes(limit):
    """All primes <= limit, as a Python list."""
    if limit < 2:
        return []
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).tolist()


def factorize(n, primes=None):
    """Factor n by trial division.

    `primes`, when given, is an increasing list of primes tried first; it
    only speeds things up, any remaining cofactor is still finished off by
    plain trial division.
    """
    _check_positive(n)
    n = int(n)
    out = []
    m = n
    if primes is not None:
        for p in primes:
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
        start = primes[-1] + 1 if primes else 2
        if start * start > m:
            if m > 1:
                out.append((m, 1))
            return Factorization(n, tuple(out))
    else:
        start = 2
    p = start
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else (2 if p % 2 else 1)
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def euler_phi(n):
    _check_positive(n)
    r = int(n)
    for p, _ in factorize(n).factors:
        r -= r // p
    return r


def cross_radical_primes(m, n):
    """Sorted distinct primes dividing mn/gcd(m,n)^2."""
    _check_positive(m, "m")
    _check_positive(n, "n")
    g = gcd(m, n)
    # m/g and n/g are coprime, so mn/g^2 splits cleanly
    ps = set(factorize(m // g).primes) | set(factorize(n // g).primes)
    return sorted(ps)


def _check_budget(limit):
    _check_positive(limit, "limit")
    if limit > SIEVE_BUDGET:
        raise ResourceError(
            f"sieve limit {limit} exceeds SIEVE_BUDGET={SIEVE_BUDGET}; "
            "raise dslab.numtheory.SIEVE_BUDGET to allow it"
        )


def totient_sieve(limit):
    """phi(n) for 0 <= n <= limit as an int64 array (entry 0 is 0)."""
    _check_budget(limit)
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in small_primes(limit):
        phi[p::p] -= phi[p::p] // p
    return phi


def spf_sieve(limit):
    """Smallest prime factor table for 0 <= n <= limit (0 and 1 map to 0/1)."""
    _check_budget(limit)
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            np.copyto(block, p, where=block == np.arange(p * p, limit + 1, p))
    return spf


class FactorTable:
    """Read-only factorization cache for all n <= limit."""

    def __init__(self, limit):
        self.limit = int(limit)
        self.spf = spf_sieve(self.limit).tolist()
        self._phi = None

    def primes_of(self, n):
        out = []
        spf = self.spf
        while n > 1:
            p = spf[n]
            out.append(p)
            while n % p == 0:
                n //= p
        return out

    def factorize(self, n):
        if not 1 <= n <= self.limit:
            return factorize(n)
        out = []
        spf = self.spf
        m = n
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return Factorization(n, tuple(out))

    def phi(self, n):
        if self._phi is None:
            self._phi = totient_sieve(self.limit).tolist()
        return self._phi[n]

    def cross_radical_primes(self, m, n):
        g = gcd(m, n)
        return sorted(set(self.primes_of(m // g)) | set(self.primes_of(n // g)))
