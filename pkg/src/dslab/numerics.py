"""
Certified real arithmetic on top of mpmath interval arithmetic.

Quantities such as ln D, log log X or e^{-k} are irrational, but every
decision the package takes on them (a floor, a comparison with a
rational) is resolved exactly: evaluate an enclosing interval, and
double the working precision until the decision no longer depends on
where in the interval the true value lies.
"""

from contextlib import contextmanager
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import floor, log

from mpmath import iv
from mpmath.libmp import to_rational

START_PREC = 64
MAX_PREC = 1 << 14


class Unresolved(ArithmeticError):
    """Raised when a decision is still ambiguous at MAX_PREC bits."""


@contextmanager
def ivprec(prec):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def bounds(x):
    """Exact rational (lo, hi) of an mpmath interval."""
    a, b = x._mpi_
    return Fraction(*map(int, to_rational(a))), Fraction(*map(int, to_rational(b)))


def iv_rational(q):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def enclose(fn, prec=START_PREC):
    """(lo, hi) rational enclosure of fn() evaluated in interval arithmetic."""
    with ivprec(prec):
        return bounds(fn())


def certified_floor(fn, exact_hint=None):
    """floor of the real number enclosed by fn(); refines until resolved.

    `exact_hint`, when given, is a callable returning the exact value as a
    Fraction or None; it is consulted when the enclosure straddles an
    integer that the value might equal exactly.
    """
    prec = START_PREC
    while prec <= MAX_PREC:
        lo, hi = enclose(fn, prec)
        a, b = floor(lo), floor(hi)
        if a == b:
            return a
        if exact_hint is not None:
            v = exact_hint()
            if v is not None:
                return floor(v)
        prec *= 2
    raise Unresolved(f"floor still ambiguous at {MAX_PREC} bits")


@lru_cache(maxsize=None)
def _exp_bounds(j, prec):
    return enclose(lambda: iv.exp(j), prec)


def exp_le(j, q):
    """Exact test of e**j <= q for integer j and rational q > 0."""
    if j == 0:
        return q >= 1
    prec = START_PREC * 2
    while prec <= MAX_PREC:
        lo, hi = _exp_bounds(j, prec)
        if q >= hi:
            return True
        if q < lo:
            return False
        prec *= 2
    raise Unresolved(f"e^{j} vs {q} unresolved at {MAX_PREC} bits")


def floor_ln(q):
    """Exact floor(ln q) for rational q > 0 (j with e^j <= q < e^(j+1))."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ln of a non-positive number")
    j = floor(log(q.numerator) - log(q.denominator))
    while not exp_le(j, q):
        j -= 1
    while exp_le(j + 1, q):
        j += 1
    return j


def upper(fn, prec=START_PREC * 2):
    return enclose(fn, prec)[1]


def lower(fn, prec=START_PREC * 2):
    return enclose(fn, prec)[0]


def decimal(fn, digits=30):
    """Rounded decimal string of a certified value, with its enclosure width below 10**-digits."""
    prec = max(START_PREC, int(digits * 3.33) + 16)
    lo, hi = enclose(fn, prec)
    mid = (lo + hi) / 2
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(mid.numerator) / Decimal(mid.denominator))


def lt_ln(r, x):
    """Exact test of r < ln(x) for rational r and integer x > 1."""
    r = Fraction(r)
    prec = START_PREC
    while prec <= MAX_PREC:
        lo, hi = enclose(lambda: iv.log(iv.mpf(x)), prec)
        if r < lo:
            return True
        if r >= hi:
            return False
        prec *= 2
    raise Unresolved(f"{r} vs ln {x} unresolved at {MAX_PREC} bits")
