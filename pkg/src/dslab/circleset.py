"""
Finite unions of open arcs on the circle R/Z with rational endpoints.

A union is stored as one common denominator `den` and a flat tuple of
integer endpoints ``l0, r0, l1, r1, ...`` with ``0 <= l < r <= den``.
Arcs are sorted and pairwise disjoint.  Arcs that merely touch are kept
apart because the shared point is not in an open union.  An arc that
crosses 0 is cut there, so the point 0 itself is never a member.  The
representation is reduced by the gcd of all its integers, which makes
it unique: two unions are equal as sets exactly when they compare equal.
"""

import json
from bisect import bisect_right
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .errors import DomainError


def _canonical(den, pairs):
    """Sort/merge (l, r) integer pairs already inside [0, den]."""
    pairs = sorted(p for p in pairs if p[0] < p[1])
    out = []
    for l, r in pairs:
        if out and l < out[-1]:
            if r > out[-1]:
                out[-1] = r
        else:
            out.append(l)
            out.append(r)
    return den, out


def _wrap(den, l, r):
    """Reduce the real-line open arc (l/den, r/den) onto [0, den] pieces."""
    width = r - l
    if width <= 0:
        return []
    if width > den:
        return [(0, den)]
    l0 = l % den
    r0 = l0 + width
    if r0 <= den:
        return [(l0, r0)]
    return [(l0, den), (0, r0 - den)]


class CircleIntervalUnion:
    __slots__ = ("_den", "_ends", "_hash", "_arr")

    def __init__(self, den=1, ends=()):
        # trusted constructor; use the builders below from outside
        g = gcd(den, *ends)
        if g > 1:
            den //= g
            ends = [e // g for e in ends]
        self._den = den
        self._ends = tuple(ends)
        self._hash = None
        self._arr = None

    # -- builders ---------------------------------------------------------

    @classmethod
    def empty(cls):
        return cls(1, ())

    @classmethod
    def full(cls):
        return cls(1, (0, 1))

    @classmethod
    def from_int_arcs(cls, den, arcs):
        """Build from open arcs (l/den, r/den) given as integers on the real line."""
        if den < 1:
            raise DomainError("denominator must be positive")
        pieces = []
        for l, r in arcs:
            pieces.extend(_wrap(den, l, r))
        den, ends = _canonical(den, pieces)
        return cls(den, ends)

    @classmethod
    def from_intervals(cls, intervals):
        """Build from (left, right) rational pairs on the real line."""
        intervals = [(Fraction(l), Fraction(r)) for l, r in intervals]
        if not intervals:
            return cls.empty()
        den = lcm(*(x.denominator for lr in intervals for x in lr))
        return cls.from_int_arcs(den, [
            (l.numerator * (den // l.denominator), r.numerator * (den // r.denominator))
            for l, r in intervals
        ])

    @classmethod
    def from_arcs(cls, raw):
        """Union of open arcs (center - radius, center + radius) mod 1."""
        intervals = []
        for center, radius in raw:
            center, radius = Fraction(center), Fraction(radius)
            if radius < 0:
                raise DomainError(f"negative radius {radius}")
            if radius > 0:
                intervals.append((center - radius, center + radius))
        return cls.from_intervals(intervals)

    # -- views ------------------------------------------------------------

    @property
    def den(self):
        return self._den

    @property
    def int_ends(self):
        return self._ends

    @property
    def intervals(self):
        d = self._den
        e = self._ends
        return [(Fraction(e[i], d), Fraction(e[i + 1], d)) for i in range(0, len(e), 2)]

    def arcs_of(self):
        """(center, radius) pairs that rebuild this union through from_arcs."""
        return [((l + r) / 2, (r - l) / 2) for l, r in self.intervals]

    def __len__(self):
        return len(self._ends) // 2

    def __bool__(self):
        return bool(self._ends)

    def __eq__(self, other):
        if not isinstance(other, CircleIntervalUnion):
            return NotImplemented
        return self._den == other._den and self._ends == other._ends

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._den, self._ends))
        return self._hash

    def __repr__(self):
        body = " U ".join(f"({l}, {r})" for l, r in self.intervals) or "{}"
        return f"CircleIntervalUnion[{body}]"

    # -- measure and membership -------------------------------------------

    def measure_numerator(self):
        e = self._ends
        return sum(e[1::2]) - sum(e[0::2])

    def measure(self):
        return Fraction(self.measure_numerator(), self._den)

    def contains(self, x):
        x = Fraction(x)
        if not 0 <= x < 1:
            raise DomainError(f"point {x} is not reduced mod 1")
        pos = x * self._den
        lefts = self._ends[0::2]
        i = bisect_right(lefts, pos) - 1
        if i < 0:
            return False
        return self._ends[2 * i] < pos < self._ends[2 * i + 1]

    # -- set algebra ------------------------------------------------------

    def _scaled(self, den):
        f = den // self._den
        if f == 1:
            return self._ends
        return [e * f for e in self._ends]

    def intersect(self, other):
        den = lcm(self._den, other._den)
        out = _sweep_intersection(self._scaled(den), other._scaled(den))
        return CircleIntervalUnion(den, out)

    def union(self, other):
        den = lcm(self._den, other._den)
        a, b = self._scaled(den), other._scaled(den)
        pairs = list(zip(a[0::2], a[1::2])) + list(zip(b[0::2], b[1::2]))
        return CircleIntervalUnion(*_canonical(den, pairs))

    def complement(self):
        """Open gaps between the arcs; measure is 1 - measure(self)."""
        e = self._ends
        pts = [0, *e, self._den]
        pairs = [(pts[i], pts[i + 1]) for i in range(0, len(pts), 2)]
        return CircleIntervalUnion(*_canonical(self._den, pairs))

    __and__ = intersect
    __or__ = union

    def issubset(self, other):
        return self.intersect(other) == self

    # -- serialization ----------------------------------------------------

    def to_json_obj(self):
        return [[_qstr(l), _qstr(r)] for l, r in self.intervals]

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text) if isinstance(text, str) else text
        return cls.from_intervals([(Fraction(l), Fraction(r)) for l, r in obj])


def _sweep_intersection(a, b):
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        lo = a[i] if a[i] > b[j] else b[j]
        hi = a[i + 1] if a[i + 1] < b[j + 1] else b[j + 1]
        if lo < hi:
            out.append(lo)
            out.append(hi)
        if a[i + 1] < b[j + 1]:
            i += 2
        else:
            j += 2
    return out


_INT64_SAFE = 2**62
_VECTOR_MIN = 24


def _int_array(s):
    arr = getattr(s, "_arr", None)
    if arr is None:
        arr = np.asarray(s._ends, dtype=np.int64)
        object.__setattr__(s, "_arr", arr)
    return arr


def _vector_intersection_measure(x, y):
    """sum over arcs (l, r) of x of |(l, r) & y|, via the cumulative measure of y."""
    yl, yr = y[0::2], y[1::2]
    cum = np.concatenate(([0], np.cumsum(yr - yl)))

    def F(t):
        k = np.searchsorted(yl, t, side="right") - 1
        kk = np.maximum(k, 0)
        part = np.clip(t - yl[kk], 0, yr[kk] - yl[kk])
        return np.where(k >= 0, cum[kk] + part, 0)

    return int(F(x[1::2]).sum() - F(x[0::2]).sum())


def intersection_measure(a, b):
    """Exact measure of a & b without materialising the intersection."""
    if not a or not b:
        return Fraction(0)
    den = lcm(a.den, b.den)
    if len(a) + len(b) >= _VECTOR_MIN and den * (len(a) + len(b) + 1) < _INT64_SAFE:
        fa, fb = den // a.den, den // b.den
        x = _int_array(a) * fa
        y = _int_array(b) * fb
        return Fraction(_vector_intersection_measure(x, y), den)
    x, y = a._scaled(den), b._scaled(den)
    total = 0
    i = j = 0
    na, nb = len(x), len(y)
    while i < na and j < nb:
        ahi, bhi = x[i + 1], y[j + 1]
        lo = x[i] if x[i] > y[j] else y[j]
        hi = ahi if ahi < bhi else bhi
        if lo < hi:
            total += hi - lo
        if ahi < bhi:
            i += 2
        else:
            j += 2
    return Fraction(total, den)


def union_all(sets):
    """Union of many sets in one canonicalisation pass (order-insensitive)."""
    sets = [s for s in sets if s]
    if not sets:
        return CircleIntervalUnion.empty()
    den = lcm(*(s.den for s in sets))
    pairs = []
    for s in sets:
        e = s._scaled(den)
        pairs.extend(zip(e[0::2], e[1::2]))
    return CircleIntervalUnion(*_canonical(den, pairs))


def measure(s):
    return s.measure()


def _qstr(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
