"""
The approximating function psi: explicit tables or named rational families,
optional support filters, and the JSON document format.

JSON document::

    {"family": "reciprocal", "q": "1/2", "c": "1"}
    {"table": {"5": "1/4"}, "c": "1", "support": "even_blocks"}

``support`` is "even_blocks", "odd_blocks", {"min": a, "max": b}, or a
list of those (all must hold).  Optional "tower_base"/"growth_base"
change the block tower used by the parity filters.
"""

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .blocks import GROWTH_BASE, TOWER_BASE, block_index
from .errors import DomainError, PsiParseError

FAMILIES = ("constant", "reciprocal", "log_damped")

_Q_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text, location=None):
    if isinstance(text, bool):
        raise PsiParseError(f"expected a rational string, got {text!r}", location)
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _Q_RE.match(text.strip()):
        raise PsiParseError(f"malformed rational {text!r}", location)
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise PsiParseError(f"zero denominator in {text!r}", location) from None


def qstr(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _ceil_log2(n):
    return (n - 1).bit_length()


@dataclass(frozen=True, eq=False)
class PsiFunction:
    """A non-negative rational arithmetical function with extra-divergence constant c."""

    kind: str  # "table" or "family"
    c: Fraction = Fraction(1)
    table: dict = field(default_factory=dict)
    family: str = None
    q: Fraction = Fraction(0)
    filters: tuple = ()
    tower_base: int = TOWER_BASE
    growth_base: int = GROWTH_BASE

    def __post_init__(self):
        if self.kind not in ("table", "family"):
            raise DomainError(f"unknown psi kind {self.kind!r}")
        if self.kind == "family" and self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.c <= 0:
            raise DomainError(f"c must be positive, got {self.c}")
        if self.q < 0 or any(v < 0 for v in self.table.values()):
            raise DomainError("psi values must be non-negative")

    # construction helpers
    @classmethod
    def constant(cls, q, c=1, **kw):
        return cls("family", Fraction(c), family="constant", q=Fraction(q), **kw)

    @classmethod
    def reciprocal(cls, q=1, c=1, **kw):
        return cls("family", Fraction(c), family="reciprocal", q=Fraction(q), **kw)

    @classmethod
    def log_damped(cls, q=1, c=1, **kw):
        return cls("family", Fraction(c), family="log_damped", q=Fraction(q), **kw)

    @classmethod
    def from_table(cls, table, c=1, **kw):
        tab = {int(n): Fraction(v) for n, v in table.items()}
        if any(n < 1 for n in tab):
            raise DomainError("table keys must be positive integers")
        return cls("table", Fraction(c), table=tab, **kw)

    def with_filter(self, flt):
        return replace(self, filters=self.filters + (flt,))

    def with_c(self, c):
        return replace(self, c=Fraction(c))

    # evaluation
    def in_support(self, n):
        for flt in self.filters:
            if flt == "even_blocks" or flt == "odd_blocks":
                h = block_index(n, self.tower_base, self.growth_base)
                if h is None or (h % 2 == 0) != (flt == "even_blocks"):
                    return False
            else:
                lo, hi = flt
                if not lo <= n <= hi:
                    return False
        return True

    def _raw(self, n):
        if self.kind == "table":
            return self.table.get(n, Fraction(0))
        if self.family == "constant":
            return self.q
        if self.family == "reciprocal":
            return self.q / n
        return self.q / (n * max(1, _ceil_log2(n)))

    def __call__(self, n):
        return evaluate(self, n)

    def values(self, lo, hi):
        """[psi(n) for lo <= n <= hi]"""
        return [self._raw(n) if self.in_support(n) else Fraction(0) for n in range(lo, hi + 1)]

    def float_values(self, lo, hi):
        """psi(n) as float64 for lo <= n <= hi (vectorised for families)."""
        if self.kind == "table" or self.filters:
            return np.array([float(v) for v in self.values(lo, hi)])
        n = np.arange(lo, hi + 1, dtype=np.float64)
        q = float(self.q)
        if self.family == "constant":
            return np.full(n.shape, q)
        if self.family == "reciprocal":
            return q / n
        k = np.array([max(1, _ceil_log2(m)) for m in range(lo, hi + 1)], dtype=np.float64)
        return q / (n * k)

    def max_support(self):
        """Largest n with possibly non-zero psi, or None when unbounded."""
        bound = None
        if self.kind == "table":
            bound = max((n for n, v in self.table.items() if v > 0), default=0)
        for flt in self.filters:
            if isinstance(flt, tuple):
                bound = flt[1] if bound is None else min(bound, flt[1])
        return bound

    def scaled(self, factor, lo, hi):
        """factor * psi restricted to lo <= n <= hi."""
        factor = Fraction(factor)
        if self.kind == "table":
            tab = {n: v * factor for n, v in self.table.items() if lo <= n <= hi}
            return replace(self, table=tab, filters=self.filters + ((lo, hi),))
        return replace(self, q=self.q * factor, filters=self.filters + ((lo, hi),))

    # serialization
    def to_json_obj(self):
        obj = {}
        if self.kind == "table":
            obj["table"] = {str(n): qstr(v) for n, v in sorted(self.table.items())}
        else:
            obj["family"] = self.family
            obj["q"] = qstr(self.q)
        if self.filters:
            enc = [f if isinstance(f, str) else {"min": f[0], "max": f[1]} for f in self.filters]
            obj["support"] = enc[0] if len(enc) == 1 else enc
        obj["c"] = qstr(self.c)
        if self.tower_base != TOWER_BASE:
            obj["tower_base"] = self.tower_base
        if self.growth_base != GROWTH_BASE:
            obj["growth_base"] = self.growth_base
        return obj

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)


def evaluate(psi, n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"psi is defined on positive integers, got {n!r}")
    n = int(n)
    if not psi.in_support(n):
        return Fraction(0)
    return psi._raw(n)


def validate_normalization(psi, lo, hi):
    """Every n in [lo, hi] with 0 < psi(n) < 1/n or psi(n) > 1/2, as (n, value, reason)."""
    out = []
    for n, v in zip(range(lo, hi + 1), psi.values(lo, hi)):
        if v == 0:
            continue
        if v * n < 1:
            out.append((n, v, "below 1/n"))
        elif v > Fraction(1, 2):
            out.append((n, v, "above 1/2"))
    return out


def _parse_support(obj, loc):
    if obj in ("even_blocks", "odd_blocks"):
        return (obj,)
    if obj == "all":
        return ()
    if isinstance(obj, dict):
        try:
            lo, hi = obj["min"], obj["max"]
        except KeyError as exc:
            raise PsiParseError(f"range support needs key {exc}", loc) from None
        if not (isinstance(lo, int) and isinstance(hi, int)) or isinstance(lo, bool):
            raise PsiParseError("range bounds must be integers", loc)
        return ((lo, hi),)
    if isinstance(obj, list):
        out = ()
        for i, item in enumerate(obj):
            out += _parse_support(item, f"{loc}[{i}]")
        return out
    raise PsiParseError(f"unrecognised support {obj!r}", loc)


def load_psi(document):
    """Parse a psi JSON document (text or already-decoded dict)."""
    if isinstance(document, str):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise PsiParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    else:
        obj = document
    if not isinstance(obj, dict):
        raise PsiParseError("document must be a JSON object", "$")
    if "c" not in obj:
        raise PsiParseError("missing required key 'c'", "$")
    c = parse_rational(obj["c"], "$.c")
    if c <= 0:
        raise PsiParseError(f"c must be positive, got {qstr(c)}", "$.c")
    kw = {}
    for key in ("tower_base", "growth_base"):
        if key in obj:
            v = obj[key]
            if not isinstance(v, int) or isinstance(v, bool) or v < 2:
                raise PsiParseError(f"{key} must be an integer >= 2", f"$.{key}")
            kw[key] = v
    filters = _parse_support(obj["support"], "$.support") if "support" in obj else ()

    has_family, has_table = "family" in obj, "table" in obj
    if has_family == has_table:
        raise PsiParseError("exactly one of 'family' or 'table' is required", "$")
    if has_family:
        name = obj["family"]
        if name not in FAMILIES:
            raise PsiParseError(f"unknown family {name!r}; expected one of {FAMILIES}", "$.family")
        if "q" not in obj:
            raise PsiParseError("family needs parameter 'q'", "$")
        q = parse_rational(obj["q"], "$.q")
        if q < 0:
            raise PsiParseError(f"negative value {qstr(q)}", "$.q")
        return PsiFunction("family", c, family=name, q=q, filters=filters, **kw)

    tab_obj = obj["table"]
    if not isinstance(tab_obj, dict):
        raise PsiParseError("table must be an object", "$.table")
    tab = {}
    for key, val in tab_obj.items():
        loc = f"$.table[{key!r}]"
        if not re.fullmatch(r"\d+", key) or int(key) < 1:
            raise PsiParseError(f"table key {key!r} is not a positive decimal integer", loc)
        v = parse_rational(val, loc)
        if v < 0:
            raise PsiParseError(f"negative value {qstr(v)}", loc)
        tab[int(key)] = v
    return PsiFunction("table", c, table=tab, filters=filters, **kw)


def load_psi_file(path):
    with open(path) as fh:
        return load_psi(fh.read())
