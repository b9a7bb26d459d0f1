"""Exact-arithmetic experiments on coprime approximation sets E_n and their overlaps."""

from .approxsets import build_E, truncated_union
from .circleset import CircleIntervalUnion
from .errors import DomainError, PsiParseError, ResourceError
from .psifun import PsiFunction, load_psi

__version__ = "0.1.0"
