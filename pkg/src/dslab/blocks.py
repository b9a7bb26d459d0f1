"""Tower blocks b^(g^h) <= n < b^(g^(h+1)); exact integer arithmetic only."""

from .errors import DomainError

TOWER_BASE = 2
GROWTH_BASE = 4


def block_start(h, tower_base=TOWER_BASE, growth_base=GROWTH_BASE):
    return tower_base ** (growth_base**h)


def block_bounds(h, tower_base=TOWER_BASE, growth_base=GROWTH_BASE):
    """Half-open integer range [X, X**growth_base) of block h."""
    if h < 0:
        raise DomainError(f"block index must be >= 0, got {h}")
    X = block_start(h, tower_base, growth_base)
    return X, X**growth_base


def block_index(n, tower_base=TOWER_BASE, growth_base=GROWTH_BASE):
    """The h with n inside block h, or None when n sits below block 0."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n < tower_base:
        return None
    h = 0
    hi = tower_base ** growth_base
    while n >= hi:
        h += 1
        hi = hi**growth_base
    return h
