from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from dslab.circleset import CircleIntervalUnion as CIU, intersection_measure, union_all
from dslab.errors import DomainError

E2 = CIU.from_intervals([(Q(1, 4), Q(3, 4))])
E3 = CIU.from_intervals([(Q(1, 6), Q(1, 2)), (Q(1, 2), Q(5, 6))])


def test_from_arcs_examples():
    assert CIU.from_arcs([]).measure() == 0
    s = CIU.from_arcs([(Q(1, 2), Q(1, 4))])
    assert s.intervals == [(Q(1, 4), Q(3, 4))] and s.measure() == Q(1, 2)
    w = CIU.from_arcs([(0, Q(1, 4))])
    assert w.intervals == [(0, Q(1, 4)), (Q(3, 4), 1)]
    assert w.measure() == Q(1, 2)


def test_radius_zero_vanishes_and_negative_rejected():
    assert not CIU.from_arcs([(Q(1, 3), 0)])
    with pytest.raises(DomainError):
        CIU.from_arcs([(0, Q(-1, 5))])


def test_big_radius():
    assert CIU.from_arcs([(Q(1, 3), Q(2, 3))]) == CIU.full()
    half = CIU.from_arcs([(Q(1, 3), Q(1, 2))])  # misses only 5/6
    assert half.measure() == 1
    assert not half.contains(Q(5, 6))
    assert half.contains(Q(1, 3))


def test_measure_examples():
    assert CIU.empty().measure() == 0
    assert E2.measure() == Q(1, 2)
    assert E3.measure() == Q(2, 3)


def test_intersect_examples():
    i = E2.intersect(E3)
    assert i.intervals == [(Q(1, 4), Q(1, 2)), (Q(1, 2), Q(3, 4))]
    assert i.measure() == Q(1, 2)
    assert E2 & CIU.empty() == CIU.empty()
    assert E3 & E3 == E3


def test_union_examples():
    u = E2 | E3
    assert u.intervals == [(Q(1, 6), Q(5, 6))]
    assert u.measure() == Q(2, 3)
    assert E2 | CIU.empty() == E2
    touching = CIU.from_intervals([(0, Q(1, 2))]) | CIU.from_intervals([(Q(1, 2), 1)])
    assert touching.intervals == [(0, Q(1, 2)), (Q(1, 2), 1)]
    assert touching.measure() == 1


def test_contains_examples():
    assert E2.contains(Q(1, 2))
    assert not E2.contains(Q(1, 4))
    assert not CIU.from_arcs([(0, Q(1, 4))]).contains(0)
    with pytest.raises(DomainError):
        E2.contains(Q(3, 2))


def test_json_round_trip():
    s = CIU.from_arcs([(0, Q(1, 4)), (Q(1, 2), Q(1, 10))])
    assert s.to_json_obj() == [["0", "1/4"], ["2/5", "3/5"], ["3/4", "1"]]
    assert CIU.from_json(s.to_json()) == s


# -- randomized properties -------------------------------------------------

fractions = st.builds(Q, st.integers(0, 60), st.integers(1, 30))
radii = st.builds(Q, st.integers(0, 20), st.integers(1, 40))
arc_lists = st.lists(st.tuples(fractions, radii), max_size=8)
sets = arc_lists.map(CIU.from_arcs)


def raw_contains(arcs, x):
    """Membership straight from the defining arcs (independent of the canonical form)."""
    for c, r in arcs:
        if r == 0:
            continue
        d = (x - c) % 1
        if min(d, 1 - d) < r or 2 * r > 1:
            return True
    return False


@given(arc_lists, st.builds(Q, st.integers(1, 999), st.just(1000)))
def test_contains_matches_raw_arcs(arcs, x):
    s = CIU.from_arcs(arcs)
    if x == 0:
        return
    assert s.contains(x) == raw_contains(arcs, x)


@given(sets)
def test_complement_measure(a):
    assert a.measure() + a.complement().measure() == 1
    assert 0 <= a.measure() <= 1


@given(sets, sets)
def test_inclusion_exclusion(a, b):
    assert (a & b).measure() + (a | b).measure() == a.measure() + b.measure()
    assert intersection_measure(a, b) == (a & b).measure()


@given(sets)
def test_canonical_idempotent(a):
    assert CIU.from_arcs(a.arcs_of()) == a
    assert CIU.from_intervals(a.intervals) == a


@settings(max_examples=60)
@given(sets, sets, sets)
def test_commutative_associative(a, b, c):
    assert a & b == b & a
    assert a | b == b | a
    assert (a & b) & c == a & (b & c)
    assert (a | b) | c == a | (b | c)
    assert union_all([a, b, c]) == a | b | c


@given(sets)
def test_canonical_form_invariants(a):
    prev_r = None
    for l, r in a.intervals:
        assert 0 <= l < r <= 1
        if prev_r is not None:
            assert l >= prev_r
        prev_r = r
