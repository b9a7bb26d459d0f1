import json
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from dslab.errors import DomainError, PsiParseError
from dslab.psifun import PsiFunction, evaluate, load_psi, validate_normalization


def test_evaluate_examples():
    assert evaluate(PsiFunction.reciprocal("1/2"), 4) == Q(1, 8)
    assert evaluate(PsiFunction.from_table({5: "1/4"}), 6) == 0
    # 20 lies in block h=1 (16 <= 20 < 65536), which is odd
    even = PsiFunction.constant("1/2").with_filter("even_blocks")
    assert evaluate(even, 20) == 0
    assert evaluate(even, 15) == Q(1, 2)


def test_evaluate_domain():
    with pytest.raises(DomainError):
        evaluate(PsiFunction.constant(1), 0)


def test_log_damped():
    psi = PsiFunction.log_damped(1)
    assert psi(8) == Q(1, 24)
    assert psi(9) == Q(1, 36)
    assert psi(1) == 1  # ceil(log2 1) = 0 is read as 1


def test_range_filter():
    psi = PsiFunction.constant(1).with_filter((5, 7))
    assert [psi(n) for n in range(4, 9)] == [0, 1, 1, 1, 0]


def test_validate_examples():
    assert validate_normalization(PsiFunction.constant("1/2"), 2, 100) == []
    assert validate_normalization(PsiFunction.reciprocal(1), 3, 100) == []
    bad = validate_normalization(PsiFunction.constant("3/4"), 2, 10)
    assert [n for n, _, _ in bad] == list(range(2, 11))
    low = validate_normalization(PsiFunction.reciprocal("1/2"), 2, 4)
    assert [(n, why) for n, _, why in low] == [(2, "below 1/n"), (3, "below 1/n"), (4, "below 1/n")]


def test_load_examples():
    p = load_psi('{"family":"reciprocal","q":"1/2","c":"1"}')
    assert p.family == "reciprocal" and p.q == Q(1, 2) and p.c == 1
    t = load_psi('{"table":{"5":"1/4"},"c":"1"}')
    assert t.kind == "table" and t(5) == Q(1, 4)
    with pytest.raises(PsiParseError, match=r"\$\.q"):
        load_psi('{"family":"constant","q":"-1/2","c":"1"}')


@pytest.mark.parametrize("doc,where", [
    ('{"family":"constant","q":"1.5","c":"1"}', "$.q"),
    ('{"family":"nope","q":"1","c":"1"}', "$.family"),
    ('{"family":"constant","q":"1"}', "$"),
    ('{"table":{"x":"1"},"c":"1"}', "$.table"),
    ('{"table":{"3":"-1"},"c":"1"}', "$.table"),
    ('{"family":"constant","q":"1","c":"0"}', "$.c"),
    ('{"family":"constant","q":"1","c":"1","support":"sideways"}', "$.support"),
    ('{"family":"constant","q":"1/0","c":"1"}', "$.q"),
    ('[1]', "$"),
    ('{"family":', "line 1"),
])
def test_parse_errors_carry_location(doc, where):
    with pytest.raises(PsiParseError) as info:
        load_psi(doc)
    assert where in str(info.value)


def test_support_forms():
    p = load_psi('{"family":"constant","q":"1","c":"1","support":{"min":3,"max":4}}')
    assert [p(n) for n in range(2, 6)] == [0, 1, 1, 0]
    p = load_psi('{"family":"constant","q":"1","c":"1","support":["odd_blocks",{"min":1,"max":30}]}')
    assert p(15) == 0 and p(16) == 1 and p(31) == 0


def test_reciprocal_invariant():
    p = PsiFunction.reciprocal("3/7")
    assert all(n * p(n) == Q(3, 7) for n in range(1, 2000))


psi_docs = st.one_of(
    st.builds(lambda f, a, b: {"family": f, "q": f"{a}/{b}", "c": "2/3"},
              st.sampled_from(["constant", "reciprocal", "log_damped"]),
              st.integers(0, 9), st.integers(1, 9)),
    st.builds(lambda tab: {"table": {str(k): f"{v}/7" for k, v in tab.items()}, "c": "1",
                           "support": "even_blocks"},
              st.dictionaries(st.integers(1, 400), st.integers(0, 20), max_size=10)),
)


@given(psi_docs)
def test_round_trip(doc):
    p = load_psi(json.dumps(doc))
    p2 = load_psi(p.to_json())
    assert all(p(n) == p2(n) for n in range(1, 10**4 + 1, 13))
    assert p2.c == p.c


def test_round_trip_dense():
    p = load_psi('{"family":"log_damped","q":"5/3","c":"1","support":"odd_blocks"}')
    p2 = load_psi(p.to_json())
    assert all(p(n) == p2(n) for n in range(1, 10**4 + 1))


def test_float_values_match_exact():
    for p in (PsiFunction.constant("1/3"), PsiFunction.reciprocal(2), PsiFunction.log_damped(1),
              PsiFunction.from_table({3: "1/5"})):
        assert list(p.float_values(1, 50)) == [float(v) for v in p.values(1, 50)]
