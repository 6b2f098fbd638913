import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseinterp.sparse import (
    CyclicPoly,
    PolyFormatError,
    SparsePoly,
    bit_size,
    parse_poly,
    project_direct,
    serialize,
    sigma,
    subtract,
)

F = SparsePoly(2, [((2, 1), 3)])  # 3 x0^2 x1


def test_sigma_small_values():
    assert [sigma(0), sigma(1), sigma(2), sigma(3), sigma(-4)] == [0, 1, 2, 2, 3]


def test_bit_size_examples():
    assert bit_size(SparsePoly.zero(3)) == 0
    assert bit_size(F) == 5


def test_strict_constructor():
    with pytest.raises(ValueError):
        SparsePoly(1, [((1,), 0)])
    with pytest.raises(ValueError):
        SparsePoly(1, [((2,), 1), ((1,), 1)])
    with pytest.raises(ValueError):
        SparsePoly(2, [((1,), 1)])
    with pytest.raises(ValueError):
        SparsePoly(1, [((-1,), 1)])


def test_immutable():
    with pytest.raises(AttributeError):
        F.terms = ()


def test_from_terms_combines_and_drops():
    g = SparsePoly.from_terms(1, [((1,), 2), ((0,), 5), ((1,), -2)])
    assert g == SparsePoly(1, [((0,), 5)])


def test_subtract_examples():
    assert len(subtract(F, F)) == 0
    a = SparsePoly(1, [((1,), 3)])
    b = SparsePoly(1, [((1,), 1)])
    assert a - b == SparsePoly(1, [((1,), 2)])


def test_evaluate():
    assert F.evaluate([2, 3]) == 36
    assert F.evaluate([2, 3], 7) == 1
    assert F.evaluate([-2, 3], 100) == 36


def test_project_direct_examples():
    assert len(project_direct(SparsePoly.zero(2), [1, 2], 5)) == 0
    assert project_direct(F, [1, 2], 5) == CyclicPoly(5, {4: 3})
    g = SparsePoly.from_terms(2, [((1, 0), 2), ((0, 3), 5)])
    # both exponents map to 1 modulo 5 with tau = (1, 2)
    assert project_direct(g, [1, 2], 5) == CyclicPoly(5, {1: 7})
    assert project_direct(g, [1, 2], 5, M=3) == CyclicPoly(5, {1: 1}, 3)


def test_project_direct_rejects_bad_tau():
    with pytest.raises(ValueError):
        project_direct(F, [0, 1], 5)


def test_cyclic_centered():
    c = CyclicPoly(5, {0: 6, 2: 1}, 7)
    assert c.centered() == {0: -1, 2: 1}


def test_parse_example():
    assert parse_poly("nvars 2\n3 : 2 1\n") == F


def test_parse_comments_and_blank_lines():
    assert parse_poly("# header\nnvars 2\n\n3 : 2 1   # term\n") == F


@pytest.mark.parametrize("text", [
    "nvars 2\n0 : 1 0\n",
    "nvars 2\n3 : 1\n",
    "nvars 2\n3 : 1 -1\n",
    "nvars 2\n3 : 1 0\n4 : 1 0\n",
    "nvars 2\nx : 1 0\n",
    "3 : 1 0\n",
    "",
    "nvars 2\n3 1 0\n",
])
def test_parse_rejects(text):
    with pytest.raises(PolyFormatError):
        parse_poly(text)


def test_serialize_nvars_zero():
    c = SparsePoly(0, [((), -4)])
    assert serialize(c) == "nvars 0\n-4 :\n"
    assert parse_poly(serialize(c)) == c


terms = st.dictionaries(
    st.tuples(*[st.integers(min_value=0, max_value=1 << 40)] * 3),
    st.integers(min_value=-(1 << 100), max_value=1 << 100).filter(bool),
    max_size=20,
)


@given(terms)
def test_serialize_round_trip(d):
    f = SparsePoly.from_terms(3, d.items())
    assert parse_poly(serialize(f)) == f


@given(terms, terms)
def test_subtract_matches_evaluation(d1, d2):
    f = SparsePoly.from_terms(3, d1.items())
    g = SparsePoly.from_terms(3, d2.items())
    h = f - g
    assert h + g == f
    rng = random.Random(len(d1) * 31 + len(d2))
    for _ in range(3):
        m = rng.randrange(2, 1 << 64)
        pt = [rng.randrange(m) for _ in range(3)]
        assert h.evaluate(pt, m) == (f.evaluate(pt, m) - g.evaluate(pt, m)) % m


@settings(max_examples=50)
@given(terms, st.integers(min_value=2, max_value=500), st.randoms(use_true_random=False))
def test_project_direct_additive(d, r, rnd):
    f = SparsePoly.from_terms(3, d.items())
    tau = [rnd.randrange(1, r) for _ in range(3)]
    proj = project_direct(f, tau, r)
    # the projection of a sum is the sum of the projections of the terms
    acc = CyclicPoly(r)
    for e, c in f:
        acc = acc + project_direct(SparsePoly(3, [(e, c)]), tau, r)
    assert proj == acc
