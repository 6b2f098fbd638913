import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseinterp.blackbox import (
    SLP,
    DifferenceBlackbox,
    FunctionBlackbox,
    SLPBlackbox,
    SLPFormatError,
    eval_slp,
    format_slp,
    parse_slp,
    sparse_as_blackbox,
    sparse_to_slp,
)
from sparseinterp.sparse import SparsePoly

SQUARE = "nvars 1\nt0 = mul x0 x0\nout t0\n"
AFFINE = "nvars 2\nc = const -3\nt = mul x0 x1\nu = add t c\nout u\n"


def test_parse_and_eval_examples():
    sq = parse_slp(SQUARE)
    assert eval_slp(sq, [3], 7) == 2
    af = parse_slp(AFFINE)
    assert eval_slp(af, [2, 5], 11) == 7


def test_eval_deterministic_mod_2():
    af = parse_slp(AFFINE)
    assert eval_slp(af, [1, 1], 2) == eval_slp(af, [1, 1], 2)


@pytest.mark.parametrize("text", [
    "nvars 1\nout t9\n",
    "nvars 1\nt = mul x0 x1\nout t\n",
    "nvars 1\nt = pow x0 x0\nout t\n",
    "nvars 1\nt = mul x0\nout t\n",
    "nvars 1\nt = const 1.5\nout t\n",
    "nvars 1\nt = neg x0\nt = neg t\nout t\n",
    "nvars 1\nt = neg x0\n",
    "nvars 1\nt = neg x0\nout t\nu = neg t\n",
    "t = neg x0\nout t\n",
    "nvars 1\nx3 = neg x0\nout x3\n",
])
def test_parse_rejects(text):
    with pytest.raises(SLPFormatError):
        parse_slp(text)


def test_parse_error_names_line():
    with pytest.raises(SLPFormatError, match="line 3"):
        parse_slp("nvars 1\nt = neg x0\nu = mul t q\nout u\n")


def test_slp_constructor_validates_registers():
    with pytest.raises(ValueError):
        SLP(1, (("mul", 0, 5),), 1)


def test_format_round_trip():
    af = parse_slp(AFFINE)
    again = parse_slp(format_slp(af))
    assert again.instructions == af.instructions and again.output == af.output


def test_output_may_be_an_input():
    ident = parse_slp("nvars 2\nout x1\n")
    assert eval_slp(ident, [4, 9], 100) == 9


def test_sparse_blackbox_examples():
    zero = sparse_as_blackbox(SparsePoly.zero(2))
    assert zero.evaluate([5, 6], 97) == 0
    f = sparse_as_blackbox(SparsePoly(2, [((2, 1), 3)]))
    assert f.evaluate([2, 3], 100) == 36


def test_numpy_path_matches_scalar_path():
    rng = random.Random(2)
    f = SparsePoly.from_terms(3, [((rng.randrange(50), rng.randrange(50), rng.randrange(50)),
                                   rng.randrange(-1000, 1000)) for _ in range(10)])
    slp = sparse_to_slp(f)
    bb = SLPBlackbox(slp)
    m = 2147483629
    pts = [[rng.randrange(m) for _ in range(3)] for _ in range(40)]
    assert bb.evaluate_many(pts, m) == [eval_slp(slp, p, m) for p in pts]


def test_stats_count_calls_and_bits():
    bb = SLPBlackbox(parse_slp(SQUARE))
    bb.evaluate([3], 7)
    bb.evaluate_many([[1], [2]], 1 << 40)
    bb.evaluate_geometric([1], [3], 5, 1000)
    assert bb.stats.snapshot() == (1 + 2 + 5, 3 + 2 * 41 + 5 * 10)


def test_geometric_matches_pointwise():
    rng = random.Random(4)
    f = SparsePoly.from_terms(2, [((rng.randrange(1 << 20), rng.randrange(1 << 20)), rng.randrange(1, 1 << 60))
                                  for _ in range(50)])
    bb = sparse_as_blackbox(f)
    m = (1 << 89) - 1
    start, ratio = [3, 5], [7, 11]
    vals = bb.evaluate_geometric(start, ratio, 60, m)
    pts = [[s * pow(r, k, m) % m for s, r in zip(start, ratio)] for k in range(60)]
    assert vals == [f.evaluate(p, m) for p in pts]


def test_difference_blackbox_charges_parent():
    f = SparsePoly(1, [((2,), 1), ((5,), 4)])
    g = SparsePoly(1, [((2,), 1)])
    bb = sparse_as_blackbox(f)
    d = DifferenceBlackbox(bb, g)
    assert d.evaluate([3], 1000) == 4 * 243 % 1000
    assert d.evaluate_geometric([1], [2], 3, 1000) == [4, 128, 4 * 1024 % 1000]
    assert bb.stats.eval_count == 4


def test_function_blackbox_and_jobs():
    bb = FunctionBlackbox(2, lambda p, m: (p[0] * p[1]) % m, jobs=4)
    pts = [[i, i + 1] for i in range(20)]
    assert bb.evaluate_many(pts, 1000) == [i * (i + 1) % 1000 for i in range(20)]


def test_rejects_bad_modulus_and_arity():
    bb = SLPBlackbox(parse_slp(SQUARE))
    with pytest.raises(ValueError):
        bb.evaluate([1], 1)
    with pytest.raises(ValueError):
        bb.evaluate([1, 2], 7)


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 300), st.integers(0, 300)),
    st.integers(min_value=-(1 << 70), max_value=1 << 70).filter(bool),
    max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(poly_terms, st.integers(min_value=2, max_value=1 << 100), st.randoms(use_true_random=False))
def test_sparse_blackbox_agrees_with_slp(d, m, rnd):
    f = SparsePoly.from_terms(2, d.items())
    slp = sparse_to_slp(f)
    bb = sparse_as_blackbox(f)
    for _ in range(3):
        pt = [rnd.randrange(m), rnd.randrange(m)]
        assert eval_slp(slp, pt, m) == bb.evaluate(pt, m) == f.evaluate(pt, m)


@settings(max_examples=40, deadline=None)
@given(poly_terms, st.randoms(use_true_random=False))
def test_slp_format_round_trip_property(d, rnd):
    slp = sparse_to_slp(SparsePoly.from_terms(2, d.items()))
    again = parse_slp(format_slp(slp))
    pt = [rnd.randrange(1000), rnd.randrange(1000)]
    assert eval_slp(again, pt, 10007) == eval_slp(slp, pt, 10007)
