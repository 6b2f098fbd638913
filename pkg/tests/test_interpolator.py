import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_target, target_size_bound
from sparseinterp.blackbox import DifferenceBlackbox, sparse_as_blackbox
from sparseinterp.codes import check_code_inequality
from sparseinterp.interpolator import (
    RoundReport,
    coefficient_precision,
    derive_params,
    interpolate,
    sample_run_randomness,
    t_approximation,
    verify,
)
from sparseinterp.sparse import SparsePoly, sigma

EXAMPLE = SparsePoly.from_terms(2, [((2, 1), 3), ((0, 5), -7)])


@pytest.fixture(scope="module")
def provable():
    return derive_params(256, 1 << 16, 8, "provable", random.Random(0))


def test_provable_hand_values(provable):
    p = provable
    assert sigma(1 << 16) == 17
    assert p.beta == 64 * 17 ** 2 == 18496
    assert p.Sigma == 18496 * 65536 // 256 == 4734976
    assert p.R == (1 << 58) * 18496 ** 2
    assert p.gamma == math.ceil(6 * math.e * math.log(1 << 16))


def test_provable_size_inequalities(provable):
    p = provable
    low = (1 << 52) * p.n ** 4 * p.S ** 6
    assert low <= p.B < low * p.q
    assert p.B == p.q ** p.mu and p.B % 2 == 1
    assert p.P == math.isqrt(p.B) // 2
    assert check_code_inequality(p.n, p.B, p.P)
    p.triple.check("provable")


def test_provable_schedule_digits(provable):
    s = provable.schedule
    U = s.U
    assert U == math.ceil(math.log2(min(provable.Sigma, 8))) + 2
    assert [c.nu for c in s.levels] == [math.ceil(5 * provable.Sigma / 2 ** (U - u)) for u in range(1, U + 1)]


def test_provable_needs_large_size_bound():
    with pytest.raises(ValueError):
        derive_params(4, 1000, 2, "provable")


def test_provable_interpolation_is_refused():
    with pytest.raises(ValueError):
        interpolate(sparse_as_blackbox(EXAMPLE), 2, 4, 1 << 16, mode="provable")


@pytest.mark.parametrize("T,S,n", [(1, 16, 1), (4, 400, 2), (32, 6000, 8), (256, 50000, 32), (3, 3, 3)])
def test_practical_params_invariants(T, S, n):
    p = derive_params(T, S, n, rng=random.Random(T))
    assert p.B == p.q ** p.mu and p.B % 2 == 1 and (2 * p.P) ** 2 < p.B
    assert check_code_inequality(n, p.B, p.P)
    assert p.B >= 1 << 20
    assert p.Sigma == min(4 * S // T, S)
    assert p.r > p.R >= 64
    p.triple.check()


def test_bounds_are_validated():
    with pytest.raises(ValueError):
        derive_params(5, 4, 1)
    with pytest.raises(ValueError):
        derive_params(1, 2, 3)
    with pytest.raises(ValueError):
        derive_params(1, 10, 1, mode="fast")


def test_run_randomness_deterministic_and_in_range():
    p = derive_params(8, 800, 5, rng=random.Random(1), with_schedule=False)
    a = sample_run_randomness(p, random.Random(7))
    b = sample_run_randomness(p, random.Random(7))
    assert a[0] == b[0] and a[1] == b[1]
    tau, sched = a
    assert all(1 <= t < p.r for t in tau)
    for lv in sched.levels:
        assert len(set(lv.primes)) == len(lv.primes) == 5
        assert all(p.P < x < 2 * p.P for x in lv.primes)


def test_coefficient_precision():
    assert coefficient_precision(607, 8) == 1
    assert coefficient_precision(607, 9) == 2
    for q, s in [(607, 100), (1000003, 61)]:
        v = coefficient_precision(q, s)
        assert q ** v >= 1 << (s + 1) > q ** (v - 1)


def test_t_approximation_zero_residual():
    bb = sparse_as_blackbox(EXAMPLE)
    report = []
    delta = t_approximation(bb, EXAMPLE, 4, 64, 2, random.Random(0), report=report)
    assert len(delta) == 0
    assert report[0].projected_terms == 0


def test_t_approximation_single_term():
    f = SparsePoly(3, [((5, 0, 123456), -987654321)])
    wins = 0
    for seed in range(5):
        wins += t_approximation(sparse_as_blackbox(f), SparsePoly.zero(3), 1, 64, 3, random.Random(seed)) == f
    assert wins >= 4


def test_t_approximation_halves_the_residual():
    rng = random.Random(3)
    n, T = 4, 16
    ok = 0
    for seed in range(10):
        f = random_target(n, T, rng)
        S = target_size_bound(n, T)
        delta = t_approximation(sparse_as_blackbox(f), SparsePoly.zero(n), T, S, n, random.Random(seed))
        ok += len(f - delta) <= T // 2
    assert ok >= 8


def test_t_approximation_on_difference_blackbox():
    rng = random.Random(8)
    f = random_target(3, 10, rng)
    half = SparsePoly(3, f.terms[:5])
    delta = t_approximation(sparse_as_blackbox(f), half, 5, target_size_bound(3, 10), 3, random.Random(2))
    assert half + delta == f


def test_interpolate_zero():
    assert interpolate(sparse_as_blackbox(SparsePoly.zero(3)), 3, 5, 100) == SparsePoly.zero(3)


def test_interpolate_example_majority():
    wins = sum(interpolate(sparse_as_blackbox(EXAMPLE), 2, 4, 64, random.Random(s)) == EXAMPLE for s in range(9))
    assert wins >= 5


def test_interpolate_term_bound_and_report():
    rng = random.Random(4)
    f = random_target(4, 12, rng)
    report = []
    g = interpolate(sparse_as_blackbox(f), 4, 6, target_size_bound(4, 12), random.Random(1), report=report)
    assert len(g) <= 6
    assert len(report) == math.ceil(math.log2(6)) + 1
    assert all(isinstance(r, RoundReport) for r in report)


def test_interpolate_arity_mismatch():
    with pytest.raises(ValueError):
        interpolate(sparse_as_blackbox(EXAMPLE), 3, 4, 64)


def test_verify():
    bb = sparse_as_blackbox(EXAMPLE)
    assert verify(EXAMPLE, bb, 10, random.Random(0))
    wrong = EXAMPLE + SparsePoly(2, [((1, 1), 1)])
    assert not verify(wrong, bb, 10, random.Random(0))
    with pytest.raises(ValueError):
        verify(EXAMPLE, bb, 0)
    with pytest.raises(ValueError):
        verify(SparsePoly.zero(1), bb, 3)


def test_difference_blackbox_accounting_through_rounds():
    rng = random.Random(6)
    f = random_target(2, 4, rng)
    bb = sparse_as_blackbox(f)
    interpolate(bb, 2, 4, target_size_bound(2, 4), random.Random(0))
    # all evaluations of the residual blackboxes are charged to the original
    assert bb.stats.eval_count > 0
    d = DifferenceBlackbox(bb, f)
    before = bb.stats.eval_count
    d.evaluate([1, 2], 101)
    assert bb.stats.eval_count == before + 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1 << 30), st.integers(1, 6), st.integers(1, 3))
def test_interpolate_result_respects_bounds(seed, T, n):
    rng = random.Random(seed)
    f = random_target(n, T, rng, max_exp=1 << 10, coeff_bits=30)
    S = target_size_bound(n, T)
    g = interpolate(sparse_as_blackbox(f), n, T, S, rng)
    assert len(g) <= T
    if g == f:
        assert verify(g, sparse_as_blackbox(f), 3, rng)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1 << 30), st.integers(1, 200))
def test_verify_detects_single_term_difference(seed, k):
    rng = random.Random(seed)
    f = random_target(2, 3, rng, max_exp=1 << 8)
    g = f + SparsePoly(2, [((k, 0), rng.choice([-1, 1]) * rng.randrange(1, 1 << 40))])
    assert not verify(g, sparse_as_blackbox(f), 4, rng)
