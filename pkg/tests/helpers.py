"""Shared builders for the test suites."""

from sparseinterp.sparse import SparsePoly


def random_target(n, T, rng, max_exp=1 << 20, coeff_bits=63, width=6):
    """``T`` random terms; each exponent vector has at most ``min(n, width)`` non-zero entries."""
    terms = {}
    while len(terms) < T:
        e = [0] * n
        for i in rng.sample(range(n), min(n, width)):
            if rng.random() < 0.8:
                e[i] = rng.randrange(max_exp + 1)
        c = rng.randrange(-(1 << coeff_bits), 1 << coeff_bits)
        if c:
            terms[tuple(e)] = c
    return SparsePoly.from_terms(n, terms.items())


def target_size_bound(n, T):
    """Size bound for :func:`random_target` with the default ranges."""
    return T * (64 + min(n, 6) * 21)


def random_exponent(n, Sigma, rng, signed=False):
    """Random vector with total bit-size at most ``Sigma`` and a random number of non-zero entries."""
    k = rng.randint(1, n)
    idx = rng.sample(range(n), k)
    cuts = sorted(rng.random() for _ in range(k))
    widths = [b - a for a, b in zip([0] + cuts, cuts + [1])][:k]
    e = [0] * n
    for i, frac in zip(idx, widths):
        b = int(frac * Sigma)
        if b > 0:
            e[i] = rng.randrange(1 << (b - 1), 1 << b)
            if signed and rng.random() < 0.5:
                e[i] = -e[i]
    return e


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(number, passed, detail):
    ACCEPTANCE[number] = (bool(passed), detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})")
