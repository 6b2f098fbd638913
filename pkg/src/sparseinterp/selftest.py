"""Fast oracle-equivalence checks behind ``sparseinterp selftest``.

Each check compares a fast routine with a slow reference on random inputs.
``inject`` names a check whose fast result gets corrupted, which lets the
test suite confirm that a broken routine is reported.
"""

import random

import gmpy2

from .arith import TransposedVandermonde, _solve_tv_quadratic, forward_dft, inverse_dft
from .codes import encode, hierarchical_decode, make_level_schedule
from .divisors import divisors, divisors_naive
from .primes import generate_prime_triple

__all__ = ["CHECKS", "run_checks"]


def _corrupt(xs):
    xs = list(xs)
    if xs:
        xs[0] = xs[0] + 1 if not isinstance(xs[0], tuple) else (xs[0][0], xs[0][1] + 1)
    else:
        xs.append((0, 0))
    return xs


def check_divisors(rng, fault):
    primes = []
    while len(primes) < 40:
        p = int(gmpy2.next_prime(rng.randrange(1 << 20, 1 << 21)))
        if p not in primes:
            primes.append(p)
    for big in (False, True):
        ps = [int(gmpy2.next_prime(p << 40)) for p in primes] if big else primes
        values = []
        for _ in range(300):
            v = rng.randrange(1, 1 << 64)
            if rng.random() < 0.5:
                v *= rng.choice(ps)
            values.append(v)
        got = sorted(divisors(ps, values))
        if fault:
            got = _corrupt(got)
        if got != sorted(divisors_naive(ps, values)):
            return False
    return True


def check_dft(rng, fault):
    for R in (40, 200):
        t = generate_prime_triple(R, rng=rng)
        x = [rng.randrange(t.q) for _ in range(t.r)]
        vals = forward_dft(x, t.omega, t.q)
        back = inverse_dft(vals, t.omega, t.q)
        if fault:
            back = _corrupt(back)
        if back != x:
            return False
    return True


def check_vandermonde(rng, fault):
    M = int(gmpy2.next_prime(1 << 61)) ** 2
    for size in (5, 80):
        xs = set()
        while len(xs) < size:
            xs.add(rng.randrange(2, M))
        xs = sorted(xs)
        vals = [rng.randrange(M) for _ in range(size)]
        fast = TransposedVandermonde(xs, M, method="fast").solve(vals)
        if fault:
            fast = _corrupt(fast)
        if fast != _solve_tv_quadratic(xs, vals, M):
            return False
    return True


def check_codes(rng, fault):
    n, Sigma, gamma = 12, 40, 4
    B = int(gmpy2.next_prime(1 << 40)) ** 2
    P = 1 << 18
    sched = make_level_schedule(Sigma, n, gamma, P, B, rng, precision="provable", eps=0.01)
    targets = []
    for _ in range(20):
        e = [0] * n
        for i in rng.sample(range(n), 3):
            e[i] = rng.randrange(1 << 8)
        targets.append(e)
    batches = [[encode(e, lv) for e in targets] for lv in sched.levels]
    got = hierarchical_decode(batches, sched)
    if fault:
        got = [[x + 1 for x in got[0]]] + got[1:]
    return got == targets


CHECKS = {
    "divisors": check_divisors,
    "dft-roundtrip": check_dft,
    "vandermonde": check_vandermonde,
    "codes": check_codes,
}


def run_checks(seed=0, inject=None, log=None):
    """Run every check; return the names of the ones that failed."""
    if inject is not None and inject not in CHECKS:
        raise ValueError(f"unknown check {inject!r}")
    failed = []
    for name, fn in CHECKS.items():
        try:
            ok = fn(random.Random(f"{seed}:{name}"), inject == name)
        except Exception as exc:  # a crash counts as a failure
            ok = False
            if log is not None:
                log.write(f"{name}: {type(exc).__name__}: {exc}\n")
        if log is not None:
            log.write(f"{name} {'ok' if ok else 'FAIL'}\n")
        if not ok:
            failed.append(name)
    return failed
