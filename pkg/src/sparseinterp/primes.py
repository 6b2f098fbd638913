"""Random primes, prime triples ``(r, q, omega)`` and the prime-divisor bound."""

import math
from dataclasses import dataclass

import gmpy2

from ._validation import check_int, check_probability, check_random_state

MR_ROUNDS = 40


class PrimeGenerationError(RuntimeError):
    """A randomized prime search ran out of draws."""


@dataclass(frozen=True)
class PrimeTriple:
    r: int
    q: int
    omega: int
    R: int

    def check(self, mode="provable"):
        """Raise ``AssertionError`` unless every structural invariant holds."""
        r, q, w, R = self.r, self.q, self.omega, self.R
        assert is_probable_prime(r) and R < r < 2 * R
        assert is_probable_prime(q) and q % r == 1 and q > 2 * R
        if mode == "provable":
            assert q < R ** 6
        assert w != 1 and pow(w, r, q) == 1


def is_probable_prime(N, rounds=MR_ROUNDS):
    """Miller-Rabin with ``rounds`` random bases (error at most ``4**-rounds``)."""
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    if N < 2:
        return False
    return bool(gmpy2.is_prime(N, rounds))


def draw_budget(n, P, eps):
    """Per-slot number of uniform draws in ``(P, 2P)``."""
    return math.ceil(20 / 7 * (math.log(2 * n) + math.log(1 / eps)) * math.log(P))


def random_distinct_primes(n, P, eps, rng=None, check=True):
    """``n`` distinct random primes of ``(P, 2P)``.

    Each slot gets :func:`draw_budget` uniform draws; a draw is kept when it
    is prime and new.  With ``check=False`` the density precondition
    ``P / log P > 4n`` is not enforced (used by the heuristic decoders, whose
    primes are deliberately small).
    """
    n = check_int(n, "n", 0)
    P = check_int(P, "P", 1)
    eps = check_probability(eps)
    rng = check_random_state(rng)
    if check:
        if P < 22:
            raise ValueError("P must be at least 22")
        if P / math.log(P) <= 4 * n:
            raise ValueError("P / log P must exceed 4n")
    k = draw_budget(max(n, 1), max(P, 3), eps)
    chosen = []
    seen = set()
    for _ in range(n):
        for _ in range(k):
            c = rng.randrange(P + 1, 2 * P)
            if c not in seen and is_probable_prime(c):
                seen.add(c)
                chosen.append(c)
                break
        else:
            raise PrimeGenerationError(f"no new prime found in ({P}, {2 * P}) after {k} draws")
    return chosen


def _budget(R):
    return 64 * max(1, math.ceil(math.log(R)))


def generate_prime_triple(R, eps=0.5, rng=None, mode="practical"):
    """Random ``r`` prime in ``(R, 2R)``, ``q = kr + 1`` prime and ``omega`` of order ``r``.

    In practical mode ``q`` is first searched in ``(2R, 64 R log(R)^2)`` and
    the window is widened by factors of ``R`` up to ``R^6``; provable mode
    searches ``(2R, R^6)`` directly.
    """
    R = check_int(R, "R", 4)
    check_probability(eps)
    rng = check_random_state(rng)
    budget = _budget(R)

    for _ in range(budget):
        r = rng.randrange(R + 1, 2 * R)
        if is_probable_prime(r):
            break
    else:
        raise PrimeGenerationError(f"no prime found in ({R}, {2 * R})")

    top = R ** 6
    if mode == "provable":
        windows = [top]
    else:
        hi = min(top, 64 * R * math.ceil(math.log(R)) ** 2)
        windows = [hi]
        while hi < top:
            hi = min(top, hi * R)
            windows.append(hi)
    q = None
    kmin = 2 * R // r + 1
    for hi in windows:
        kmax = (hi - 2) // r
        if kmax < kmin:
            continue
        for _ in range(budget):
            c = rng.randint(kmin, kmax) * r + 1
            if is_probable_prime(c):
                q = c
                break
        if q is not None:
            break
    if q is None:
        raise PrimeGenerationError(f"no prime q = 1 mod {r} found below {top}")

    e = (q - 1) // r
    for _ in range(budget):
        w = int(gmpy2.powmod(rng.randrange(2, q), e, q))
        if w != 1:
            return PrimeTriple(r=r, q=q, omega=w, R=R)
    raise PrimeGenerationError("no primitive root of unity found")


def rho_bound(N):
    """Upper bound on the number of distinct prime divisors of ``N``."""
    if N < 1:
        raise ValueError("N must be positive")
    if N >= math.exp(math.e):
        x = math.log(N)
        return 1.538 * x / math.log(x)
    return 1.538 * math.e
