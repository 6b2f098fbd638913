"""Practical decoders: the greedy peeling decoder, fiber supports, the gamma
phase experiment and the prime-power (Ben-Or/Tiwari style) exponent encoding.
"""

import heapq
import io
import math
from dataclasses import dataclass

import gmpy2

from ._validation import check_int, check_random_state, spawn
from .divisors import divisors

__all__ = [
    "SimpleCodeParams",
    "make_simple_params",
    "simple_encode",
    "mystery_decode",
    "zeta_supports",
    "phase_experiment",
    "phase_crossing",
    "format_phase_csv",
    "bt_encode",
    "bt_decode_bulk",
    "DecodeStats",
]


@dataclass(frozen=True)
class SimpleCodeParams:
    """Unreduced code over the naturals: ``phi_k(e) = sum_{i in I_k} p_i e_i``."""

    n: int
    V: int
    m: int
    lam: int
    P: int
    primes: tuple
    supports: tuple

    def memberships(self):
        """``var -> list of support indices containing it``."""
        out = [[] for _ in range(self.n)]
        for k, I in enumerate(self.supports):
            for i in I:
                out[i].append(k)
        return out


def zeta_supports(n, gamma, rng=None):
    """Fibers of three random maps ``N_n -> N_chi`` with ``chi = ceil(gamma n / 3)``.

    Support ``j chi + k`` is the fiber of ``k`` under map ``j``; every index
    lies in exactly three supports, one per map.
    """
    n = check_int(n, "n", 1)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    rng = check_random_state(rng)
    chi = math.ceil(gamma * n / 3)
    supports = [[] for _ in range(3 * chi)]
    for j in range(3):
        for i in range(n):
            supports[j * chi + rng.randrange(chi)].append(i)
    return tuple(tuple(I) for I in supports)


def _primes_between(lo, hi):
    out = []
    p = int(gmpy2.next_prime(lo))
    while p < hi:
        out.append(p)
        p = int(gmpy2.next_prime(p))
    return out


def make_simple_params(n, V=None, gamma=2.0, eta=2.0, rng=None, supports="random"):
    """Distinct random primes of ``(P, 2P)`` with ``P = ceil(eta n log n)`` plus supports.

    ``supports="random"`` draws ``lam = ceil(gamma V)`` supports of
    ``m = ceil(n / V)`` uniform indices; ``"zeta"`` uses :func:`zeta_supports`.
    """
    n = check_int(n, "n", 1)
    V = n if V is None else check_int(V, "V", 1)
    rng = check_random_state(rng)
    m = math.ceil(n / V)
    P = max(22, math.ceil(eta * n * math.log(max(n, 2))))
    pool = _primes_between(P, 2 * P)
    while len(pool) < n:
        # tiny n: (P, 2P) may hold fewer than n primes
        P *= 2
        pool = _primes_between(P, 2 * P)
    primes = tuple(rng.sample(pool, n))
    if supports == "random":
        lam = math.ceil(gamma * V)
        sup = tuple(tuple(sorted({rng.randrange(n) for _ in range(m)})) for _ in range(lam))
    elif supports == "zeta":
        sup = zeta_supports(n, gamma, rng)
        lam = len(sup)
    else:
        raise ValueError(f"unknown support model {supports!r}")
    return SimpleCodeParams(n=n, V=V, m=m, lam=lam, P=P, primes=primes, supports=sup)


def simple_encode(e, params):
    p = params.primes
    return [sum(p[i] * e[i] for i in I) for I in params.supports]


@dataclass
class DecodeStats:
    steps: int = 0
    updates: int = 0


def _candidates(value, prime_index, P):
    """Indices ``i`` with ``p_i | value`` (value > 0)."""
    top = value // (P + 1)
    if top > len(prime_index):
        return sorted(i for p, i in prime_index.items() if value % p == 0)
    out = []
    # every p_i exceeds P, so the cofactor is at most value / (P + 1)
    for c in range(1, top + 1):
        if value % c == 0:
            i = prime_index.get(value // c)
            if i is not None:
                out.append(i)
    return out


def mystery_decode(psi, params, stats=None):
    """Greedy peeling decoder; returns ``e`` with ``simple_encode(e) == psi`` or ``None``.

    Repeatedly picks the least pair ``(k, i)`` outside the blocked set with
    ``p_i | psi_k != 0``, guesses ``e_i += psi_k / p_i`` and keeps the guess
    only if it leaves every entry non-negative and strictly lowers the
    number of non-zero entries.  Rejected pairs are blocked until the next
    accepted update.
    """
    if len(psi) != params.lam:
        raise ValueError("code has the wrong length")
    psi = [int(x) for x in psi]
    if any(x < 0 for x in psi):
        return None
    n, lam, primes, P = params.n, params.lam, params.primes, params.P
    members = params.memberships()
    prime_index = {p: i for i, p in enumerate(primes)}
    e = [0] * n
    heap = []
    for k, v in enumerate(psi):
        if v:
            for i in _candidates(v, prime_index, P):
                heap.append((k, i))
    heapq.heapify(heap)
    blocked = set()
    nonzero = sum(1 for v in psi if v)
    steps = 0
    limit = lam * (n * lam + 1)
    while heap:
        k, i = heapq.heappop(heap)
        v = psi[k]
        if (k, i) in blocked or v == 0 or v % primes[i]:
            continue
        steps += 1
        if steps > limit:
            raise AssertionError("step bound exceeded")
        q = v // primes[i]
        d = q * primes[i]
        ks = members[i]
        if any(psi[j] < d for j in ks):
            reject = True
        else:
            after = nonzero + sum((psi[j] - d != 0) - (psi[j] != 0) for j in ks)
            reject = after >= nonzero
        if reject:
            blocked.add((k, i))
            continue
        e[i] += q
        for j in ks:
            psi[j] -= d
            if psi[j]:
                for c in _candidates(psi[j], prime_index, P):
                    heapq.heappush(heap, (j, c))
        nonzero = after
        for pair in blocked:
            heapq.heappush(heap, pair)
        blocked = set()
        if stats is not None:
            stats.updates += 1
    if stats is not None:
        stats.steps = steps
    return e if not any(psi) else None


def phase_experiment(n, gammas, trials, rng=None, density=1.0, eta=2.0):
    """Exact-recovery rate of :func:`mystery_decode` on fiber supports, per gamma.

    Each trial draws fresh primes and supports; every variable is occupied
    (``e_i = 1``) independently with probability ``density``.
    Returns ``(gamma, success_rate, trials, n)`` rows.
    """
    n = check_int(n, "n", 1)
    trials = check_int(trials, "trials", 1)
    rng = check_random_state(rng)
    rows = []
    for g in gammas:
        wins = 0
        for _ in range(trials):
            sub = spawn(rng)
            params = make_simple_params(n, gamma=g, eta=eta, rng=sub, supports="zeta")
            e = [1 if sub.random() < density else 0 for _ in range(n)]
            if mystery_decode(simple_encode(e, params), params) == e:
                wins += 1
        rows.append((float(g), wins / trials, trials, n))
    return rows


def phase_crossing(rows, level=0.5):
    """Linear interpolation of the first gamma where the rate reaches ``level``."""
    rows = sorted(rows)
    for (g0, r0, *_), (g1, r1, *_) in zip(rows, rows[1:]):
        if r0 < level <= r1:
            return g0 + (level - r0) * (g1 - g0) / (r1 - r0)
    if rows and rows[0][1] >= level:
        return rows[0][0]
    return None


def format_phase_csv(rows):
    buf = io.StringIO()
    buf.write("gamma,success_rate,trials,n\n")
    for g, rate, t, n in rows:
        buf.write(f"{g:.4f},{rate:.4f},{t},{n}\n")
    return buf.getvalue()


def bt_encode(e, primes):
    """``prod p_i ** e_i``."""
    if len(e) != len(primes):
        raise ValueError("need one prime per exponent")
    out = gmpy2.mpz(1)
    for p, k in zip(primes, e):
        if k < 0:
            raise ValueError("exponents must be non-negative")
        if k:
            out *= gmpy2.mpz(p) ** k
    return int(out)


def bt_decode_bulk(values, primes):
    """Multiplicities of each prime in each value; ``None`` rows had a foreign factor."""
    n = len(primes)
    hits = [[] for _ in values]
    for i, k in divisors(primes, values):
        hits[k].append(i)
    out = []
    for v, idx in zip(values, hits):
        v = gmpy2.mpz(v)
        row = [0] * n
        for i in idx:
            p = primes[i]
            cnt = 0
            while v % p == 0:
                v //= p
                cnt += 1
            row[i] = cnt
        out.append(row if v == 1 else None)
    return out
