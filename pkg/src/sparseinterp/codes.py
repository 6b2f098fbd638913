"""Randomized compressed exponent codes and their decoders.

An exponent vector ``e`` is encoded as ``phi_k(e) = sum_{i in I_k} p_i e_i``
reduced into the centered range modulo ``B**nu``, for ``lam`` random
supports ``I_k`` and random primes ``p_i`` of ``(P, 2P)``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from gmpy2 import mpz

from ._validation import check_int, check_random_state
from .arith import centered
from .divisors import divisors
from .primes import random_distinct_primes
from .sparse import sigma

__all__ = [
    "BOTTOM",
    "CodeParams",
    "LevelSchedule",
    "sample_code_params",
    "encode",
    "recover_k_indices",
    "bulk_decode_level",
    "make_level_schedule",
    "hierarchical_decode",
    "check_code_inequality",
    "practical_level_digits",
]

# marks "no admissible index"; never a valid support index
BOTTOM = None


def check_code_inequality(n, B, P):
    """``2n log B < P`` and ``(2P)^2 < B`` with ``B`` odd."""
    return B % 2 == 1 and 2 * n * math.log(B) < P and (2 * P) ** 2 < B


@dataclass(frozen=True)
class CodeParams:
    n: int
    B: int
    nu: int
    P: int
    gamma: float
    m: int
    supports: tuple
    primes: tuple

    @cached_property
    def BN(self):
        # lazy: at provable sizes only the digit count nu is ever needed
        return mpz(self.B) ** self.nu

    @property
    def lam(self):
        return len(self.supports)


def sample_code_params(n, m, nu, gamma, P, B, rng=None, eps=0.25, strict=True):
    """Random supports and primes for one code.

    ``strict`` enforces the size inequality between ``n``, ``B`` and ``P``;
    tests building tiny hand-sized codes can switch it off.
    """
    n = check_int(n, "n", 1)
    m = check_int(m, "m", 1)
    nu = check_int(nu, "nu", 1)
    if m > n:
        raise ValueError("m must not exceed n")
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    if B % 2 == 0:
        raise ValueError("B must be odd")
    if strict and not check_code_inequality(n, B, P):
        raise ValueError("parameters violate 2n log B < P and (2P)^2 < B")
    rng = check_random_state(rng)
    lam = math.ceil(gamma * n / m)
    supports = tuple(
        tuple(sorted({rng.randrange(n) for _ in range(m)})) for _ in range(lam)
    )
    primes = tuple(random_distinct_primes(n, P, eps, rng, check=strict))
    return CodeParams(n=n, B=int(B), nu=nu, P=int(P), gamma=float(gamma), m=m,
                      supports=supports, primes=primes)


def encode(e, params):
    """Code vector of ``e``: one centered residue modulo ``B**nu`` per support."""
    if len(e) != params.n:
        raise ValueError("exponent vector has the wrong length")
    p = params.primes
    BN = params.BN
    return [centered(sum(p[i] * e[i] for i in I), BN) for I in params.supports]


def recover_k_indices(codes, params):
    """For every code ``psi`` and variable ``i`` the first admissible support index.

    ``k`` is admissible for ``i`` when ``p_i`` divides ``psi_k != 0`` and
    ``4 P |psi_k| / p_i < B**nu``.  Missing indices are :data:`BOTTOM`.
    All divisibility tests go through one bulk :func:`divisors` call.
    """
    lam, n = params.lam, params.n
    flat, where = [], []
    for j, psi in enumerate(codes):
        if len(psi) != lam:
            raise ValueError("code has the wrong length")
        for k, v in enumerate(psi):
            if v:
                flat.append(abs(int(v)))
                where.append((j, k))
    out = [[BOTTOM] * n for _ in codes]
    if not flat:
        return out
    BN, P, primes = params.BN, params.P, params.primes
    best = {}
    for i, idx in divisors(primes, flat):
        if 4 * P * flat[idx] < BN * primes[i]:
            j, k = where[idx]
            cur = best.get((j, i))
            if cur is None or k < cur:
                best[(j, i)] = k
    for (j, i), k in best.items():
        out[j][i] = k
    return out


def bulk_decode_level(codes, params):
    """Guesses ``e~`` with ``e~_i = psi_{k_i} / p_i`` (or 0 when no index qualifies)."""
    ks = recover_k_indices(codes, params)
    primes = params.primes
    out = []
    for psi, kvec in zip(codes, ks):
        row = [0] * params.n
        for i, k in enumerate(kvec):
            if k is not BOTTOM:
                # divisibility was checked on |psi_k|, so this is exact
                row[i] = int(psi[k]) // primes[i]
        out.append(row)
    return out


@dataclass(frozen=True)
class LevelSchedule:
    Sigma: int
    n: int
    gamma: float
    U: int
    levels: tuple

    def table(self):
        """``(u, nu, m, lam)`` rows, levels numbered from 1."""
        return [(u + 1, c.nu, c.m, c.lam) for u, c in enumerate(self.levels)]


def _level_count(Sigma, n):
    return math.ceil(math.log2(min(Sigma, n))) + 2


def practical_level_digits(Sigma, n, P, B):
    """Per-level precisions (in base-``B`` digits) for the practical schedule.

    Level ``u < U`` gets ``2 Sigma / 2^(U-u) + log2(6P) + 1`` bits, so a
    vector of size at most ``Sigma`` has at most ``2^(U-u)`` entries left
    for the next level, which is what its supports can isolate.  The top
    level covers a full ``Sigma``-bit entry.  Precisions strictly increase.
    """
    U = _level_count(Sigma, n)
    lb = math.log2(B)
    slack = math.log2(6 * P) + 1
    out = []
    for u in range(1, U + 1):
        if u < U:
            bits = 2 * Sigma / 2 ** (U - u) + slack
        else:
            bits = Sigma + math.log2(8 * P) + 1
        d = max(1, math.ceil(bits / lb))
        if out and d <= out[-1]:
            d = out[-1] + 1
        out.append(d)
    return out


def make_level_schedule(Sigma, n, gamma, P, B, rng=None, precision="provable", eps=0.25, strict=True):
    """Independent codes for ``U = ceil(log2 min(Sigma, n)) + 2`` levels.

    ``precision="provable"`` uses ``nu_u = ceil(5 Sigma / 2^(U-u))`` digits;
    ``"practical"`` uses :func:`practical_level_digits`.
    """
    Sigma = check_int(Sigma, "Sigma", 1)
    n = check_int(n, "n", 1)
    rng = check_random_state(rng)
    U = _level_count(Sigma, n)
    if precision == "provable":
        nus = [math.ceil(5 * Sigma / 2 ** (U - u)) for u in range(1, U + 1)]
    elif precision == "practical":
        nus = practical_level_digits(Sigma, n, P, B)
    else:
        raise ValueError(f"unknown precision rule {precision!r}")
    levels = []
    for u in range(1, U + 1):
        m = math.ceil(n / 2 ** (U - u))
        levels.append(sample_code_params(n, m, nus[u - 1], gamma, P, B, rng, eps=eps, strict=strict))
    return LevelSchedule(Sigma=Sigma, n=n, gamma=float(gamma), U=U, levels=tuple(levels))


def _exp_size(e):
    return sum(sigma(x) for x in e)


def hierarchical_decode(code_batches, schedule, return_valid=False, trace=None):
    """Successive approximation over the levels of ``schedule``.

    ``code_batches[u]`` holds the codes of every term for level ``u + 1``.
    Rows whose decoded size exceeds ``Sigma`` are replaced by zero; with
    ``return_valid`` a mask of the untouched rows is returned as well.
    ``trace(u, rows)`` sees the running approximation after each level.
    """
    if len(code_batches) != schedule.U:
        raise ValueError("need one batch of codes per level")
    T = len(code_batches[0]) if code_batches else 0
    n = schedule.n
    est = [[0] * n for _ in range(T)]
    for u, (params, batch) in enumerate(zip(schedule.levels, code_batches), 1):
        if len(batch) != T:
            raise ValueError("every level must carry the same number of codes")
        BN = params.BN
        resid = []
        for psi, e in zip(batch, est):
            cur = encode(e, params)
            resid.append([centered(int(a) - b, BN) for a, b in zip(psi, cur)])
        step = bulk_decode_level(resid, params)
        est = [[a + b for a, b in zip(e, d)] for e, d in zip(est, step)]
        if trace is not None:
            trace(u, est)
    valid = []
    for j, e in enumerate(est):
        ok = _exp_size(e) <= schedule.Sigma
        valid.append(ok)
        if not ok:
            est[j] = [0] * n
    return (est, valid) if return_valid else est
