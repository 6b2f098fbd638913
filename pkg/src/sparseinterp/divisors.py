"""Which primes divide which values, in bulk."""

import numpy as np
from gmpy2 import mpz

from .arith import multi_remainder, product_tree

__all__ = ["divisors", "divisors_naive", "residue_matrix", "NAIVE_CUTOFF"]

NAIVE_CUTOFF = 32


def _check_values(values):
    vals = [mpz(a) for a in values]
    if any(a < 1 for a in vals):
        raise ValueError("values must be positive integers")
    return vals


def divisors_naive(primes, values):
    """``{(i, k) : primes[i] divides values[k]}`` by a double loop."""
    vals = _check_values(values)
    return {(i, k) for k, a in enumerate(vals) for i, p in enumerate(primes) if a % p == 0}


SMALL_PRIME_LIMIT = 1 << 31
_LIMB = 16
_CHUNK = 1 << 15


def residue_matrix(values, primes):
    """``R[k, i] = values[k] mod primes[i]`` for non-negative values and primes below 2**31.

    Values are split into 16-bit limbs and reduced with one integer matrix
    product per chunk of limbs, so the work is vectorized over all pairs.
    """
    primes = [int(p) for p in primes]
    if any(not 1 < p < SMALL_PRIME_LIMIT for p in primes):
        raise ValueError("residue_matrix needs primes below 2**31")
    N, n = len(values), len(primes)
    if N == 0 or n == 0:
        return np.zeros((N, n), dtype=np.int64)
    bits = max(int(v).bit_length() for v in values)
    L = max(1, -(-bits // _LIMB))
    width = 2 * L
    buf = b"".join(int(v).to_bytes(width, "little") for v in values)
    limbs = np.frombuffer(buf, dtype="<u2").reshape(N, L).astype(np.int64)
    pv = np.array(primes, dtype=np.int64)
    acc = np.zeros((N, n), dtype=np.int64)
    for lo in range(0, L, _CHUNK):
        hi = min(L, lo + _CHUNK)
        W = np.array([[pow(2, _LIMB * j, p) for p in primes] for j in range(lo, hi)], dtype=np.int64)
        acc = (acc + limbs[:, lo:hi] @ W % pv) % pv
    return acc


def _small(prime_idx, primes, value_idx, vals, out):
    if not prime_idx:
        return
    if all(primes[i] < SMALL_PRIME_LIMIT for i in prime_idx):
        value_idx = list(value_idx)
        R = residue_matrix([vals[k] for k in value_idx], [primes[i] for i in prime_idx])
        for a, b in zip(*np.nonzero(R == 0)):
            out.add((prime_idx[b], value_idx[a]))
        return
    # reduce each value modulo the product of the live primes once
    mod = mpz(1)
    for i in prime_idx:
        mod *= primes[i]
    for k in value_idx:
        a = vals[k] % mod
        for i in prime_idx:
            if a % primes[i] == 0:
                out.add((i, k))


def divisors(primes, values, trace=None):
    """Same result as :func:`divisors_naive` by recursive halving.

    The value set is split into halves; the primes that survive in a half
    are those dividing the product of that half, found by one remainder
    tree over the primes.  ``trace(prime_idx, value_idx)`` is called at
    every node reached with a non-empty prime set.
    """
    vals = _check_values(values)
    primes = [mpz(p) for p in primes]
    out = set()
    if not primes or not vals:
        return out
    if trace is None and all(p < SMALL_PRIME_LIMIT for p in primes):
        # word-size primes: the vectorized base case beats the recursion
        _small(list(range(len(primes))), primes, range(len(vals)), vals, out)
        return out
    vtree = product_tree(vals)
    # restrict to primes dividing the full product first
    live = _filter(list(range(len(primes))), primes, vtree.root)
    _recurse(live, primes, vtree, len(vtree.levels) - 1, 0, vals, out, trace)
    return out


def _filter(prime_idx, primes, A):
    if not prime_idx:
        return []
    rems = multi_remainder(A, product_tree([primes[i] for i in prime_idx]))
    return [i for i, r in zip(prime_idx, rems) if r == 0]


def _span(depth, idx, count):
    width = 1 << depth
    lo = idx * width
    return range(lo, min(lo + width, count))


def _recurse(prime_idx, primes, vtree, depth, idx, vals, out, trace):
    if not prime_idx:
        return
    value_idx = _span(depth, idx, len(vals))
    if trace is not None:
        trace(prime_idx, list(value_idx))
    if depth == 0 or min(len(prime_idx), len(value_idx)) < NAIVE_CUTOFF:
        _small(prime_idx, primes, value_idx, vals, out)
        return
    below = vtree.levels[depth - 1]
    for child in (2 * idx, 2 * idx + 1):
        if child < len(below):
            if 2 * idx + 1 >= len(below):
                # lone child carried up unchanged: same product as the parent
                sub = prime_idx
            else:
                sub = _filter(prime_idx, primes, below[child])
            _recurse(sub, primes, vtree, depth - 1, child, vals, out, trace)
