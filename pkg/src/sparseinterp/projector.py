"""Cyclic modular projections of a blackbox and bulk extraction of exponent codes."""

import math

import gmpy2
from gmpy2 import mpz

from .arith import TransposedVandermonde, centered, hensel_lift_root, inverse_dft
from .sparse import CyclicPoly

__all__ = [
    "project_dense",
    "project_sparse",
    "extract_code_table",
    "CodeTable",
    "root_powers",
    "prime_power_exponent",
]


def _check_tau(tau, r, n):
    if len(tau) != n:
        raise ValueError("tau must have one entry per variable")
    if any(not 1 <= t < r for t in tau):
        raise ValueError("tau entries must lie in {1, ..., r-1}")


def root_powers(omega, tau, M):
    """``[omega**t mod M for t in tau]``."""
    return [int(gmpy2.powmod(omega, t, M)) for t in tau]


def project_dense(bb, tau, r, q, omega):
    """``f(t^tau) mod (t^r - 1, q)`` from ``r`` evaluations and one inverse DFT."""
    _check_tau(tau, r, bb.nvars)
    vals = bb.evaluate_geometric([1] * bb.nvars, root_powers(omega, tau, q), r, q)
    coeffs = inverse_dft(vals, omega, q)
    return CyclicPoly(r, {k: c for k, c in enumerate(coeffs) if c}, q)


def project_sparse(bb, known_exps, tau, r, M, omega_t, alpha=None, solver=None):
    """Coefficients of ``t^{known_exps[j]}`` in the projection of ``f(alpha x)`` modulo ``M``.

    Uses exactly ``len(known_exps)`` evaluations at ``alpha * omega_t^(i tau)``.
    ``solver`` may be a prepared :class:`TransposedVandermonde` for these
    exponents and this modulus.
    """
    _check_tau(tau, r, bb.nvars)
    Tp = len(known_exps)
    if Tp == 0:
        return []
    if alpha is None:
        alpha = [1] * bb.nvars
    if len(alpha) != bb.nvars:
        raise ValueError("alpha must have one entry per variable")
    if solver is None:
        solver = vandermonde_solver(known_exps, M, omega_t)
    vals = bb.evaluate_geometric(alpha, root_powers(omega_t, tau, M), Tp, M)
    return solver.solve(vals)


def vandermonde_solver(known_exps, M, omega_t, method="auto"):
    if len(set(known_exps)) != len(known_exps):
        raise ValueError("known exponents must be distinct")
    xs = [gmpy2.powmod(omega_t, e, M) for e in known_exps]
    return TransposedVandermonde(xs, M, method=method)


def prime_power_exponent(M, q):
    """``v`` with ``M == q**v``; raises if ``M`` is not a power of ``q``."""
    v, x = 0, mpz(M)
    while x > 1 and x % q == 0:
        x //= q
        v += 1
    if x != 1:
        raise ValueError(f"{M} is not a power of {q}")
    return v


class CodeTable:
    """``psi[u][k][i]`` for levels ``u`` (0-based here), supports ``k`` and projected terms ``i``.

    ``codes(u)`` regroups a level as one code vector per projected term,
    which is the layout the decoders consume.
    """

    def __init__(self, psi, base):
        self.psi = psi
        self.base = base

    def __getitem__(self, u):
        return self.psi[u]

    def __len__(self):
        return len(self.psi)

    def codes(self, u):
        level = self.psi[u]
        if not level:
            return []
        return [list(col) for col in zip(*level)]

    def batches(self):
        return [self.codes(u) for u in range(len(self.psi))]


def extract_code_table(bb, known_exps, tau, r, schedule, triple, reuse_duplicate_supports=False,
                       method="auto"):
    """Exponent codes of the projected terms at every level of ``schedule``.

    For level ``u`` with ``BN = B**nu_u``, the projections of ``f`` and of
    ``f(alpha_k x)`` with ``alpha_{k,i} = 1 + p_i BN`` on ``I_k`` are taken
    modulo ``BN**2``.  A term coefficient ``c`` invertible modulo ``q``
    turns into ``c (1 + phi_k(e) BN)``, so ``phi_k(e)`` is read off the
    quotient; slots where the quotient is not of that shape get 0.

    With ``reuse_duplicate_supports`` a support seen before at the same level
    reuses the earlier projection instead of evaluating again.
    """
    q, omega = triple.q, triple.omega
    Tp = len(known_exps)
    U = len(schedule.levels)
    if Tp == 0:
        return CodeTable([[] for _ in range(U)], [[] for _ in range(U)])
    B = schedule.levels[0].B
    mu = prime_power_exponent(B, q)
    top = max(2 * mu * c.nu for c in schedule.levels)
    omega_top = hensel_lift_root(omega, q, r, top)
    n = bb.nvars
    psi, bases = [], []
    for params in schedule.levels:
        BN = params.BN
        M = BN * BN
        omega_t = omega_top % M
        solver = vandermonde_solver(known_exps, M, omega_t, method=method)
        base = project_sparse(bb, known_exps, tau, r, M, omega_t, solver=solver)
        inv = []
        for c in base:
            if math.gcd(int(c), q) != 1:
                inv.append(None)
            else:
                inv.append(gmpy2.invert(c, M))
        seen = {}
        level = []
        for I in params.supports:
            if reuse_duplicate_supports and I in seen:
                level.append(seen[I])
                continue
            alpha = [1] * n
            for i in I:
                alpha[i] = 1 + params.primes[i] * BN
            ck = project_sparse(bb, known_exps, tau, r, M, omega_t, alpha=alpha, solver=solver)
            row = []
            for c, ci in zip(ck, inv):
                if ci is None:
                    row.append(0)
                    continue
                quot = (c * ci - 1) % M
                if quot % BN:
                    row.append(0)
                else:
                    row.append(centered(quot // BN, BN))
            seen[I] = row
            level.append(row)
        psi.append(level)
        bases.append(base)
    return CodeTable(psi, bases)
