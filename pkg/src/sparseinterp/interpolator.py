"""Parameter derivation, one approximation round, the halving driver and verification."""

import math
from dataclasses import dataclass, field

from ._validation import check_int, check_random_state
from .arith import centered, hensel_lift_root
from .blackbox import DifferenceBlackbox
from .codes import check_code_inequality, hierarchical_decode, make_level_schedule
from .primes import generate_prime_triple, is_probable_prime
from .projector import extract_code_table, project_dense, project_sparse
from .sparse import SparsePoly, sigma

__all__ = [
    "RunParams",
    "RoundReport",
    "derive_params",
    "sample_run_randomness",
    "t_approximation",
    "interpolate",
    "verify",
    "coefficient_precision",
    "PRACTICAL_BETA",
]

MODES = ("practical", "provable")
# practical size multiplier for the per-round size threshold
PRACTICAL_BETA = 4
PRACTICAL_R_CAP = 1 << 20
PRACTICAL_B_FLOOR = 1 << 20


@dataclass
class RunParams:
    T: int
    S: int
    n: int
    mode: str
    beta: int
    Sigma: int
    R: int
    triple: object
    mu: int
    B: int
    P: int
    gamma: float
    tau: list = field(default_factory=list)
    schedule: object = None

    @property
    def q(self):
        return self.triple.q

    @property
    def r(self):
        return self.triple.r

    def describe(self):
        """Plain ``name value`` pairs, then the level table."""
        rows = [
            ("mode", self.mode), ("T", self.T), ("S", self.S), ("n", self.n),
            ("beta", self.beta), ("Sigma", self.Sigma), ("R", self.R),
            ("r", self.r), ("q", self.q), ("omega", self.triple.omega),
            ("mu", self.mu), ("B", self.B), ("P", self.P), ("gamma", self.gamma),
        ]
        if self.schedule is not None:
            rows.append(("U", self.schedule.U))
        return rows


def _check_bounds(T, S, n, mode):
    T = check_int(T, "T", 1)
    S = check_int(S, "S", 1)
    n = check_int(n, "n", 1)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if S < T:
        raise ValueError("S must be at least T")
    if S < n:
        raise ValueError("S must be at least n")
    if mode == "provable" and S < 1 << 16:
        raise ValueError("provable parameters need S >= 2**16")
    return T, S, n


def _provable_mu(S, n, q):
    # smallest mu with q^mu >= 2^52 n^4 S^6, i.e. the ceiling of the log ratio
    target = (1 << 52) * n ** 4 * S ** 6
    mu = max(1, math.ceil((6 * math.log(S) + 4 * math.log(n) + 52 * math.log(2)) / math.log(q)))
    while mu > 1 and q ** (mu - 1) >= target:
        mu -= 1
    while q ** mu < target:
        mu += 1
    return mu


def _practical_mu(n, q):
    mu = 1
    while True:
        B = q ** mu
        P = math.isqrt(B) // 2
        if B >= PRACTICAL_B_FLOOR and check_code_inequality(n, B, P):
            return mu
        mu += 1


def derive_params(T, S, n, mode="practical", rng=None, beta=None, with_schedule=True):
    """All sizes and random choices for one approximation round.

    ``beta`` overrides the size multiplier (practical mode only).
    """
    T, S, n = _check_bounds(T, S, n, mode)
    rng = check_random_state(rng)
    if mode == "provable":
        beta = 64 * sigma(S) ** 2
        Sigma = beta * S // T
        R = max(S, 1 << 58) * beta ** 2
        triple = generate_prime_triple(R, eps=1 / beta, rng=rng, mode="provable")
        q = triple.q
        mu = _provable_mu(S, n, q)
        gamma = math.ceil(6 * math.e * math.log(S))
    else:
        beta = PRACTICAL_BETA if beta is None else check_int(beta, "beta", 1)
        Sigma = max(1, min(beta * S // T, S))
        R = max(4 * T, 64, min(S, PRACTICAL_R_CAP))
        triple = generate_prime_triple(R, eps=0.5, rng=rng, mode="practical")
        q = triple.q
        mu = _practical_mu(n, q)
        gamma = max(2, math.ceil(math.log(n)) + 7)
    B = q ** mu
    P = math.isqrt(B) // 2
    params = RunParams(T=T, S=S, n=n, mode=mode, beta=beta, Sigma=Sigma, R=R, triple=triple,
                       mu=mu, B=B, P=P, gamma=gamma)
    if with_schedule:
        params.tau, params.schedule = sample_run_randomness(params, rng)
    else:
        params.tau = [rng.randrange(1, triple.r) for _ in range(n)]
    return params


def sample_run_randomness(params, rng=None):
    """Fresh ``tau`` and an independent level schedule for ``params``."""
    rng = check_random_state(rng)
    tau = [rng.randrange(1, params.r) for _ in range(params.n)]
    U = math.ceil(math.log2(min(params.Sigma, params.n))) + 2
    eps = 1 / (params.S * U + 1)
    precision = "provable" if params.mode == "provable" else "practical"
    schedule = make_level_schedule(params.Sigma, params.n, params.gamma, params.P, params.B,
                                   rng, precision=precision, eps=eps)
    return tau, schedule


def coefficient_precision(q, Sigma):
    """Smallest ``v`` with ``q**v >= 2**(Sigma + 1)``."""
    v, x, bound = 1, q, 1 << (Sigma + 1)
    while x < bound:
        x *= q
        v += 1
    return v


@dataclass
class RoundReport:
    T: int
    Sigma: int
    r: int
    q: int
    projected_terms: int
    kept_terms: int


def t_approximation(bb, current, T_j, S, n, rng=None, mode="practical", beta=None, report=None):
    """One round: approximate ``bb - current`` by a polynomial of at most about ``T_j`` terms."""
    rng = check_random_state(rng)
    target = bb if not len(current) else DifferenceBlackbox(bb, current)
    params = derive_params(T_j, S, n, mode, rng, beta=beta)
    triple, tau, schedule = params.triple, params.tau, params.schedule
    r, q = triple.r, triple.q
    dense = project_dense(target, tau, r, q, triple.omega)
    exps = dense.exponents()
    if report is not None:
        report.append(RoundReport(T_j, params.Sigma, r, q, len(exps), 0))
    if not exps:
        return SparsePoly.zero(n)
    table = extract_code_table(target, exps, tau, r, schedule, triple, reuse_duplicate_supports=True)
    guesses, valid = hierarchical_decode(table.batches(), schedule, return_valid=True)
    v = coefficient_precision(q, params.Sigma)
    M = q ** v
    omega_t = hensel_lift_root(triple.omega, q, r, v)
    coeffs = project_sparse(target, exps, tau, r, M, omega_t)
    terms = []
    for ebar, e, ok, c in zip(exps, guesses, valid, coeffs):
        c = centered(c, M)
        if not ok or c == 0 or any(x < 0 for x in e):
            continue
        if sum(t * x for t, x in zip(tau, e)) % r != ebar:
            continue
        terms.append((tuple(e), c))
    delta = SparsePoly.from_terms(n, terms)
    if report is not None:
        report[-1].kept_terms = len(delta)
    return delta


def _truncate(f, T):
    if len(f) <= T:
        return f
    keep = sorted(f.terms, key=lambda t: (sigma(t[1]) + sum(sigma(x) for x in t[0]), t[0]))[:T]
    return SparsePoly(f.nvars, sorted(keep))


def interpolate(bb, n, T, S, rng=None, mode="practical", beta=None, report=None):
    """Recover the sparse polynomial behind ``bb`` (at most ``T`` terms, size at most ``S``).

    Runs ``ceil(log2 T) + 1`` rounds with halving term bounds.  The result
    is a Monte Carlo answer; use :func:`verify` to test it.
    """
    T, S, n = _check_bounds(T, S, n, mode)
    if mode == "provable":
        raise ValueError("provable parameters are far too large to run; use derive_params")
    if bb.nvars != n:
        raise ValueError("blackbox has a different number of variables")
    rng = check_random_state(rng)
    J = math.ceil(math.log2(T)) + 1
    f = SparsePoly.zero(n)
    for j in range(J):
        Tj = -(-T // (1 << j))
        delta = t_approximation(bb, f, Tj, S, n, rng, mode, beta=beta, report=report)
        if len(delta):
            f = f + delta
    return _truncate(f, T)


def _random_prime(rng, bits=62):
    while True:
        c = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(c):
            return c


def verify(candidate, bb, trials=8, rng=None):
    """Probabilistic identity test of ``bb`` against ``candidate``.

    ``False`` is certain; ``True`` means every random evaluation agreed.
    """
    trials = check_int(trials, "trials", 1)
    if candidate.nvars != bb.nvars:
        raise ValueError("candidate and blackbox have different numbers of variables")
    rng = check_random_state(rng)
    for _ in range(trials):
        p = _random_prime(rng)
        pt = [rng.randrange(p) for _ in range(bb.nvars)]
        if bb.evaluate(pt, p) != candidate.evaluate(pt, p):
            return False
    return True
