"""Exact arithmetic kernels shared by the rest of the package.

Everything here is a pure function of its arguments.  Residues are kept in
canonical form ``[0, m)``; :func:`centered` maps to the symmetric range
``Z_k`` only where a caller explicitly needs signed representatives.
"""

import gmpy2
from gmpy2 import mpz

from . import _polyarith as pa

__all__ = [
    "mod_pow",
    "centered",
    "ProductTree",
    "product_tree",
    "multi_remainder",
    "forward_dft",
    "inverse_dft",
    "hensel_lift_root",
    "solve_transposed_vandermonde",
    "TransposedVandermonde",
    "PowerSums",
    "power_sums",
]

DFT_NAIVE_CUTOFF = 128
VANDERMONDE_FAST_CUTOFF = 48
POWER_SUMS_FAST_CUTOFF = 32


def mod_pow(base, exp, m):
    """``base ** exp mod m`` by binary powering."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return int(gmpy2.powmod(base, exp, m))


def centered(x, k):
    """Representative of ``x mod k`` in ``Z_k = N_k - floor((k-1)/2)``."""
    r = x % k
    if r > k - 1 - (k - 1) // 2:
        r -= k
    return int(r)


class ProductTree:
    """Sub-product tree: ``levels[0]`` are the leaves, ``levels[-1] == [root]``."""

    def __init__(self, levels):
        self.levels = levels

    @property
    def leaves(self):
        return self.levels[0]

    @property
    def root(self):
        return self.levels[-1][0]

    def __len__(self):
        return len(self.levels[0])


def product_tree(xs):
    """Build the sub-product tree of a non-empty list of positive integers."""
    xs = [mpz(x) for x in xs]
    if not xs:
        raise ValueError("product_tree needs at least one leaf")
    if any(x < 1 for x in xs):
        raise ValueError("product_tree leaves must be positive")
    level = xs
    levels = [level]
    while len(level) > 1:
        nxt = [level[i] * level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
        levels.append(level)
    return ProductTree(levels)


def multi_remainder(x, tree):
    """``[x mod leaf for leaf in tree.leaves]`` by descending the tree."""
    rems = [mpz(x) % tree.root]
    for depth in range(len(tree.levels) - 2, -1, -1):
        level = tree.levels[depth]
        nxt = []
        for i, node in enumerate(level):
            nxt.append(rems[i // 2] % node)
        rems = nxt
    return [int(r) for r in rems]


def _check_order(omega, r, q):
    if pow(omega, r, q) != 1 or omega % q == 1 and r > 1:
        raise ValueError("omega must have multiplicative order exactly r")
    # r may be composite for naive callers; reject any proper-divisor order
    for p in _prime_factors(r):
        if pow(omega, r // p, q) == 1:
            raise ValueError("omega must have multiplicative order exactly r")


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def forward_dft(coeffs, omega, q):
    """Evaluate ``sum_j a_j t^j`` at ``omega^0 .. omega^(r-1)`` (naive)."""
    r = len(coeffs)
    out = []
    w = 1
    for _ in range(r):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * w + c) % q
        out.append(acc)
        w = w * omega % q
    return out


def _dft_naive(x, w, q):
    r = len(x)
    pw = [pow(w, i, q) for i in range(r)]
    return [sum(x[j] * pw[(i * j) % r] for j in range(r)) % q for i in range(r)]


def _dft_bluestein(x, w, q):
    # w^{ij} = h^{i^2} h^{j^2} h^{-(i-j)^2} with h^2 = w
    r = len(x)
    if r % 2 == 0:
        raise ValueError("Bluestein path needs odd r")
    h = pow(w, (r + 1) // 2, q)
    hinv = pow(h, -1, q)
    # h^{k^2} for k < r via consecutive odd-power ratios
    hk2 = [1] * r
    hinvk2 = [1] * (2 * r - 1)
    step, acc = h, 1
    istep, iacc = hinv, 1
    h2 = h * h % q
    hinv2 = hinv * hinv % q
    for k in range(1, 2 * r - 1):
        acc = acc * step % q
        step = step * h2 % q
        iacc = iacc * istep % q
        istep = istep * hinv2 % q
        if k < r:
            hk2[k] = acc
        hinvk2[k] = iacc
    a = [x[j] * hk2[j] % q for j in range(r)]
    # kernel indexed by d = i - j + (r - 1) in [0, 2r-2]
    b = [hinvk2[abs(d - (r - 1))] for d in range(2 * r - 1)]
    conv = pa.mul(a, b, q)
    return [int(hk2[i] * conv[i + r - 1] % q) for i in range(r)]


def inverse_dft(values, omega, q):
    """Coefficients ``a`` with ``values[i] = sum_j a_j omega^(i j) mod q``.

    ``omega`` must have order exactly ``len(values)`` in F_q.  Lengths
    below ``DFT_NAIVE_CUTOFF`` use the quadratic formula, larger (odd)
    lengths go through Bluestein's chirp transform.
    """
    r = len(values)
    _check_order(omega, r, q)
    winv = pow(omega, -1, q)
    x = [v % q for v in values]
    if r < DFT_NAIVE_CUTOFF or r % 2 == 0:
        y = _dft_naive(x, winv, q)
    else:
        y = _dft_bluestein(x, winv, q)
    rinv = pow(r, -1, q)
    return [int(c * rinv % q) for c in y]


def hensel_lift_root(omega, q, r, v):
    """Lift an order-``r`` root of unity mod ``q`` to a principal root mod ``q^v``.

    Newton iteration on ``X^r - 1`` doubling the precision at each step.
    """
    if v < 1:
        raise ValueError("precision v must be at least 1")
    if pow(omega, r, q) != 1:
        raise ValueError("omega is not an r-th root of unity modulo q")
    if r % q == 0:
        raise ValueError("r must be invertible modulo q")
    w = mpz(omega % q)
    prec = 1
    while prec < v:
        prec = min(2 * prec, v)
        mod = mpz(q) ** prec
        wr1 = gmpy2.powmod(w, r - 1, mod)
        f = (wr1 * w - 1) % mod
        df = (r * wr1) % mod
        w = (w - f * gmpy2.invert(df, mod)) % mod
    return int(w)


def _solve_tv_quadratic(xs, values, M):
    """Solve ``sum_j c_j x_j^i = v_i`` by the master-polynomial formula."""
    n = len(xs)
    # Q(z) = prod (z - x_j), coefficients low to high
    Q = [1]
    for x in xs:
        nq = [0] * (len(Q) + 1)
        for i, c in enumerate(Q):
            nq[i + 1] += c
            nq[i] -= c * x
        Q = [c % M for c in nq]
    out = []
    for j, x in enumerate(xs):
        # synthetic division Q / (z - x)
        qj = [0] * n
        acc = 0
        for i in range(n, 0, -1):
            acc = (Q[i] + acc * x) % M
            qj[i - 1] = acc
        num = sum(qj[i] * values[i] for i in range(n)) % M
        den = 0
        for c in reversed(qj):
            den = (den * x + c) % M
        try:
            inv = pow(int(den), -1, int(M))
        except ValueError:
            raise ArithmeticError("transposed Vandermonde system is singular modulo M") from None
        out.append(int(num * inv % M))
    return out


class TransposedVandermonde:
    """Reusable solver for ``sum_j c_j x_j^i = v_i`` (``i < len(xs)``) mod ``M``.

    The nodes are fixed at construction and any number of right-hand sides
    can then be solved.  Above ``VANDERMONDE_FAST_CUTOFF`` nodes the solve
    writes ``sum_i v_i z^i = sum_j c_j / (1 - x_j z)`` truncated, clears the
    denominator with one product and reads ``c_j`` off a multipoint
    evaluation at ``1/x_j``.
    """

    def __init__(self, xs, M, method="auto"):
        self.M = mpz(M)
        self.xs = [mpz(x) % self.M for x in xs]
        n = len(self.xs)
        if method == "auto":
            method = "fast" if n > VANDERMONDE_FAST_CUTOFF else "quadratic"
        if method not in ("fast", "quadratic"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        if method == "fast" and n:
            self._prepare()

    def _prepare(self):
        M = self.M
        try:
            ys = [gmpy2.invert(x, M) for x in self.xs]
        except ZeroDivisionError:
            raise ArithmeticError("transposed Vandermonde nodes must be units") from None
        self.tree = pa.SubproductTree(ys, M)
        scale = mpz(1)
        for x in self.xs:
            scale = scale * (-x) % M
        # Qt(z) = prod (1 - x_j z) = scale * prod (z - y_j)
        self.qt = [c * scale % M for c in self.tree.root]
        dq = self.tree.evaluate(pa.derivative(self.qt, M))
        self.den_inv = []
        for y, d in zip(ys, dq):
            den = (-d * y) % M
            try:
                self.den_inv.append(gmpy2.invert(den, M))
            except ZeroDivisionError:
                raise ArithmeticError(
                    "transposed Vandermonde system is singular modulo M"
                ) from None

    def solve(self, values):
        n = len(self.xs)
        if len(values) != n:
            raise ValueError("need exactly one value per node")
        if n == 0:
            return []
        M = self.M
        if self.method == "quadratic":
            return _solve_tv_quadratic(self.xs, [mpz(v) % M for v in values], M)
        num = pa.mullow([mpz(v) % M for v in values], self.qt, n, M)
        at = self.tree.evaluate(num)
        return [int(a * d % M) for a, d in zip(at, self.den_inv)]


def solve_transposed_vandermonde(omega, exps, values, M, method="auto"):
    """Solve ``sum_j c_j omega^(i exps[j]) = values[i]`` for ``i < len(exps)``."""
    if len(exps) != len(values):
        raise ValueError("exps and values must have the same length")
    if len(set(exps)) != len(exps):
        raise ValueError("exponents must be pairwise distinct")
    xs = [gmpy2.powmod(omega, e, M) for e in exps]
    return TransposedVandermonde(xs, M, method=method).solve(values)


class PowerSums:
    """Evaluate ``v_i = sum_t a_t b_t^i`` for fixed bases and varying weights."""

    def __init__(self, bases, m, count):
        self.m = mpz(m)
        self.bases = [mpz(b) % self.m for b in bases]
        self.count = count
        self.fast = (
            len(self.bases) > POWER_SUMS_FAST_CUTOFF and count > POWER_SUMS_FAST_CUTOFF
        )
        if self.fast:
            self.levels = pa.linear_product_tree(self.bases, self.m)
            self.den_inv = pa.series_inverse(self.levels[-1][0], count, self.m)

    def __call__(self, weights):
        m, n = self.m, self.count
        if not self.bases:
            return [0] * n
        if not self.fast:
            cur = [mpz(w) % m for w in weights]
            out = []
            for _ in range(n):
                out.append(int(sum(cur) % m))
                cur = [c * b % m for c, b in zip(cur, self.bases)]
            return out
        num = pa.combine_numerators(weights, self.levels, m)
        vals = pa.mullow(num, self.den_inv, n, m)
        vals = [int(v) for v in vals] + [0] * (n - len(vals))
        return vals


def power_sums(weights, bases, count, m):
    """``[sum_t weights[t] * bases[t]**i mod m for i in range(count)]``."""
    return PowerSums(bases, m, count)(weights)
