"""Dense univariate polynomial kernels over Z/mZ.

Polynomials are plain lists of coefficients, lowest degree first, with
entries in ``[0, m)``.  Products go through Kronecker substitution: the
coefficient vectors are packed into one big integer, multiplied by GMP and
unpacked again, which makes every routine here quasi-linear in the total
bit-size of its operands.
"""

import gmpy2
from gmpy2 import mpz

# below this length schoolbook products beat packing overhead
NAIVE_MUL_CUTOFF = 2
# below this many points Horner evaluation beats the remainder tree
NAIVE_EVAL_CUTOFF = 24


def _slot_bits(m, length):
    return 2 * int(m).bit_length() + int(length).bit_length() + 1


def mul(a, b, m):
    """Product of ``a`` and ``b`` modulo ``m``; entries must already lie in ``[0, m)``."""
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if min(la, lb) <= NAIVE_MUL_CUTOFF:
        if la < lb:
            a, b, la, lb = b, a, lb, la
        out = [0] * (la + lb - 1)
        for j, bj in enumerate(b):
            if bj:
                for i, ai in enumerate(a):
                    out[i + j] += ai * bj
        return [c % m for c in out]
    bits = _slot_bits(m, min(la, lb))
    prod = gmpy2.pack(list(a), bits) * gmpy2.pack(list(b), bits)
    out = gmpy2.unpack(prod, bits)
    n = la + lb - 1
    mm = mpz(m)
    out = [c % mm for c in out[:n]]
    if len(out) < n:
        out.extend([mpz(0)] * (n - len(out)))
    return out


def mullow(a, b, n, m):
    """``a * b mod (z^n, m)``."""
    return mul(a[:n], b[:n], m)[:n]


def series_inverse(d, n, m):
    """Power series inverse of ``d`` modulo ``z^n``; ``d[0]`` must be a unit."""
    g = [pow(int(d[0]), -1, int(m))]
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = mullow(d, g, k, m)
        # g <- g * (2 - d*g)
        e = [(-c) % m for c in e]
        e[0] = (e[0] + 2) % m
        g = mullow(g, e, k, m)
    return g[:n]


def sub(a, b, m):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    return [(a[i] - (b[i] if i < len(b) else 0)) % m for i in range(n)]


def derivative(a, m):
    return [(i * a[i]) % m for i in range(1, len(a))]


def horner(f, x, m):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


class SubproductTree:
    """Binary tree of the products ``prod (z - y)`` over a point set.

    ``levels[0]`` holds the linear leaves and ``levels[-1]`` the single root.
    Reversed-inverse series of the nodes are cached lazily because the same
    tree is reused for many multipoint evaluations.
    """

    def __init__(self, points, m):
        self.m = m
        self.points = list(points)
        level = [[(-y) % m, 1] for y in self.points]
        self.levels = [level]
        while len(level) > 1:
            nxt = [mul(level[i], level[i + 1], m) for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
            self.levels.append(level)
        self._inv = {}

    @property
    def root(self):
        return self.levels[-1][0]

    def _rev_inverse(self, depth, idx, n):
        key = (depth, idx)
        cached = self._inv.get(key)
        if cached is None or len(cached) < n:
            node = self.levels[depth][idx]
            cached = series_inverse(node[::-1], n, self.m)
            self._inv[key] = cached
        return cached[:n]

    def _rem(self, f, depth, idx):
        node = self.levels[depth][idx]
        s = len(node) - 1
        if len(f) <= s:
            return f
        m = self.m
        # quotient via reversal: rev(q) = rev(f) / rev(node) mod z^(deg f - s + 1)
        k = len(f) - s
        qrev = mullow(f[::-1], self._rev_inverse(depth, idx, k), k, m)
        q = qrev[::-1]
        qg = mul(q, node, m)
        return [(f[i] - qg[i]) % m for i in range(s)]

    def evaluate(self, f):
        """Values of ``f`` at every point, in point order."""
        m = self.m
        out = []
        self._descend(f, len(self.levels) - 1, 0, out, m)
        return out

    def _descend(self, f, depth, idx, out, m):
        f = self._rem(f, depth, idx)
        count = self._count(depth, idx)
        if count <= NAIVE_EVAL_CUTOFF or depth == 0:
            start = self._first(depth, idx)
            for y in self.points[start:start + count]:
                out.append(horner(f, y, m))
            return
        below = self.levels[depth - 1]
        left = 2 * idx
        self._descend(f, depth - 1, left, out, m)
        if left + 1 < len(below):
            self._descend(f, depth - 1, left + 1, out, m)

    def _count(self, depth, idx):
        width = 1 << depth
        return min(width, len(self.points) - idx * width)

    def _first(self, depth, idx):
        return idx * (1 << depth)


def linear_product_tree(bases, m):
    """Levels of the products ``prod (1 - b z)``; ``levels[-1][0]`` is the root."""
    level = [[1, (-b) % m] for b in bases]
    levels = [level]
    while len(level) > 1:
        nxt = [mul(level[i], level[i + 1], m) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
        levels.append(level)
    return levels


def combine_numerators(weights, levels, m):
    """``sum_t w_t prod_{l != t} (1 - b_l z)`` using a cached linear product tree."""
    cur = [[w % m] for w in weights]
    for depth in range(len(levels) - 1):
        dens = levels[depth]
        nxt = []
        for i in range(0, len(cur) - 1, 2):
            left = mul(cur[i], dens[i + 1], m)
            right = mul(cur[i + 1], dens[i], m)
            n = max(len(left), len(right))
            left = left + [0] * (n - len(left))
            nxt.append([(left[j] + (right[j] if j < len(right) else 0)) % m for j in range(n)])
        if len(cur) % 2:
            nxt.append(cur[-1])
        cur = nxt
    return cur[0]
