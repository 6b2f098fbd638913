"""Modular blackboxes: straight-line programs, sparse wrappers and cost accounting.

A blackbox takes a modulus ``m`` and a point of residues and returns the
value of a fixed integer polynomial at that point modulo ``m``.  Every
evaluation goes through :meth:`Blackbox.evaluate_many` or one of its
wrappers so that :class:`EvalStats` sees each point exactly once.
"""

import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpz

from .arith import PowerSums

__all__ = [
    "EvalStats",
    "Blackbox",
    "SLP",
    "SLPFormatError",
    "parse_slp",
    "format_slp",
    "eval_slp",
    "SLPBlackbox",
    "SparseBlackbox",
    "DifferenceBlackbox",
    "FunctionBlackbox",
    "sparse_as_blackbox",
    "sparse_to_slp",
]


class EvalStats:
    """Running totals of blackbox calls and of the modulus bit-sizes they used."""

    def __init__(self):
        self._lock = threading.Lock()
        self.eval_count = 0
        self.total_modulus_bits = 0

    def record(self, count, m):
        bits = int(m).bit_length() * count
        with self._lock:
            self.eval_count += count
            self.total_modulus_bits += bits

    def snapshot(self):
        with self._lock:
            return self.eval_count, self.total_modulus_bits

    def __repr__(self):
        return f"EvalStats(eval_count={self.eval_count}, total_modulus_bits={self.total_modulus_bits})"


class Blackbox:
    """Base class.  Subclasses implement :meth:`_eval` (and optionally the batch hooks)."""

    def __init__(self, nvars, jobs=1):
        self.nvars = int(nvars)
        self.stats = EvalStats()
        self.jobs = max(1, int(jobs))

    def _eval(self, point, m):
        raise NotImplementedError

    def _eval_many(self, points, m):
        if self.jobs > 1 and len(points) > 1:
            with ThreadPoolExecutor(self.jobs) as pool:
                return list(pool.map(lambda p: self._eval(p, m), points))
        return [self._eval(p, m) for p in points]

    def _eval_geometric(self, start, ratio, count, m):
        points = []
        cur = [mpz(s) % m for s in start]
        rat = [mpz(x) % m for x in ratio]
        for _ in range(count):
            points.append(cur)
            cur = [c * x % m for c, x in zip(cur, rat)]
        return self._eval_many(points, m)

    def _check(self, m):
        if m < 2:
            raise ValueError("modulus must be at least 2")

    def evaluate(self, point, m):
        return self.evaluate_many([point], m)[0]

    def evaluate_many(self, points, m):
        self._check(m)
        for p in points:
            if len(p) != self.nvars:
                raise ValueError(f"expected {self.nvars} coordinates, got {len(p)}")
        self.stats.record(len(points), m)
        return [int(v) % m for v in self._eval_many(points, m)]

    def evaluate_geometric(self, start, ratio, count, m):
        """Values at ``start * ratio**k`` (coordinatewise) for ``k < count``."""
        self._check(m)
        if len(start) != self.nvars or len(ratio) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        if count <= 0:
            return []
        self.stats.record(count, m)
        return [int(v) % m for v in self._eval_geometric(start, ratio, count, m)]

    def __call__(self, point, m):
        return self.evaluate(point, m)


class FunctionBlackbox(Blackbox):
    """Wrap any callable ``fn(point, m) -> int``."""

    def __init__(self, nvars, fn, jobs=1):
        super().__init__(nvars, jobs)
        self.fn = fn

    def _eval(self, point, m):
        return self.fn(point, m)


# --- straight-line programs -------------------------------------------------

_OPS = {"const": 1, "add": 2, "sub": 2, "mul": 2, "neg": 1}
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INPUT = re.compile(r"^x(\d+)$")


class SLPFormatError(ValueError):
    """Malformed straight-line program text."""


@dataclass(frozen=True)
class SLP:
    """Register machine: registers ``0..nvars-1`` hold the inputs.

    ``instructions`` is a tuple of ``(op, a, b)``; for ``const`` ``a`` is the
    constant, for ``neg`` ``b`` is ``None``.  Instruction ``j`` writes
    register ``nvars + j``.  ``output`` is a register index.
    """

    nvars: int
    instructions: tuple
    output: int
    names: tuple = ()

    def __post_init__(self):
        n = self.nvars
        for j, (op, a, b) in enumerate(self.instructions):
            if op not in _OPS:
                raise ValueError(f"unknown op {op!r}")
            if op == "const":
                continue
            for x in (a,) if op == "neg" else (a, b):
                if not 0 <= x < n + j:
                    raise ValueError(f"instruction {j} reads undefined register {x}")
        if not 0 <= self.output < n + len(self.instructions):
            raise ValueError("output register is undefined")


def parse_slp(text):
    nvars = None
    regs = {}
    names = []
    instrs = []
    output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if output is not None:
            raise SLPFormatError(f"line {lineno}: 'out' must be the last line")
        parts = line.split()
        if nvars is None:
            if len(parts) != 2 or parts[0] != "nvars" or not parts[1].isdigit():
                raise SLPFormatError(f"line {lineno}: expected 'nvars <n>'")
            nvars = int(parts[1])
            continue

        def operand(tok):
            m = _INPUT.match(tok)
            if m and int(m.group(1)) < nvars and tok not in regs:
                return int(m.group(1))
            if tok in regs:
                return regs[tok]
            raise SLPFormatError(f"line {lineno}: undefined operand {tok!r}")

        if parts[0] == "out":
            if len(parts) != 2:
                raise SLPFormatError(f"line {lineno}: expected 'out <operand>'")
            output = operand(parts[1])
            continue
        if len(parts) < 3 or parts[1] != "=":
            raise SLPFormatError(f"line {lineno}: expected '<name> = <op> ...'")
        name, op, args = parts[0], parts[2], parts[3:]
        if not _NAME.match(name) or _INPUT.match(name):
            raise SLPFormatError(f"line {lineno}: invalid name {name!r}")
        if name in regs:
            raise SLPFormatError(f"line {lineno}: {name!r} redefined")
        if op not in _OPS:
            raise SLPFormatError(f"line {lineno}: unknown op {op!r}")
        if len(args) != _OPS[op]:
            raise SLPFormatError(f"line {lineno}: {op} takes {_OPS[op]} operand(s)")
        if op == "const":
            if not re.match(r"^[+-]?\d+$", args[0]):
                raise SLPFormatError(f"line {lineno}: bad constant {args[0]!r}")
            instrs.append(("const", int(args[0]), None))
        elif op == "neg":
            instrs.append(("neg", operand(args[0]), None))
        else:
            instrs.append((op, operand(args[0]), operand(args[1])))
        regs[name] = nvars + len(instrs) - 1
        names.append(name)
    if nvars is None:
        raise SLPFormatError("missing 'nvars' header")
    if output is None:
        raise SLPFormatError("missing 'out' line")
    return SLP(nvars, tuple(instrs), output, tuple(names))


def format_slp(slp):
    names = list(slp.names) or [f"t{j}" for j in range(len(slp.instructions))]

    def ref(x):
        return f"x{x}" if x < slp.nvars else names[x - slp.nvars]

    lines = [f"nvars {slp.nvars}"]
    for name, (op, a, b) in zip(names, slp.instructions):
        if op == "const":
            lines.append(f"{name} = const {a}")
        elif op == "neg":
            lines.append(f"{name} = neg {ref(a)}")
        else:
            lines.append(f"{name} = {op} {ref(a)} {ref(b)}")
    lines.append(f"out {ref(slp.output)}")
    return "\n".join(lines) + "\n"


def eval_slp(slp, point, m):
    """Run ``slp`` on ``point`` modulo ``m``."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if len(point) != slp.nvars:
        raise ValueError("point has the wrong number of coordinates")
    mm = mpz(m)
    reg = [mpz(a) % mm for a in point]
    for op, a, b in slp.instructions:
        if op == "const":
            reg.append(mpz(a) % mm)
        elif op == "add":
            reg.append((reg[a] + reg[b]) % mm)
        elif op == "sub":
            reg.append((reg[a] - reg[b]) % mm)
        elif op == "mul":
            reg.append(reg[a] * reg[b] % mm)
        else:
            reg.append((-reg[a]) % mm)
    return int(reg[slp.output])


def _eval_slp_numpy(slp, points, m):
    # all intermediate products stay below 2**62
    pts = np.array([[int(a) % m for a in p] for p in points], dtype=np.int64).reshape(len(points), slp.nvars)
    reg = [pts[:, i] for i in range(slp.nvars)]
    k = len(points)
    for op, a, b in slp.instructions:
        if op == "const":
            reg.append(np.full(k, a % m, dtype=np.int64))
        elif op == "add":
            reg.append((reg[a] + reg[b]) % m)
        elif op == "sub":
            reg.append((reg[a] - reg[b]) % m)
        elif op == "mul":
            reg.append(reg[a] * reg[b] % m)
        else:
            reg.append((-reg[a]) % m)
    return [int(v) for v in reg[slp.output]]


class SLPBlackbox(Blackbox):
    NUMPY_LIMIT = 1 << 31

    def __init__(self, slp, jobs=1):
        super().__init__(slp.nvars, jobs)
        self.slp = slp

    def _eval(self, point, m):
        return eval_slp(self.slp, point, m)

    def _eval_many(self, points, m):
        if m < self.NUMPY_LIMIT and len(points) > 8:
            return _eval_slp_numpy(self.slp, points, m)
        return super()._eval_many(points, m)


# --- sparse polynomials as blackboxes ---------------------------------------


class _SparseEvaluator:
    """Fast exact evaluation of a fixed sparse polynomial, including geometric runs."""

    CACHE_LIMIT = 64

    def __init__(self, f):
        self.f = f
        self.exps = f.exponents()
        self.coeffs = f.coefficients()
        self._pow_cache = {}
        self._sums = {}

    def _pow(self, a, e, m):
        key = (a, e, m)
        v = self._pow_cache.get(key)
        if v is None:
            if len(self._pow_cache) > 1 << 18:
                self._pow_cache.clear()
            v = gmpy2.powmod(a, e, m)
            self._pow_cache[key] = v
        return v

    def monomials(self, point, m):
        """``[x^{e_t} mod m for every term t]``, sharing per-variable powers."""
        pt = [mpz(a) % m for a in point]
        out = []
        for e in self.exps:
            t = mpz(1)
            for a, k in zip(pt, e):
                if k and a != 1:
                    t = t * self._pow(a, k, m) % m
            out.append(t)
        return out

    def value(self, point, m):
        mm = mpz(m)
        mons = self.monomials(point, mm)
        return int(sum(c * x for c, x in zip(self.coeffs, mons)) % mm)

    def geometric(self, start, ratio, count, m):
        if not self.exps:
            return [0] * count
        mm = mpz(m)
        key = (tuple(int(x) for x in ratio), int(m), count)
        ps = self._sums.get(key)
        if ps is None:
            if len(self._sums) >= self.CACHE_LIMIT:
                self._sums.clear()
            ps = PowerSums(self.monomials(ratio, mm), mm, count)
            self._sums[key] = ps
        weights = [c * x % mm for c, x in zip(self.coeffs, self.monomials(start, mm))]
        return ps(weights)


class SparseBlackbox(Blackbox):
    """Blackbox view of an explicit :class:`SparsePoly`."""

    def __init__(self, f, jobs=1):
        super().__init__(f.nvars, jobs)
        self.f = f
        self._ev = _SparseEvaluator(f)

    def _eval(self, point, m):
        return self._ev.value(point, m)

    def _eval_geometric(self, start, ratio, count, m):
        return self._ev.geometric(start, ratio, count, m)


class DifferenceBlackbox(Blackbox):
    """``bb - f`` for an explicit sparse ``f``; calls are charged to ``bb.stats``."""

    def __init__(self, bb, f):
        if bb.nvars != f.nvars:
            raise ValueError("blackbox and polynomial have different numbers of variables")
        super().__init__(bb.nvars, bb.jobs)
        self.bb = bb
        self.f = f
        self.stats = bb.stats
        self._ev = _SparseEvaluator(f)

    def evaluate_many(self, points, m):
        vals = self.bb.evaluate_many(points, m)
        if not len(self.f):
            return vals
        return [(v - self._ev.value(p, m)) % m for v, p in zip(vals, points)]

    def evaluate_geometric(self, start, ratio, count, m):
        vals = self.bb.evaluate_geometric(start, ratio, count, m)
        if not len(self.f) or count <= 0:
            return vals
        sub = self._ev.geometric(start, ratio, count, m)
        return [(v - s) % m for v, s in zip(vals, sub)]

    def _eval(self, point, m):
        return (self.bb._eval(point, m) - self._ev.value(point, m)) % m


def sparse_as_blackbox(f, jobs=1):
    return SparseBlackbox(f, jobs)


def sparse_to_slp(f):
    """Straight-line program computing ``f`` by repeated squaring per term."""
    n = f.nvars
    instrs = []

    def emit(op, a, b=None):
        instrs.append((op, a, b))
        return n + len(instrs) - 1

    def power(x, e):
        acc = None
        base = x
        while e:
            if e & 1:
                acc = base if acc is None else emit("mul", acc, base)
            e >>= 1
            if e:
                base = emit("mul", base, base)
        return acc

    total = None
    for e, c in f.terms:
        t = emit("const", c)
        for i, k in enumerate(e):
            if k:
                t = emit("mul", t, power(i, k))
        total = t if total is None else emit("add", total, t)
    if total is None:
        total = emit("const", 0)
    return SLP(n, tuple(instrs), total)
