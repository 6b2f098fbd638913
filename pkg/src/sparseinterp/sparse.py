"""Sparse multivariate integer polynomials and their cyclic projections."""

import re

import gmpy2

from .arith import centered

__all__ = [
    "sigma",
    "SparsePoly",
    "CyclicPoly",
    "bit_size",
    "subtract",
    "project_direct",
    "serialize",
    "parse_poly",
    "PolyFormatError",
]


class PolyFormatError(ValueError):
    """Malformed sparse-polynomial text."""


def sigma(i):
    """Bit-size of an integer: least ``s`` with ``|i| < 2**s``."""
    return int(abs(i)).bit_length()


class SparsePoly:
    """Polynomial ``sum c_t x^{e_t}`` with lexicographically sorted distinct exponents.

    The constructor is strict: terms must already be sorted, distinct and
    carry non-zero coefficients.  Use :meth:`from_terms` to normalize an
    arbitrary term list.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=()):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        terms = tuple((tuple(int(x) for x in e), int(c)) for e, c in terms)
        prev = None
        for e, c in terms:
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if any(x < 0 for x in e):
                raise ValueError(f"exponent {e} has a negative entry")
            if c == 0:
                raise ValueError("zero coefficients are not stored")
            if prev is not None and not prev < e:
                raise ValueError("exponents must be strictly increasing")
            prev = e
        object.__setattr__(self, "nvars", int(nvars))
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    @classmethod
    def from_terms(cls, nvars, terms):
        """Sum like terms, drop zeros and sort."""
        acc = {}
        for e, c in terms:
            e = tuple(int(x) for x in e)
            acc[e] = acc.get(e, 0) + int(c)
        return cls(nvars, sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, ())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.terms))

    def __repr__(self):
        return f"SparsePoly({self.nvars}, {list(self.terms)!r})"

    def __add__(self, other):
        _same_nvars(self, other)
        return SparsePoly.from_terms(self.nvars, self.terms + other.terms)

    def __neg__(self):
        return SparsePoly(self.nvars, [(e, -c) for e, c in self.terms])

    def __sub__(self, other):
        return subtract(self, other)

    def as_dict(self):
        return dict(self.terms)

    def exponents(self):
        return [e for e, _ in self.terms]

    def coefficients(self):
        return [c for _, c in self.terms]

    def evaluate(self, point, m=None):
        """Value at ``point`` over the integers, or modulo ``m`` if given."""
        if len(point) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        total = 0
        if m is None:
            for e, c in self.terms:
                t = c
                for a, k in zip(point, e):
                    if k:
                        t *= a ** k
                total += t
            return total
        mm = gmpy2.mpz(m)
        pt = [gmpy2.mpz(a) % mm for a in point]
        for e, c in self.terms:
            t = gmpy2.mpz(c) % mm
            for a, k in zip(pt, e):
                if k:
                    t = t * gmpy2.powmod(a, k, mm) % mm
            total += t
        return int(total % mm)


def _same_nvars(f, g):
    if f.nvars != g.nvars:
        raise ValueError("polynomials have different numbers of variables")


def bit_size(f):
    """``sum over terms of sigma(c) + sum_j sigma(e_j)``."""
    return sum(sigma(c) + sum(sigma(x) for x in e) for e, c in f.terms)


def subtract(f, g):
    _same_nvars(f, g)
    return SparsePoly.from_terms(f.nvars, list(f.terms) + [(e, -c) for e, c in g.terms])


class CyclicPoly:
    """Element of ``Z[t]/(t^r - 1)`` (optionally modulo ``M``) stored sparsely."""

    __slots__ = ("r", "M", "entries")

    def __init__(self, r, entries=None, M=None):
        self.r = int(r)
        self.M = None if M is None else int(M)
        self.entries = {}
        for k, c in (entries or {}).items():
            if not 0 <= k < self.r:
                raise ValueError(f"exponent {k} is outside [0, {self.r})")
            c = int(c) if self.M is None else int(c) % self.M
            if c:
                self.entries[int(k)] = c

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, CyclicPoly):
            return NotImplemented
        return self.r == other.r and self.M == other.M and self.entries == other.entries

    def __repr__(self):
        return f"CyclicPoly(r={self.r}, M={self.M}, {dict(sorted(self.entries.items()))!r})"

    def __add__(self, other):
        if self.r != other.r or self.M != other.M:
            raise ValueError("incompatible cyclic polynomials")
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0) + c
        return CyclicPoly(self.r, out, self.M)

    def exponents(self):
        return sorted(self.entries)

    def centered(self):
        """Entries mapped to signed representatives (requires a modulus)."""
        if self.M is None:
            return dict(self.entries)
        return {k: centered(c, self.M) for k, c in self.entries.items()}


def project_direct(f, tau, r, M=None):
    """Image of ``f`` under ``x_i -> t^{tau_i}`` modulo ``t^r - 1`` (and ``M``)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if len(tau) != f.nvars:
        raise ValueError("tau has the wrong length")
    if any(not 1 <= t < r for t in tau):
        raise ValueError("tau entries must lie in {1, ..., r-1}")
    acc = {}
    for e, c in f.terms:
        k = sum(t * x for t, x in zip(tau, e)) % r
        acc[k] = acc.get(k, 0) + c
    return CyclicPoly(r, acc, M)


def serialize(f):
    lines = [f"nvars {f.nvars}"]
    for e, c in f.terms:
        lines.append(f"{c} : {' '.join(str(x) for x in e)}".rstrip())
    return "\n".join(lines) + "\n"


_INT = re.compile(r"^[+-]?\d+$")


def parse_poly(text):
    """Parse the line-oriented sparse format produced by :func:`serialize`."""
    nvars = None
    terms = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if nvars is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "nvars" or not parts[1].isdigit():
                raise PolyFormatError(f"line {lineno}: expected 'nvars <n>'")
            nvars = int(parts[1])
            continue
        if ":" not in line:
            raise PolyFormatError(f"line {lineno}: expected '<coeff> : <exponents>'")
        lhs, rhs = line.split(":", 1)
        lhs = lhs.strip()
        if not _INT.match(lhs):
            raise PolyFormatError(f"line {lineno}: bad coefficient {lhs!r}")
        coeff = int(lhs)
        if coeff == 0:
            raise PolyFormatError(f"line {lineno}: zero coefficient")
        exps = rhs.split()
        if len(exps) != nvars or not all(x.isdigit() for x in exps):
            raise PolyFormatError(f"line {lineno}: expected {nvars} non-negative exponents")
        e = tuple(int(x) for x in exps)
        if e in terms:
            raise PolyFormatError(f"line {lineno}: duplicate exponent {e}")
        terms[e] = coeff
    if nvars is None:
        raise PolyFormatError("missing 'nvars' header")
    return SparsePoly(nvars, sorted(terms.items()))
