"""Sparse multivariate polynomials over a finite field and the linear action
of matrices on them.

Action convention: a matrix g acts on V = k^n by v -> g v and on functions by
(g . f)(v) = f(g^-1 v).  This is a left action, (g h) . f = g . (h . f), and on
coordinates it substitutes x_i -> sum_j (g^-1)_ij x_j.  With it the unipotent
t = [[1,1],[0,1]] fixes y and sends x to x - y, so x(x+y)(x+2y) and y are
t-invariant over F_3.

Monomial order: graded lexicographic with x > y > z (x_0 > x_1 > ...), highest
degree first.  Per-degree coefficient vectors follow the same order.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .field import FieldElement, FieldMismatchError, FieldSpec
from .linalg import SquareMatrix

VAR_NAMES = ("x", "y", "z")

Exponent = tuple[int, ...]


def _mono_key(e: Exponent):
    return (-sum(e), tuple(-a for a in e))


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[Exponent, ...]:
    """Degree-d monomials in graded-lex order (x^d first)."""
    if nvars == 0:
        return ((),) if d == 0 else ()
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict[Exponent, int]:
    return {m: i for i, m in enumerate(monomials(nvars, d))}


class GradedBasis:
    """The monomial basis of the degree-d piece."""

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.monomials = monomials(nvars, degree)
        self.index = monomial_index(nvars, degree)

    @property
    def dimension(self) -> int:
        return len(self.monomials)


class Multipoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping[Exponent, int] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms: dict[Exponent, int] = {e: c for e, c in (terms or {}).items() if c}

    # construction

    @classmethod
    def zero(cls, field: FieldSpec, nvars: int) -> "Multipoly":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c) -> "Multipoly":
        return cls(field, nvars, {(0,) * nvars: field.encode(c)})

    @classmethod
    def var(cls, field: FieldSpec, nvars: int, i: int) -> "Multipoly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def variables(cls, field: FieldSpec, nvars: int) -> list["Multipoly"]:
        return [cls.var(field, nvars, i) for i in range(nvars)]

    @classmethod
    def linear_form(cls, field: FieldSpec, coeffs: Sequence[int]) -> "Multipoly":
        """sum_j c_j x_j with the c_j given as field codes."""
        n = len(coeffs)
        return cls(field, n, {tuple(1 if k == j else 0 for k in range(n)): int(c)
                              for j, c in enumerate(coeffs) if c})

    @classmethod
    def from_vector(cls, field: FieldSpec, nvars: int, d: int, vec) -> "Multipoly":
        mons = monomials(nvars, d)
        return cls(field, nvars, {mons[i]: int(c) for i, c in enumerate(vec) if c})

    def to_vector(self, d: int | None = None) -> np.ndarray:
        if d is None:
            d = self.degree
        idx = monomial_index(self.nvars, d)
        v = np.zeros(len(idx), dtype=np.int32)
        for e, c in self.terms.items():
            if sum(e) != d:
                raise ValueError(f"polynomial is not homogeneous of degree {d}")
            v[idx[e]] = c
        return v

    # basic properties

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, e: Exponent) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(e), 0))

    def __eq__(self, other):
        if isinstance(other, Multipoly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, int):
            return self == Multipoly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "Multipoly":
        if isinstance(other, Multipoly):
            if other.field != self.field or other.nvars != self.nvars:
                raise FieldMismatchError("polynomials over different rings")
            return other
        if isinstance(other, (int, FieldElement)):
            return Multipoly.constant(self.field, self.nvars, other)
        raise TypeError(f"cannot combine Multipoly with {type(other).__name__}")

    # arithmetic

    def __add__(self, other) -> "Multipoly":
        other = self._coerce(other)
        add = self.field.add_table
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = add[out.get(e, 0)][c]
        return Multipoly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Multipoly":
        neg = self.field.neg_table
        return Multipoly(self.field, self.nvars, {e: neg[c] for e, c in self.terms.items()})

    def __sub__(self, other) -> "Multipoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Multipoly":
        return self._coerce(other) - self

    def scale(self, c) -> "Multipoly":
        c = self.field.encode(c)
        mul = self.field.mul_table
        return Multipoly(self.field, self.nvars, {e: mul[c][v] for e, v in self.terms.items()})

    def __mul__(self, other) -> "Multipoly":
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._coerce(other)
        add, mul = self.field.add_table, self.field.mul_table
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            row = mul[c1]
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = add[out.get(e, 0)][row[c2]]
        return Multipoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Multipoly":
        if k < 0:
            raise ValueError("negative power")
        acc = Multipoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def derivative(self, i: int) -> "Multipoly":
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                k = F.mul(c, e[i] % F.p)
                if k:
                    e2 = list(e)
                    e2[i] -= 1
                    out[tuple(e2)] = k
        return Multipoly(F, self.nvars, out)

    def evaluate(self, point: Sequence[int]) -> FieldElement:
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term = F.mul(term, F.pow(x, a))
            acc = F.add(acc, term)
        return FieldElement(F, acc)

    def substitute(self, images: Sequence["Multipoly"]) -> "Multipoly":
        """f(images[0], images[1], ...); images may live in another ring."""
        if len(images) != self.nvars:
            raise ValueError("wrong number of substitutions")
        if not images:
            return self
        tgt = images[0]
        powers: list[dict[int, Multipoly]] = [{0: Multipoly.constant(tgt.field, tgt.nvars, 1)}
                                             for _ in images]

        def pw(i, a):
            cache = powers[i]
            if a not in cache:
                cache[a] = pw(i, a - 1) * images[i]
            return cache[a]

        acc = Multipoly.zero(tgt.field, tgt.nvars)
        for e, c in sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0])):
            term = Multipoly(tgt.field, tgt.nvars, {(0,) * tgt.nvars: c})
            for i, a in enumerate(e):
                if a:
                    term = term * pw(i, a)
            acc = acc + term
        return acc

    def homogeneous_part(self, d: int) -> "Multipoly":
        return Multipoly(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    # rendering

    def var_names(self) -> list[str]:
        if self.nvars <= len(VAR_NAMES):
            return list(VAR_NAMES[:self.nvars])
        return [f"x{i}" for i in range(self.nvars)]

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.var_names()
        F = self.field
        parts = []
        for e in sorted(self.terms, key=_mono_key):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            cs = F.format_code(c)
            if F.ext_degree > 1 and c >= F.p and mono:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Multipoly({self})"


def variables(field: FieldSpec, nvars: int) -> list[Multipoly]:
    return Multipoly.variables(field, nvars)


def dual_images(g: SquareMatrix) -> list[Multipoly]:
    """Images of the coordinate functions under g: x_i -> sum_j (g^-1)_ij x_j."""
    gi = g.inverse()
    rows = gi.rows()
    return [Multipoly.linear_form(g.field, rows[i]) for i in range(g.n)]


def act(g: SquareMatrix, f: Multipoly) -> Multipoly:
    if g.n != f.nvars:
        raise ValueError(f"matrix of size {g.n} cannot act on {f.nvars} variables")
    return f.substitute(dual_images(g))


_ACTION_CACHE: dict[tuple[SquareMatrix, int], np.ndarray] = {}


@lru_cache(maxsize=None)
def _shift(nvars: int, d: int, j: int) -> np.ndarray:
    """Index map: degree-(d-1) monomial m -> index of x_j * m in degree d."""
    idx = monomial_index(nvars, d)
    out = []
    for m in monomials(nvars, d - 1):
        e = list(m)
        e[j] += 1
        out.append(idx[tuple(e)])
    return np.array(out, dtype=np.int64)


@lru_cache(maxsize=None)
def _peel(nvars: int, d: int):
    """Split degree-d monomials m = x_i * m' with i the first variable present.
    Returns, per i, (column indices of m, indices of m' in degree d-1)."""
    prev = monomial_index(nvars, d - 1)
    groups = {}
    for k, m in enumerate(monomials(nvars, d)):
        i = next(j for j, a in enumerate(m) if a)
        e = list(m)
        e[i] -= 1
        cols, srcs = groups.setdefault(i, ([], []))
        cols.append(k)
        srcs.append(prev[tuple(e)])
    return {i: (np.array(c, dtype=np.int64), np.array(s, dtype=np.int64))
            for i, (c, s) in groups.items()}


def action_matrix_on_degree(g: SquareMatrix, d: int) -> np.ndarray:
    """Matrix (field codes) of f -> g . f on the degree-d piece; column k holds
    the image of the k-th monomial.  Read-only; cached per (g, d)."""
    key = (g, d)
    if key in _ACTION_CACHE:
        return _ACTION_CACHE[key]
    F, n = g.field, g.n
    start = d
    while start > 0 and (g, start - 1) not in _ACTION_CACHE:
        start -= 1
    if start == 0:
        M0 = np.ones((1, 1), dtype=np.int32)
        M0.setflags(write=False)
        _ACTION_CACHE[(g, 0)] = M0
        start = 1
    forms = g.inverse().rows()
    add, mul = F.np_add, F.np_mul
    for e in range(start, d + 1):
        prev = _ACTION_CACHE[(g, e - 1)]
        dim = len(monomials(n, e))
        M = np.zeros((dim, dim), dtype=np.int32)
        for i, (cols, srcs) in _peel(n, e).items():
            sub = prev[:, srcs]
            for j in range(n):
                c = forms[i][j]
                if c:
                    rows = _shift(n, e, j)
                    M[np.ix_(rows, cols)] = add[M[np.ix_(rows, cols)], mul[c, sub]]
        M.setflags(write=False)
        _ACTION_CACHE[(g, e)] = M
    return _ACTION_CACHE[key]


def clear_action_cache():
    _ACTION_CACHE.clear()


def orbit_product(elements: Iterable[SquareMatrix], f: Multipoly) -> Multipoly:
    """Product of g . f over the given elements."""
    acc = Multipoly.constant(f.field, f.nvars, 1)
    for g in elements:
        acc = acc * act(g, f)
    return acc


class NotInvariantPolynomial(ValueError):
    pass


def right_coset_representatives(G, H) -> list[SquareMatrix]:
    """One representative g for each right coset H g, in element order."""
    covered: set = set()
    reps = []
    for g in G.elements:
        if g.entries in covered:
            continue
        reps.append(g)
        for h in H.elements:
            covered.add((h @ g).entries)
    return reps


def relative_norm(G, H, f: Multipoly) -> Multipoly:
    """prod over right cosets H g of f o g, where (f o g)(v) = f(g v) = (g^-1 . f)(v).

    Well defined because f is H-invariant; the result is G-invariant.
    """
    for h in H.generators:
        if act(h, f) != f:
            raise NotInvariantPolynomial(f"{f} is not invariant under {h!r}")
    acc = Multipoly.constant(f.field, f.nvars, 1)
    for g in right_coset_representatives(G, H):
        acc = acc * act(g.inverse(), f)
    return acc


def product_monomials(degrees: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Exponent vectors a with sum a_i * degrees[i] == d."""
    out = []

    def rec(i, remaining, acc):
        if i == len(degrees):
            if remaining == 0:
                out.append(tuple(acc))
            return
        for a in range(remaining // degrees[i], -1, -1):
            rec(i + 1, remaining - a * degrees[i], acc + [a])

    rec(0, d, [])
    return out


__all__ = [
    "Multipoly", "GradedBasis", "monomials", "monomial_index", "act", "dual_images",
    "action_matrix_on_degree", "orbit_product", "relative_norm", "variables",
    "right_coset_representatives", "product_monomials", "NotInvariantPolynomial",
]
