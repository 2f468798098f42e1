"""Exact arithmetic in finite fields F_p[a]/(m(a)).

Elements are stored as integer codes: the coefficient vector (c_0, ..., c_{m-1})
of c_0 + c_1 a + ... + c_{m-1} a^{m-1} is encoded as sum(c_i * p**i).  The
encoding is canonical, so two elements are equal iff their codes are equal.
Bulk linear algebra works directly on arrays of codes through the numpy
lookup tables exposed by :class:`FieldSpec`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomials over F_p as coefficient lists, constant term first ----------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = f[-1] * inv_lead % p
        shift = len(f) - len(g)
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _trim(f)
    return f


def _pmulmod(f: Sequence[int], g: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pmod(out, m, p)


def _pgcd(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def is_irreducible(min_poly: Sequence[int], p: int) -> bool:
    """Rabin-style test: f of degree m is irreducible iff gcd(f, x^(p^i) - x) = 1
    for 1 <= i <= m // 2 (no factor of degree <= m/2)."""
    f = _trim([c % p for c in min_poly])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xp = [0, 1]
    for _ in range(m // 2):
        # xp <- xp^p mod f
        acc = [1]
        base = xp
        e = p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        xp = acc
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def default_min_poly(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree m over F_p, ordered by
    coefficient vector read constant term first."""
    if m == 1:
        return (0, 1)
    for code in range(p**m):
        coeffs = [(code // p**i) % p for i in range(m)] + [1]
        if coeffs[0] and is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[a]/(min_poly), min_poly monic of degree ext_degree.

    ``min_poly`` lists coefficients from the constant term upward.
    """

    p: int
    ext_degree: int = 1
    min_poly: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.ext_degree < 1:
            raise ValueError("ext_degree must be positive")
        mp = tuple(int(c) % self.p for c in self.min_poly) if self.min_poly else \
            default_min_poly(self.p, self.ext_degree)
        if len(mp) != self.ext_degree + 1 or mp[-1] != 1:
            raise ValueError(f"min_poly {mp} is not monic of degree {self.ext_degree}")
        if not is_irreducible(mp, self.p):
            raise ValueError(f"min_poly {mp} is reducible over F_{self.p}")
        object.__setattr__(self, "min_poly", mp)

    @property
    def q(self) -> int:
        return self.p**self.ext_degree

    @property
    def is_prime_field(self) -> bool:
        return self.ext_degree == 1

    def __repr__(self):
        if self.ext_degree == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.ext_degree}, min_poly={list(self.min_poly)})"

    # -- encoding ---------------------------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple((code // self.p**i) % self.p for i in range(self.ext_degree))

    def encode(self, value) -> int:
        """Code for an int (mapped through the prime field), a coefficient
        vector, or a FieldElement of this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value!r} is not in {self!r}")
            return value.code
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        coeffs = list(value)
        if len(coeffs) > self.ext_degree:
            raise ValueError(f"coefficient vector {coeffs} too long for {self!r}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.encode(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The adjoined root a (equal to 0 + 1*a); in a prime field, 1."""
        return FieldElement(self, self.p if self.ext_degree > 1 else 1)

    def all_elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    def nonzero_elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(1, self.q)]

    # -- tables -----------------------------------------------------------

    def _mul_codes_slow(self, a: int, b: int) -> int:
        prod = _pmulmod(list(self.coeffs(a)), list(self.coeffs(b)), self.min_poly, self.p)
        return self.encode(prod)

    @cached_property
    def add_table(self) -> list[list[int]]:
        q, p, m = self.q, self.p, self.ext_degree
        cs = [self.coeffs(c) for c in range(q)]
        return [[sum(((cs[a][i] + cs[b][i]) % p) * p**i for i in range(m)) for b in range(q)]
                for a in range(q)]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        q = self.q
        if self.ext_degree == 1:
            return [[a * b % q for b in range(q)] for a in range(q)]
        return [[self._mul_codes_slow(a, b) for b in range(q)] for a in range(q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.add_table[a].index(0) for a in range(self.q)]

    @cached_property
    def inv_table(self) -> list[int]:
        """inv_table[0] is 0 as a placeholder; callers guard zero."""
        inv = [0] * self.q
        for a in range(1, self.q):
            inv[a] = self.mul_table[a].index(1)
        return inv

    @cached_property
    def sub_table(self) -> list[list[int]]:
        return [[self.add_table[a][self.neg_table[b]] for b in range(self.q)]
                for a in range(self.q)]

    @cached_property
    def np_add(self) -> np.ndarray:
        return _frozen(np.array(self.add_table, dtype=np.int32))

    @cached_property
    def np_sub(self) -> np.ndarray:
        return _frozen(np.array(self.sub_table, dtype=np.int32))

    @cached_property
    def np_mul(self) -> np.ndarray:
        return _frozen(np.array(self.mul_table, dtype=np.int32))

    @cached_property
    def np_neg(self) -> np.ndarray:
        return _frozen(np.array(self.neg_table, dtype=np.int32))

    @cached_property
    def np_inv(self) -> np.ndarray:
        return _frozen(np.array(self.inv_table, dtype=np.int32))

    # -- scalar code arithmetic ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.inv_table[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul_table[acc][a]
            a = self.mul_table[a][a]
            e >>= 1
        return acc

    def dot(self, xs: Iterable[int], ys: Iterable[int]) -> int:
        if self.ext_degree == 1:
            return sum(x * y for x, y in zip(xs, ys)) % self.p
        acc = 0
        add, mul = self.add_table, self.mul_table
        for x, y in zip(xs, ys):
            if x and y:
                acc = add[acc][mul[x][y]]
        return acc

    def format_code(self, code: int) -> str:
        if self.ext_degree == 1:
            return str(code)
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs(code)))):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "a" if i == 1 else f"a^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {"p": self.p, "ext_degree": self.ext_degree, "min_poly": list(self.min_poly)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        return cls(int(data["p"]), int(data.get("ext_degree", 1)),
                   tuple(data.get("min_poly", ())))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def GF(p: int, m: int = 1, min_poly: Sequence[int] | None = None) -> FieldSpec:
    return FieldSpec(p, m, tuple(min_poly) if min_poly else ())


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise ValueError(f"code {self.code} out of range for {self.field!r}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else \
            FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else \
            FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else \
            FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else \
            FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(b)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return self.field.format_code(self.code)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def all_elements(F: FieldSpec) -> list[FieldElement]:
    return F.all_elements()


def multiplicative_order(a: FieldElement) -> int:
    if a.code == 0:
        raise ZeroDivisionError("zero has no multiplicative order")
    F = a.field
    acc, t = a.code, 1
    while acc != 1:
        acc = F.mul(acc, a.code)
        t += 1
    return t
