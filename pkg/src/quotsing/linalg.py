"""Exact dense linear algebra over a FieldSpec.

Two layers live here.  The array layer (``rref``, ``nullspace``, ``rank``,
``solve``) works on numpy arrays of field codes and is what the per-degree
invariant computations use.  The object layer (:class:`SquareMatrix`,
:class:`Subspace`) carries group elements and the subspaces they fix.

Vectors are column vectors: a matrix g acts on V = k^n by v -> g v.
"""

from __future__ import annotations

import itertools
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .field import FieldElement, FieldMismatchError, FieldSpec


class SingularMatrixError(ArithmeticError):
    pass


class OrderCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# array layer
# ---------------------------------------------------------------------------

def as_codes(F: FieldSpec, rows) -> np.ndarray:
    return np.array([[F.encode(x) for x in row] for row in rows], dtype=np.int32).reshape(
        len(rows), -1 if len(rows) else 0)


def rref(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    A = np.array(A, dtype=np.int32, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    nrows, ncols = A.shape
    if F.is_prime_field:
        return _rref_prime(A.astype(np.int64), F.p, F.inv_table)
    mul, sub, inv = F.np_mul, F.np_sub, F.np_inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = mul[inv[A[r, c]], A[r]]
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = sub[A[hit], mul[col[hit, None], A[r][None, :]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_prime(A: np.ndarray, p: int, inv: list[int]) -> tuple[np.ndarray, list[int]]:
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * inv[int(A[r, c])] % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - col[hit, None] * A[r][None, :]) % p
        pivots.append(c)
        r += 1
    return A[:r].astype(np.int32), pivots


def rank(F: FieldSpec, A: np.ndarray) -> int:
    if np.size(A) == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: FieldSpec, A: np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Canonical (rref) basis of {v : A v = 0}, one basis vector per row."""
    A = np.asarray(A, dtype=np.int32)
    if ncols is None:
        ncols = A.shape[1]
    if A.size == 0:
        return np.eye(ncols, dtype=np.int32)
    R, pivots = rref(F, A)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int32)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = F.neg_table[int(R[i, f])]
    if not free:
        return basis
    return rref(F, basis)[0]


def _matmul_mod_p(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] * (p - 1) ** 2 < 2**52:
        # float64 BLAS is exact below 2^53
        C = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
        return np.fmod(C, p).astype(np.int64)
    return np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64) % p


def matmul_codes(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of code arrays.

    Extension-field codes are split into coefficient planes over F_p, the
    planes multiplied mod p, and powers a^k with k >= m folded back with the
    minimal polynomial.
    """
    p, m = F.p, F.ext_degree
    if m == 1:
        return _matmul_mod_p(A, B, p).astype(np.int32)
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    Ap = [(A // p**i) % p for i in range(m)]
    Bp = [(B // p**i) % p for i in range(m)]
    C = [np.zeros((A.shape[0], B.shape[1]), dtype=np.int64) for _ in range(2 * m - 1)]
    for i in range(m):
        for j in range(m):
            C[i + j] += _matmul_mod_p(Ap[i], Bp[j], p)
    mp = F.min_poly
    for k in range(2 * m - 2, m - 1, -1):
        ck = C[k] % p
        for i in range(m):
            if mp[i]:
                C[k - m + i] -= mp[i] * ck
    out = np.zeros_like(C[0])
    for i in range(m - 1, -1, -1):
        out = out * p + C[i] % p
    return out.astype(np.int32)


def solve(F: FieldSpec, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b (b a vector), or None if inconsistent."""
    A = np.asarray(A, dtype=np.int32)
    b = np.asarray(b, dtype=np.int32).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, pivots = rref(F, aug)
    ncols = A.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int32)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, ncols]
    return x


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class SquareMatrix:
    """Immutable n x n matrix over a finite field, entries stored as codes.

    Equality and hashing use the row-major code tuple, which is canonical.
    """

    __slots__ = ("field", "n", "entries", "_hash")

    def __init__(self, field: FieldSpec, n: int, entries: Sequence[int]):
        entries = tuple(int(e) for e in entries)
        if len(entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(entries)}")
        self.field = field
        self.n = n
        self.entries = entries
        self._hash = hash(entries)

    # construction

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "SquareMatrix":
        rows = list(rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        return cls(field, n, [field.encode(x) for r in rows for x in r])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "SquareMatrix":
        return cls(field, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, field: FieldSpec, values) -> "SquareMatrix":
        values = [field.encode(v) for v in values]
        n = len(values)
        return cls(field, n, [values[i] if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_array(cls, field: FieldSpec, arr: np.ndarray) -> "SquareMatrix":
        arr = np.asarray(arr)
        return cls(field, arr.shape[0], arr.reshape(-1).tolist())

    def block_diag(self, other: "SquareMatrix") -> "SquareMatrix":
        n, m = self.n, other.n
        out = [0] * ((n + m) ** 2)
        for i in range(n):
            for j in range(n):
                out[i * (n + m) + j] = self.entries[i * n + j]
        for i in range(m):
            for j in range(m):
                out[(n + i) * (n + m) + n + j] = other.entries[i * m + j]
        return SquareMatrix(self.field, n + m, out)

    # access

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.entries[i * self.n + j])

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int32).reshape(self.n, self.n)

    def sort_key(self) -> tuple[int, ...]:
        return self.entries

    # comparison

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.entries == other.entries and self.field == other.field

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "SquareMatrix"):
        return self.entries < other.entries

    def __repr__(self):
        fmt = self.field.format_code
        return "[" + ", ".join("[" + ", ".join(fmt(x) for x in r) + "]" for r in self.rows()) + "]"

    # arithmetic

    def _check(self, other: "SquareMatrix"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch {self.n} vs {other.n}")

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check(other)
        return SquareMatrix(self.field, self.n, mul_entries(self.field, self.n, self.entries, other.entries))

    __mul__ = __matmul__

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check(other)
        add = self.field.add_table
        return SquareMatrix(self.field, self.n, [add[a][b] for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check(other)
        sub = self.field.sub_table
        return SquareMatrix(self.field, self.n, [sub[a][b] for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "SquareMatrix":
        c = self.field.encode(c)
        mul = self.field.mul_table
        return SquareMatrix(self.field, self.n, [mul[c][a] for a in self.entries])

    def transpose(self) -> "SquareMatrix":
        n = self.n
        return SquareMatrix(self.field, n, [self.entries[j * n + i] for i in range(n) for j in range(n)])

    def is_identity(self) -> bool:
        n = self.n
        return all(self.entries[i * n + j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def det(self) -> FieldElement:
        F, n = self.field, self.n
        A = self.rows()
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c]), None)
            if piv is None:
                return F.zero
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = F.neg(d)
            d = F.mul(d, A[c][c])
            ic = F.inv(A[c][c])
            for r in range(c + 1, n):
                if A[r][c]:
                    f = F.mul(A[r][c], ic)
                    A[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[r], A[c])]
        return FieldElement(F, d)

    def inverse(self) -> "SquareMatrix":
        F, n = self.field, self.n
        A = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.rows())]
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c]), None)
            if piv is None:
                raise SingularMatrixError(f"matrix {self!r} is singular")
            A[c], A[piv] = A[piv], A[c]
            ic = F.inv(A[c][c])
            A[c] = [F.mul(ic, a) for a in A[c]]
            for r in range(n):
                if r != c and A[r][c]:
                    f = A[r][c]
                    A[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[r], A[c])]
        return SquareMatrix(F, n, [x for row in A for x in row[n:]])

    def __pow__(self, e: int) -> "SquareMatrix":
        return power(self, e)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """g v for a column vector of codes."""
        F, n = self.field, self.n
        return tuple(F.dot(self.entries[i * n:(i + 1) * n], v) for i in range(n))


def mul_entries(F: FieldSpec, n: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Row-major product of two n x n code tuples."""
    if F.is_prime_field:
        p = F.p
        return tuple(sum(a[i * n + k] * b[k * n + j] for k in range(n)) % p
                     for i in range(n) for j in range(n))
    add, mul = F.add_table, F.mul_table
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            acc = 0
            for k in range(n):
                x = row[k]
                if x:
                    y = b[k * n + j]
                    if y:
                        acc = add[acc][mul[x][y]]
            out.append(acc)
    return tuple(out)


def mul(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    return a @ b


def inverse(m: SquareMatrix) -> SquareMatrix:
    return m.inverse()


def power(m: SquareMatrix, e: int) -> SquareMatrix:
    if e < 0:
        m, e = m.inverse(), -e
    acc = SquareMatrix.identity(m.field, m.n)
    base = m
    while e:
        if e & 1:
            acc = acc @ base
        base = base @ base
        e >>= 1
    return acc


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def element_order(g: SquareMatrix, cap: int | None = None) -> int:
    if cap is None:
        cap = gl_order(g.n, g.field.q)
    ident = tuple(SquareMatrix.identity(g.field, g.n).entries)
    acc = g.entries
    t = 1
    while acc != ident:
        acc = mul_entries(g.field, g.n, acc, g.entries)
        t += 1
        if t > cap:
            raise OrderCapExceeded(f"order of {g!r} exceeds {cap}")
    return t


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """Subspace of k^n stored by its reduced row echelon basis (canonical)."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: FieldSpec, ambient_dim: int, vectors: Iterable[Sequence[int]] = ()):
        vectors = [list(v) for v in vectors]
        if vectors:
            R, _ = rref(field, np.array(vectors, dtype=np.int32).reshape(len(vectors), ambient_dim))
            basis = tuple(tuple(int(x) for x in row) for row in R)
        else:
            basis = ()
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n)

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim, self.basis) == (other.ambient_dim, other.basis) and \
            self.field == other.field

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def sort_key(self):
        return (self.dim, self.basis)

    def __repr__(self):
        fmt = self.field.format_code
        vecs = ", ".join("(" + ",".join(fmt(x) for x in v) + ")" for v in self.basis)
        return f"<{vecs}>"

    def _check(self, other: "Subspace"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")

    def annihilator(self) -> np.ndarray:
        """Rows phi with phi . v = 0 for every v in the subspace."""
        n = self.ambient_dim
        if not self.basis:
            return np.eye(n, dtype=np.int32)
        return nullspace(self.field, np.array(self.basis, dtype=np.int32), n)

    def contains_vector(self, v: Sequence[int]) -> bool:
        ann = self.annihilator()
        if ann.shape[0] == 0:
            return True
        return not np.any(matmul_codes(self.field, ann, np.array(v, dtype=np.int32).reshape(-1, 1)))

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        n = self.ambient_dim
        ann = np.vstack([self.annihilator(), other.annihilator()])
        if ann.shape[0] == 0:
            return Subspace.full(self.field, n)
        return Subspace(self.field, n, nullspace(self.field, ann, n).tolist())

    def contains(self, other: "Subspace") -> bool:
        """True if other is a subspace of self."""
        self._check(other)
        return self.sum(other).dim == self.dim

    def is_invariant(self, g: SquareMatrix) -> bool:
        return all(self.contains_vector(g.apply(v)) for v in self.basis)

    def is_fixed_pointwise(self, g: SquareMatrix) -> bool:
        return all(g.apply(v) == tuple(v) for v in self.basis)

    def to_json(self) -> list:
        F = self.field
        return [[list(F.coeffs(x)) for x in v] for v in self.basis]


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def contains(a: Subspace, b: Subspace) -> bool:
    return a.contains(b)


def fixed_space(g: SquareMatrix) -> Subspace:
    A = (g - SquareMatrix.identity(g.field, g.n)).to_array()
    return Subspace(g.field, g.n, nullspace(g.field, A).tolist())


class ElementKind(str, Enum):
    IDENTITY = "identity"
    TRANSVECTION = "transvection"
    PSEUDOREFLECTION = "pseudoreflection_nontransvection"
    OTHER = "other"


def classify_element(g: SquareMatrix) -> ElementKind:
    """Rank-based: no eigenvalues are ever computed."""
    ident = SquareMatrix.identity(g.field, g.n)
    d = g - ident
    r = rank(g.field, d.to_array())
    if r == 0:
        return ElementKind.IDENTITY
    if r != 1:
        return ElementKind.OTHER
    if not any((d @ d).entries):
        return ElementKind.TRANSVECTION
    return ElementKind.PSEUDOREFLECTION


def is_pseudoreflection(g: SquareMatrix) -> bool:
    return classify_element(g) in (ElementKind.TRANSVECTION, ElementKind.PSEUDOREFLECTION)


def is_transvection(g: SquareMatrix) -> bool:
    return classify_element(g) is ElementKind.TRANSVECTION


def projective_points(F: FieldSpec, n: int) -> list[tuple[int, ...]]:
    """One representative per line of F^n: first nonzero coordinate is 1."""
    pts = []
    for lead in range(n):
        for tail in itertools.product(range(F.q), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return pts


def hyperplanes(F: FieldSpec, n: int) -> list[Subspace]:
    """All F-rational hyperplanes, as kernels of normalized functionals."""
    out = []
    for phi in projective_points(F, n):
        out.append(Subspace(F, n, nullspace(F, np.array([phi], dtype=np.int32)).tolist()))
    return out


def common_invariant_plane(g: SquareMatrix, h: SquareMatrix,
                           avoid: Subspace | None = None) -> Subspace | None:
    """A 2-dimensional subspace of k^3 invariant under g and h, or None.

    With ``avoid`` given, planes containing it are skipped.  The search runs
    over all q^2 + q + 1 rational planes.
    """
    if g.n != 3 or h.n != 3:
        raise ValueError("common_invariant_plane needs 3x3 matrices")
    for W in hyperplanes(g.field, 3):
        if avoid is not None and W.contains(avoid):
            continue
        if W.is_invariant(g) and W.is_invariant(h):
            return W
    return None


def adapted_basis(W: Subspace) -> SquareMatrix:
    """Invertible P whose first dim W columns are W's basis, the rest standard
    vectors completing it.  Conjugating by P puts W on the leading coordinates."""
    F, n = W.field, W.ambient_dim
    cols = [list(v) for v in W.basis]
    span = W
    for i in range(n):
        e = [1 if j == i else 0 for j in range(n)]
        if not span.contains_vector(e):
            cols.append(e)
            span = Subspace(F, n, cols)
    return SquareMatrix(F, n, [cols[j][i] for i in range(n) for j in range(n)])


def basis_from_columns(F: FieldSpec, columns: Sequence[Sequence[int]]) -> SquareMatrix:
    n = len(columns)
    P = SquareMatrix(F, n, [columns[j][i] for i in range(n) for j in range(n)])
    if P.det().code == 0:
        raise SingularMatrixError("columns are not a basis")
    return P


def block(m: SquareMatrix, rows: range, cols: range) -> SquareMatrix:
    n = m.n
    return SquareMatrix(m.field, len(rows), [m.entries[i * n + j] for i in rows for j in cols])
