"""Graded invariant spaces, minimal generators and the polynomiality decision.

The invariant ring S(V*)^G is computed one degree at a time.  At degree d the
invariants are the common fixed vectors of the generators' action matrices on
the degree-d piece.  Minimal generators are extracted greedily: the span of
products of generators found so far is computed, and the invariants outside
it are completed to a basis in graded-lex echelon order.

Deciding polynomiality:

* accept early once n algebraically independent generators have degree
  product |G| (independence certified by a nonzero Jacobian determinant);
* reject once more than n minimal generators have appeared;
* otherwise keep going to the generation bound n(|G| - 1), after which the
  count of minimal generators is final.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .field import FieldSpec
from .group import ExtensionSplit, MatrixGroup, closure
from .linalg import SquareMatrix, matmul_codes, nullspace, rank, rref, solve
from .poly import (
    Multipoly,
    act,
    action_matrix_on_degree,
    monomial_index,
    monomials,
    orbit_product,
    product_monomials,
)


class Status(str, Enum):
    POLYNOMIAL = "polynomial"
    NOT_POLYNOMIAL = "not_polynomial"
    INCONCLUSIVE = "inconclusive"


class Evidence(str, Enum):
    DEGREE_PRODUCT_MATCH = "degree_product_match"
    GENERATOR_COUNT_EXCEEDS_N = "generator_count_exceeds_n"
    BOUND_EXHAUSTED = "bound_exhausted"
    CAP_REACHED = "cap_reached"


def generation_bound(n: int, order: int) -> int:
    """Degree by which S(V*)^G is generated: n(|G| - 1) for n >= 2, and at
    least |G| so that the one-variable case x^|G| is covered."""
    if order <= 1:
        return 1
    return max(n * (order - 1), order)


def invariant_space(G: MatrixGroup, d: int) -> np.ndarray:
    """Canonical basis (rows, graded-lex coordinates) of the degree-d invariants."""
    F, n = G.field, G.dim
    dim = len(monomials(n, d))
    if d == 0:
        return np.ones((1, 1), dtype=np.int32)
    ident = np.eye(dim, dtype=np.int32)
    K = ident
    for g in G.generators:
        if K.shape[0] == 0:
            break
        A = F.np_sub[action_matrix_on_degree(g, d), ident]
        # solve (A) K^T c = 0 for the coefficient vectors c
        C = A if K is ident else matmul_codes(F, A, K.T)
        coeffs = nullspace(F, C, K.shape[0])
        if coeffs.shape[0] == K.shape[0]:
            continue
        K = rref(F, matmul_codes(F, coeffs, K))[0] if coeffs.shape[0] else coeffs.reshape(0, dim)
    return K


def invariant_dimension(G: MatrixGroup, d: int) -> int:
    return invariant_space(G, d).shape[0]


@dataclass
class GradedInvariantBasis:
    field: FieldSpec
    nvars: int
    pieces: dict[int, np.ndarray] = field(default_factory=dict)

    def dim(self, d: int) -> int:
        return self.pieces[d].shape[0]

    def polys(self, d: int) -> list[Multipoly]:
        return [Multipoly.from_vector(self.field, self.nvars, d, v) for v in self.pieces[d]]

    def dims(self) -> list[int]:
        return [self.dim(d) for d in sorted(self.pieces)]


def graded_invariants(G: MatrixGroup, max_degree: int) -> GradedInvariantBasis:
    out = GradedInvariantBasis(G.field, G.dim)
    for d in range(max_degree + 1):
        out.pieces[d] = invariant_space(G, d)
    return out


def jacobian_determinant(polys: Sequence[Multipoly]) -> Multipoly:
    n = len(polys)
    if n == 0:
        raise ValueError("empty Jacobian")
    nv = polys[0].nvars
    if nv != n:
        raise ValueError("Jacobian needs as many polynomials as variables")
    J = [[f.derivative(j) for j in range(n)] for f in polys]
    F = polys[0].field
    total = Multipoly.zero(F, n)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        term = Multipoly.constant(F, n, 1)
        for i in range(n):
            term = term * J[i][perm[i]]
            if term.is_zero():
                break
        total = total + (term if inversions % 2 == 0 else -term)
    return total


@lru_cache(maxsize=4096)
def _shift_index(nvars: int, d: int, exp: tuple[int, ...]) -> np.ndarray:
    """Positions of m * x^exp in the degree d + |exp| basis, for m of degree d."""
    target = monomial_index(nvars, d + sum(exp))
    idx = np.array([target[tuple(a + b for a, b in zip(m, exp))] for m in monomials(nvars, d)],
                   dtype=np.intp)
    idx.setflags(write=False)
    return idx


class _GeneratorSearch:
    """Degree-by-degree minimal generator extraction."""

    def __init__(self, G: MatrixGroup):
        self.G = G
        self.F = G.field
        self.n = G.dim
        self.basis = GradedInvariantBasis(G.field, G.dim)
        self.basis.pieces[0] = np.ones((1, 1), dtype=np.int32)
        self.generators: list[tuple[int, Multipoly]] = []
        self.degree = 0

    def _products_span(self, d: int) -> np.ndarray:
        F, n = self.F, self.n
        dim = len(monomials(n, d))
        blocks = []
        for e, g in self.generators:
            if e > d:
                continue
            B = self.basis.pieces[d - e]
            if B.shape[0] == 0:
                continue
            out = np.zeros((B.shape[0], dim), dtype=np.int32)
            for exp, c in g.terms.items():
                idx = _shift_index(n, d - e, exp)
                out[:, idx] = F.np_add[out[:, idx], F.np_mul[c, B]]
            blocks.append(out)
        if not blocks:
            return np.zeros((0, dim), dtype=np.int32)
        return rref(F, np.vstack(blocks))[0]

    def step(self) -> list[Multipoly]:
        d = self.degree + 1
        F = self.F
        inv = invariant_space(self.G, d)
        self.basis.pieces[d] = inv
        span = self._products_span(d)
        new = []
        current = span
        r = current.shape[0]
        if inv.shape[0] > r:
            for v in inv:
                cand = np.vstack([current, v[None, :]]) if current.size else v[None, :]
                if rank(F, cand) > r:
                    current = cand
                    r += 1
                    g = Multipoly.from_vector(F, self.n, d, v)
                    new.append(g)
                    self.generators.append((d, g))
                if r == inv.shape[0]:
                    break
        self.degree = d
        return new

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.generators]


@dataclass
class MinimalGenerators:
    generators: list[tuple[int, Multipoly]]
    dims: list[int]
    degree_cap: int
    complete: bool

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.generators]

    @property
    def cap_reached(self) -> bool:
        return not self.complete


def minimal_generators(G: MatrixGroup, degree_cap: int) -> MinimalGenerators:
    """Greedy minimal homogeneous generators in degrees 1..degree_cap.

    ``complete`` is True when the list is known to generate the whole ring:
    the cap reaches the generation bound, or the generators already form a
    certified polynomial generating set.
    """
    if degree_cap < 1:
        raise ValueError("degree_cap must be >= 1")
    s = _GeneratorSearch(G)
    for _ in range(degree_cap):
        s.step()
    complete = degree_cap >= generation_bound(G.dim, G.order)
    if not complete and len(s.generators) == G.dim:
        complete = _certified(G, s.generators)
    return MinimalGenerators(list(s.generators), s.basis.dims(), degree_cap, complete)


def _certified(G: MatrixGroup, gens: list[tuple[int, Multipoly]]) -> bool:
    if len(gens) != G.dim or math.prod(d for d, _ in gens) != G.order:
        return False
    return not jacobian_determinant([g for _, g in gens]).is_zero()


@dataclass
class PolynomialityVerdict:
    status: Status
    generators: list[tuple[int, Multipoly]]
    degree_bound_used: int
    evidence: Evidence
    group_order: int
    nvars: int
    witness_degree: int | None = None
    dims: list[int] = field(default_factory=list)

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.generators]

    @property
    def is_polynomial(self) -> bool:
        return self.status is Status.POLYNOMIAL

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "generator_degrees": self.degrees,
            "generators": [str(g) for _, g in self.generators],
            "degree_bound_used": self.degree_bound_used,
            "evidence": self.evidence.value,
            "witness_degree": self.witness_degree,
        }


def decide_polynomiality(G: MatrixGroup, degree_cap: int | str = "auto", *,
                         early_accept: bool = True) -> PolynomialityVerdict:
    """Is S(V*)^G a polynomial ring?  Never guesses: if the degree cap stops
    the search before a decision, the status is inconclusive."""
    n, order = G.dim, G.order
    bound = generation_bound(n, order)
    cap = bound if degree_cap in ("auto", None) else min(int(degree_cap), bound)
    s = _GeneratorSearch(G)

    def verdict(status, evidence, witness=None):
        return PolynomialityVerdict(status, list(s.generators), s.degree, evidence, order, n,
                                    witness, s.basis.dims())

    while s.degree < cap:
        new = s.step()
        if len(s.generators) > n:
            return verdict(Status.NOT_POLYNOMIAL, Evidence.GENERATOR_COUNT_EXCEEDS_N, s.degree)
        if early_accept and new and _certified(G, s.generators):
            return verdict(Status.POLYNOMIAL, Evidence.DEGREE_PRODUCT_MATCH)
    if cap < bound:
        return verdict(Status.INCONCLUSIVE, Evidence.CAP_REACHED)
    if len(s.generators) != n or math.prod(s.degrees) != order:
        raise AssertionError(
            f"generation bound reached with degrees {s.degrees} for |G| = {order}, n = {n}")
    return verdict(Status.POLYNOMIAL, Evidence.BOUND_EXHAUSTED)


def series_coefficients(degrees: Sequence[int], upto: int) -> list[int]:
    """Coefficients of prod 1/(1 - t^d_i) up to t^upto."""
    c = [1] + [0] * upto
    for d in degrees:
        for k in range(d, upto + 1):
            c[k] += c[k - d]
    return c


# ---------------------------------------------------------------------------
# the unipotent kernels of the three-dimensional extensions
# ---------------------------------------------------------------------------

class KernelShapeError(ValueError):
    pass


@dataclass
class KernelInvariants:
    kind: str
    f1: Multipoly
    f2: Multipoly
    f3: Multipoly
    verdict: PolynomialityVerdict | None = None

    @property
    def polys(self) -> list[Multipoly]:
        return [self.f1, self.f2, self.f3]

    @property
    def degrees(self) -> list[int]:
        return [f.degree for f in self.polys]


def _plane_kernel_shape(g: SquareMatrix) -> bool:
    e = g.entries
    return e[6:] == (0, 0, 1) and (e[0], e[1], e[3], e[4]) == (1, 0, 0, 1)


def _line_kernel_shape(g: SquareMatrix) -> bool:
    e = g.entries
    return e[0] == 1 and e[3:] == (0, 1, 0, 0, 0, 1)


def unipotent_kernel_invariants(N: MatrixGroup, kind: str) -> KernelInvariants:
    """Generators (f1, f2, f3) of the invariants of a translation-type kernel.

    ``plane_kernel``: N = {[[1,0,a],[0,1,b],[0,0,1]]}.  f3 = z and f1, f2 are
    minimal generators with no pure power of z.
    ``line_kernel``: N = {[[1,a,b],[0,1,0],[0,0,1]]}.  f1 is the product of
    g . x over N, f2 = y, f3 = z.
    """
    if N.dim != 3:
        raise KernelShapeError("kernel must act on a 3-dimensional space")
    F = N.field
    x, y, z = Multipoly.variables(F, 3)
    if kind == "line_kernel":
        bad = [g for g in N.elements if not _line_kernel_shape(g)]
        if bad:
            raise KernelShapeError(f"{bad[0]!r} is not of line-kernel shape")
        out = KernelInvariants(kind, orbit_product(N.elements, x), y, z)
        for g in N.generators:
            for f in out.polys:
                if act(g, f) != f:
                    raise AssertionError(f"{f} is not N-invariant")
        return out
    if kind != "plane_kernel":
        raise ValueError(f"unknown kernel kind {kind!r}")
    bad = [g for g in N.elements if not _plane_kernel_shape(g)]
    if bad:
        raise KernelShapeError(f"{bad[0]!r} is not of plane-kernel shape")
    verdict = decide_polynomiality(N)
    if not verdict.is_polynomial:
        raise AssertionError(f"kernel invariants are not polynomial: {verdict.status}")
    linear = [g for d, g in verdict.generators if d == 1]
    others = [g for d, g in verdict.generators if d > 1]
    # pick z first among the linear generators, then an echelon complement
    vecs = [z.to_vector(1)] + [g.to_vector(1) for g in linear]
    keep = [z]
    cur = np.array([vecs[0]], dtype=np.int32)
    for v, g in zip(vecs[1:], linear):
        cand = np.vstack([cur, v[None, :]])
        if rank(F, cand) > cur.shape[0]:
            cur = cand
            keep.append(g)
    if len(keep) != len(linear):
        raise AssertionError("z is not among the linear kernel invariants")
    rest = keep[1:] + others
    rest = [_drop_z_power(f) for f in rest]
    f1, f2 = rest
    return KernelInvariants(kind, f1, f2, z, verdict)


def _drop_z_power(f: Multipoly) -> Multipoly:
    d = f.degree
    e = (0, 0, d)
    if e in f.terms:
        return Multipoly(f.field, f.nvars, {k: v for k, v in f.terms.items() if k != e})
    return f


# ---------------------------------------------------------------------------
# the action of a complement on V/N
# ---------------------------------------------------------------------------

@dataclass
class InducedAction:
    matrices: list[SquareMatrix]           # M with h . f_i = sum_j M_ij f_j
    linear: bool
    witnesses: list[str]
    blocks: list[int]
    third_coordinate_fixed: bool
    induced_group: MatrixGroup | None = None
    induced_verdict: PolynomialityVerdict | None = None

    @property
    def decomposable(self) -> bool:
        return len(self.blocks) > 1

    def to_json(self) -> dict:
        return {
            "linear": self.linear,
            "decomposable": self.decomposable,
            "blocks": self.blocks,
            "third_coordinate_fixed": self.third_coordinate_fixed,
            "matrices": [m.rows() for m in self.matrices],
            "witnesses": self.witnesses,
            "induced_group_order": self.induced_group.order if self.induced_group else None,
            "induced_polynomiality": self.induced_verdict.status.value
            if self.induced_verdict else None,
        }


def _express(target: Multipoly, fs: Sequence[Multipoly]):
    """Coefficients of target as a polynomial in fs (weighted-homogeneous).

    Returns (linear coefficients per f_j, list of nonlinear monomials with a
    nonzero coefficient) or None if target is not in k[fs].
    """
    F = target.field
    d = target.degree
    degs = [f.degree for f in fs]
    exps = product_monomials(degs, d)
    if not exps:
        return None
    cols = []
    for a in exps:
        m = Multipoly.constant(F, target.nvars, 1)
        for f, k in zip(fs, a):
            if k:
                m = m * f**k
        cols.append(m.to_vector(d))
    A = np.array(cols, dtype=np.int32).T
    sol = solve(F, A, target.to_vector(d))
    if sol is None:
        return None
    lin = [0] * len(fs)
    nonlinear = []
    for a, c in zip(exps, sol):
        if not c:
            continue
        if sum(a) == 1:
            lin[a.index(1)] = int(c)
        else:
            nonlinear.append(a)
    return lin, nonlinear


def _blocks(mats: Sequence[SquareMatrix], n: int) -> list[int]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for M in mats:
        for i in range(n):
            for j in range(n):
                if i != j and M.entries[i * n + j]:
                    parent[find(i)] = find(j)
    sizes: dict[int, int] = {}
    for i in range(n):
        sizes[find(i)] = sizes.get(find(i), 0) + 1
    return sorted(sizes.values(), reverse=True)


def induced_action(split: ExtensionSplit, kernel_invariants: KernelInvariants,
                   decide_induced: bool = True) -> InducedAction:
    """Matrices of the complement's generators acting on (f1, f2, f3).

    The complement must be given in coordinates where it preserves the kernel
    invariants' shape (block form).  Anything that is not a linear
    recombination of the f_j is reported as a witness, not raised.
    """
    fs = kernel_invariants.polys
    F = fs[0].field
    mats = []
    witnesses = []
    linear = True
    gens = list(split.complement.generators)
    if not gens:
        gens = [split.complement.identity]
    for h in gens:
        rows = []
        for i, f in enumerate(fs):
            img = act(h, f)
            res = _express(img, fs)
            if res is None:
                linear = False
                witnesses.append(f"h={h!r}: h.f{i + 1} is not in k[f1,f2,f3]")
                rows.append([0, 0, 0])
                continue
            lin, nonlinear = res
            if nonlinear:
                linear = False
                witnesses.append(f"h={h!r}: h.f{i + 1} has nonlinear terms {nonlinear}")
            rows.append(lin)
        mats.append(SquareMatrix(F, 3, [c for r in rows for c in r]))
    blocks = _blocks(mats, 3)
    third_fixed = all(M.entries[6:] == (0, 0, 1) and M.entries[2] == 0 and M.entries[5] == 0
                      for M in mats)
    out = InducedAction(mats, linear, witnesses, blocks, third_fixed)
    if linear and decide_induced:
        try:
            acting = [M.inverse() for M in mats]
        except ArithmeticError:
            out.witnesses.append("induced matrix is singular")
            out.linear = False
            return out
        out.induced_group = closure(acting, field=F, dim=3)
        out.induced_verdict = decide_polynomiality(out.induced_group)
    return out
