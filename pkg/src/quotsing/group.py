"""Finite matrix groups stored as explicit element sets.

Everything downstream (fixators, kernels, distinguished subgroups) is a
filter over the element list, which is exact and cheap at the sizes in scope
(|G| up to a few times 10^4).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from .field import FieldSpec
from .linalg import (
    SquareMatrix,
    Subspace,
    adapted_basis,
    block,
    classify_element,
    element_order,
    fixed_space,
    is_pseudoreflection,
    is_transvection,
    mul_entries,
)

DEFAULT_CAP = 10**6


class GroupOrderCapExceeded(RuntimeError):
    pass


class NotInvariantError(ValueError):
    pass


class NotAComplementError(RuntimeError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class MatrixGroup:
    """A finite subgroup of GL(n, q) with its full, sorted element list."""

    def __init__(self, field: FieldSpec, dim: int, generators: Sequence[SquareMatrix],
                 elements: Iterable[tuple[int, ...]]):
        self.field = field
        self.dim = dim
        self.generators = tuple(generators)
        keys = sorted(set(elements))
        self.elements = tuple(SquareMatrix(field, dim, k) for k in keys)
        self._index = {k: i for i, k in enumerate(keys)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: SquareMatrix) -> bool:
        return g.entries in self._index

    def index(self, g: SquareMatrix) -> int:
        return self._index[g.entries]

    def keys(self) -> set[tuple[int, ...]]:
        return set(self._index)

    @property
    def identity(self) -> SquareMatrix:
        return SquareMatrix.identity(self.field, self.dim)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self):
        return f"MatrixGroup(order={self.order}, dim={self.dim}, field={self.field!r})"

    @cached_property
    def element_orders(self) -> dict[tuple[int, ...], int]:
        return {g.entries: element_order(g) for g in self.elements}

    def order_of(self, g: SquareMatrix) -> int:
        return self.element_orders[g.entries]

    def is_subgroup_of(self, other: "MatrixGroup") -> bool:
        return self.keys() <= other.keys()

    def subgroup(self, elements: Iterable[SquareMatrix]) -> "MatrixGroup":
        """Subgroup generated by the given elements of this group.

        Generators are chosen greedily in element order, skipping any element
        already in the span, so the stored generating set stays small.
        """
        gens: list[SquareMatrix] = []
        current = {self.identity.entries}
        for g in sorted(set(elements)):
            if g.entries in current:
                continue
            gens.append(g)
            current = _close(self.field, self.dim, [h.entries for h in gens], start=current)
        return MatrixGroup(self.field, self.dim, gens, current)

    def filter_subgroup(self, predicate) -> "MatrixGroup":
        """Subgroup of elements satisfying a predicate that is known to cut out
        a subgroup (fixators, kernels)."""
        chosen = [g for g in self.elements if predicate(g)]
        sub = self.subgroup(chosen)
        if sub.order != len(chosen):
            raise ValueError("predicate does not define a subgroup")
        return sub

    def conjugate(self, P: SquareMatrix) -> "MatrixGroup":
        """The group P^-1 G P."""
        Pi = P.inverse()
        gens = [Pi @ g @ P for g in self.generators]
        elems = [(Pi @ g @ P).entries for g in self.elements]
        return MatrixGroup(self.field, self.dim, gens, elems)

    def is_normal_subgroup(self, H: "MatrixGroup") -> bool:
        keys = H.keys()
        for g in self.generators:
            gi = g.inverse()
            for h in H.generators:
                if (g @ h @ gi).entries not in keys:
                    return False
        return H.is_subgroup_of(self)


def _close(F: FieldSpec, n: int, gens: Sequence[tuple[int, ...]],
           start: set | None = None, cap: int = DEFAULT_CAP, workers: int = 1) -> set:
    ident = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
    seen = set(start) if start else {ident}
    frontier = sorted(seen)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def expand(chunk):
        return [mul_entries(F, n, x, g) for x in chunk for g in gens]

    try:
        while frontier:
            if pool is not None:
                size = max(1, len(frontier) // workers)
                chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                products = itertools.chain.from_iterable(pool.map(expand, chunks))
            else:
                products = expand(frontier)
            new = []
            for y in products:
                if y not in seen:
                    seen.add(y)
                    new.append(y)
                    if len(seen) > cap:
                        raise GroupOrderCapExceeded(f"group order exceeds cap {cap}")
            frontier = new
    finally:
        if pool is not None:
            pool.shutdown()
    return seen


def closure(generators: Sequence[SquareMatrix], cap: int = DEFAULT_CAP, *,
            field: FieldSpec | None = None, dim: int | None = None,
            workers: int = 1) -> MatrixGroup:
    """The group generated by invertible matrices, by breadth-first closure."""
    generators = list(generators)
    if generators:
        field = generators[0].field
        dim = generators[0].n
    if field is None or dim is None:
        raise ValueError("closure of no generators needs field and dim")
    for g in generators:
        if g.field != field or g.n != dim:
            raise ValueError("generators must share field and dimension")
        if g.det().code == 0:
            raise ValueError(f"generator {g!r} is singular")
    elems = _close(field, dim, [g.entries for g in generators], cap=cap, workers=workers)
    return MatrixGroup(field, dim, generators, elems)


def trivial_group(field: FieldSpec, dim: int) -> MatrixGroup:
    return closure([], field=field, dim=dim)


def pseudoreflection_subgroup(G: MatrixGroup) -> MatrixGroup:
    """Subgroup generated by all pseudoreflections; the set is closed under
    conjugation, so this is already the normal closure."""
    return G.subgroup(g for g in G.elements if is_pseudoreflection(g))


def is_generated_by_pseudoreflections(G: MatrixGroup) -> bool:
    return pseudoreflection_subgroup(G).order == G.order


def _is_p_power(k: int, p: int) -> bool:
    if k <= 1:
        return False
    while k % p == 0:
        k //= p
    return k == 1


def p_subgroup(G: MatrixGroup) -> MatrixGroup:
    """G_p: the subgroup generated by the nonidentity elements of p-power order."""
    p = G.field.p
    return G.subgroup(g for g in G.elements if _is_p_power(G.order_of(g), p))


def fixator(G: MatrixGroup, W: Subspace) -> MatrixGroup:
    """Elements of G that fix every vector of W."""
    if W.ambient_dim != G.dim:
        raise ValueError("subspace lives in a different ambient space")
    return G.filter_subgroup(W.is_fixed_pointwise)


def transvections(G: MatrixGroup) -> list[SquareMatrix]:
    return [g for g in G.elements if is_transvection(g)]


# ---------------------------------------------------------------------------
# restriction to an invariant subspace / quotient by one
# ---------------------------------------------------------------------------

@dataclass
class Restriction:
    """Action of G on an invariant subspace W ("subspace") or on V/W
    ("quotient"), in the adapted basis whose leading vectors span W."""

    group: MatrixGroup
    subspace: Subspace
    mode: str
    basis: SquareMatrix
    image: MatrixGroup
    kernel: MatrixGroup

    def restrict(self, g: SquareMatrix) -> SquareMatrix:
        return _restrict(g, self.basis, self.subspace.dim, self.mode)


def _restrict(g: SquareMatrix, P: SquareMatrix, k: int, mode: str) -> SquareMatrix:
    h = P.inverse() @ g @ P
    if mode == "subspace":
        return block(h, range(k), range(k))
    return block(h, range(k, g.n), range(k, g.n))


def restriction_kernel(G: MatrixGroup, W: Subspace, mode: str = "subspace") -> Restriction:
    """Image of G acting on W (or on V/W) and the kernel of that map.

    The image lives in coordinates given by the adapted basis: W's echelon
    basis first, then standard vectors.  For W = <e1, e2> the subspace image is
    the upper-left block; for U = <e1> the quotient image is the lower-right one.
    """
    if mode not in ("subspace", "quotient"):
        raise ValueError(f"unknown mode {mode!r}")
    for g in G.generators:
        if not W.is_invariant(g):
            raise NotInvariantError(f"{W!r} is not invariant under {g!r}")
    P = adapted_basis(W)
    k = W.dim
    m = k if mode == "subspace" else G.dim - k
    images = [_restrict(g, P, k, mode) for g in G.generators]
    image = closure(images, field=G.field, dim=m)
    ident = SquareMatrix.identity(G.field, m)
    kernel = G.filter_subgroup(lambda g: _restrict(g, P, k, mode) == ident)
    return Restriction(G, W, mode, P, image, kernel)


def find_transvection_lifts(G: MatrixGroup, W: Subspace, targets: Sequence[SquareMatrix],
                            mode: str = "subspace") -> dict[SquareMatrix, SquareMatrix] | None:
    """For each target, the first transvection of G (in element order) whose
    restriction is that target.  None if some target has no such lift."""
    for g in G.generators:
        if not W.is_invariant(g):
            raise NotInvariantError(f"{W!r} is not invariant under {g!r}")
    P = adapted_basis(W)
    k = W.dim
    by_image: dict[SquareMatrix, SquareMatrix] = {}
    for g in transvections(G):
        by_image.setdefault(_restrict(g, P, k, mode), g)
    lifts = {}
    for t in targets:
        if t not in by_image:
            return None
        lifts[t] = by_image[t]
    return lifts


def noncommuting_transvection_pair(H: MatrixGroup) -> tuple[SquareMatrix, SquareMatrix] | None:
    """Two noncommuting transvections of H generating H, if any."""
    tv = transvections(H)
    for a, b in itertools.combinations(tv, 2):
        if a @ b == b @ a:
            continue
        if len(_close(H.field, H.dim, [a.entries, b.entries], cap=H.order)) == H.order:
            return a, b
    return None


# ---------------------------------------------------------------------------
# extension splitting
# ---------------------------------------------------------------------------

@dataclass
class ExtensionSplit:
    kernel: MatrixGroup
    complement: MatrixGroup
    lift_map: dict
    fixed_line: Subspace | None = None
    checks: dict = dc_field(default_factory=dict)


def split_extension(G: MatrixGroup, N: MatrixGroup, lift_map: dict) -> ExtensionSplit:
    """Complement to N generated by the lifted transvections, verified."""
    if not N.is_subgroup_of(G) or not G.is_normal_subgroup(N):
        raise NotAComplementError("kernel is not a normal subgroup of G")
    lifts = list(lift_map.values())
    C = closure(lifts, field=G.field, dim=G.dim)
    if not C.is_subgroup_of(G):
        raise NotAComplementError("lifts are not elements of G")
    common = [g for g in C.elements if g in N and not g.is_identity()]
    if common:
        raise NotAComplementError("kernel and complement intersect nontrivially", common[0])
    if N.order * C.order != G.order:
        raise NotAComplementError(
            f"|N|*|C| = {N.order}*{C.order} != |G| = {G.order}", (N.order, C.order))
    line = None
    if lifts:
        line = fixed_space(lifts[0])
        for g in lifts[1:]:
            line = line.intersect(fixed_space(g))
    return ExtensionSplit(N, C, dict(lift_map), line, {
        "kernel_order": N.order,
        "complement_order": C.order,
        "trivial_intersection": True,
        "order_product_matches": True,
    })


from .lift_identities import verify_lift_identities  # noqa: E402

__all__ = [
    "MatrixGroup", "closure", "trivial_group", "pseudoreflection_subgroup",
    "is_generated_by_pseudoreflections", "p_subgroup", "fixator", "transvections",
    "Restriction", "restriction_kernel", "find_transvection_lifts",
    "noncommuting_transvection_pair", "ExtensionSplit", "split_extension",
    "verify_lift_identities", "GroupOrderCapExceeded", "NotAComplementError",
    "NotInvariantError", "classify_element",
]
