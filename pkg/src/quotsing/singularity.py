"""Smooth / isolated / nonisolated verdicts for V/G.

V/G is smooth at the image of a point v exactly when the stabilizer of v
has a polynomial invariant ring.  Stabilizers of nonzero points are
fixators of subspaces, and a point that is generic in a subspace U has
stabilizer fix(U).  The finitely many subspaces that can occur as fixed
spaces are the intersections of the Fix(g), g != 1, so it suffices to decide
polynomiality of the fixator of each member of that lattice.  Nothing here
needs a field extension: every lattice member is the kernel of a matrix with
entries in the base field, and its fixator is read off directly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .group import (
    ExtensionSplit,
    MatrixGroup,
    NotAComplementError,
    find_transvection_lifts,
    fixator,
    is_generated_by_pseudoreflections,
    noncommuting_transvection_pair,
    p_subgroup,
    pseudoreflection_subgroup,
    restriction_kernel,
    split_extension,
)
from .invariants import (
    InducedAction,
    KernelInvariants,
    PolynomialityVerdict,
    Status,
    decide_polynomiality,
    induced_action,
    unipotent_kernel_invariants,
)
from .linalg import (
    SquareMatrix,
    Subspace,
    basis_from_columns,
    common_invariant_plane,
    fixed_space,
    hyperplanes,
    projective_points,
    rank,
)


class Verdict(str, Enum):
    SMOOTH = "smooth"
    ISOLATED = "isolated"
    NONISOLATED = "nonisolated"
    INCONCLUSIVE = "inconclusive"


class MainGenCase(str, Enum):
    IRREDUCIBLE = "irreducible"
    INVARIANT_LINE = "invariant_line"
    INVARIANT_PLANE_TRANSVECTIVE = "invariant_plane_transvective"
    OTHER = "other"


class PreconditionError(ValueError):
    pass


def _subspace_key(U: Subspace):
    return (-U.dim, U.sort_key())


def fixed_space_lattice(G: MatrixGroup) -> list[Subspace]:
    """Nonzero intersections of fixed spaces of nonidentity elements, sorted
    by decreasing dimension then by echelon basis."""
    seen: set[Subspace] = set()
    for g in G.elements:
        if g.is_identity():
            continue
        U = fixed_space(g)
        if U.dim:
            seen.add(U)
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                c = a.intersect(b)
                if c.dim and c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    return sorted(seen, key=_subspace_key)


def stabilizer(G: MatrixGroup, v: Sequence[int]) -> MatrixGroup:
    v = tuple(int(c) for c in v)
    return G.filter_subgroup(lambda g: g.apply(v) == v)


@dataclass
class FixatorRecord:
    subspace: Subspace
    fixator_order: int
    verdict: PolynomialityVerdict

    def to_json(self) -> dict:
        return {
            "subspace_basis": self.subspace.to_json(),
            "fixator_order": self.fixator_order,
            "polynomiality": self.verdict.status.value,
            "generator_degrees": self.verdict.degrees,
        }


class _VerdictCache:
    """Polynomiality verdicts keyed by the element set of the group, so that
    subspaces sharing a fixator are decided once."""

    def __init__(self, degree_cap):
        self.degree_cap = degree_cap
        self._cache: dict[frozenset, PolynomialityVerdict] = {}

    def __call__(self, H: MatrixGroup) -> PolynomialityVerdict:
        key = frozenset(H.keys())
        if key not in self._cache:
            self._cache[key] = decide_polynomiality(H, self.degree_cap)
        return self._cache[key]


@dataclass
class SingularityReport:
    group_order: int
    pseudoreflection_subgroup_order: int
    p_subgroup_order: int
    origin: PolynomialityVerdict
    fixator_lattice: list[FixatorRecord]
    verdict: Verdict
    witness: Subspace | None = None
    reduction: "ReductionRecord | None" = None
    kemper_malle: "KemperMalleReport | None" = None
    main_gen: "CaseRecord | None" = None

    @property
    def origin_smooth(self) -> bool:
        return self.origin.is_polynomial

    @property
    def main_gen_case(self) -> MainGenCase | None:
        return self.main_gen.case if self.main_gen else None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "group_order": self.group_order,
            "h_order": self.pseudoreflection_subgroup_order,
            "gp_order": self.p_subgroup_order,
            "origin": self.origin.to_json(),
            "fixators": [r.to_json() for r in self.fixator_lattice],
            "witness": self.witness.to_json() if self.witness is not None else None,
            "reduction": self.reduction.to_json() if self.reduction else None,
            "case": self.main_gen.to_json() if self.main_gen else None,
            "kemper_malle": self.kemper_malle.to_json() if self.kemper_malle else None,
        }


def _assemble(origin: PolynomialityVerdict, records: list[FixatorRecord]):
    statuses = [origin.status] + [r.verdict.status for r in records]
    if Status.INCONCLUSIVE in statuses:
        return Verdict.INCONCLUSIVE, None
    for r in records:
        if r.verdict.status is Status.NOT_POLYNOMIAL:
            return Verdict.NONISOLATED, r.subspace
    if origin.is_polynomial:
        return Verdict.SMOOTH, None
    return Verdict.ISOLATED, None


def classify(G: MatrixGroup, degree_cap="auto", *, workers: int = 1,
             _cache: _VerdictCache | None = None) -> SingularityReport:
    cache = _cache or _VerdictCache(degree_cap)
    origin = cache(G)
    lattice = fixed_space_lattice(G)
    fixators = [fixator(G, U) for U in lattice]
    if workers > 1:
        # warm the cache in parallel; assembly below stays sequential
        distinct = {frozenset(H.keys()): H for H in fixators}
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda H: decide_polynomiality(H, degree_cap),
                                    distinct.values()))
        for key, v in zip(distinct, results):
            cache._cache.setdefault(key, v)
    records = [FixatorRecord(U, H.order, cache(H)) for U, H in zip(lattice, fixators)]
    verdict, witness = _assemble(origin, records)
    return SingularityReport(
        group_order=G.order,
        pseudoreflection_subgroup_order=pseudoreflection_subgroup(G).order,
        p_subgroup_order=p_subgroup(G).order,
        origin=origin,
        fixator_lattice=records,
        verdict=verdict,
        witness=witness,
    )


def point_status(G: MatrixGroup, v: Sequence[int], degree_cap="auto") -> Status:
    """Polynomiality of the stabilizer of v: polynomial means V/G is smooth
    at the image of v."""
    return decide_polynomiality(stabilizer(G, v), degree_cap).status


def rational_points(G: MatrixGroup) -> list[tuple[int, ...]]:
    """One nonzero point per rational line (g fixes v iff it fixes cv)."""
    return projective_points(G.field, G.dim)


# ---------------------------------------------------------------------------
# Kemper-Malle condition
# ---------------------------------------------------------------------------

def is_absolutely_irreducible(G: MatrixGroup) -> bool:
    """By Burnside: the group spans the full matrix algebra."""
    n = G.dim
    A = np.array([g.entries for g in G.elements], dtype=np.int32)
    return rank(G.field, A) == n * n


@dataclass
class KemperMalleReport:
    generated_by_pseudoreflections: bool
    all_fixators_polynomial: bool | None
    invariants_polynomial: bool | None
    absolutely_irreducible: bool
    failing_subspaces: list[Subspace] = field(default_factory=list)

    @property
    def condition(self) -> bool | None:
        if self.all_fixators_polynomial is None:
            return None if self.generated_by_pseudoreflections else False
        return self.generated_by_pseudoreflections and self.all_fixators_polynomial

    @property
    def consistent(self) -> bool | None:
        """Does polynomiality of S(V*)^G agree with the condition?  None when
        either side is undecided."""
        if self.condition is None or self.invariants_polynomial is None:
            return None
        return self.condition == self.invariants_polynomial

    def to_json(self) -> dict:
        return {
            "generated_by_pseudoreflections": self.generated_by_pseudoreflections,
            "all_fixators_polynomial": self.all_fixators_polynomial,
            "condition": self.condition,
            "invariants_polynomial": self.invariants_polynomial,
            "consistent": self.consistent,
            "absolutely_irreducible": self.absolutely_irreducible,
            "failing_subspaces": [U.to_json() for U in self.failing_subspaces],
        }


def _tri(status: Status) -> bool | None:
    if status is Status.INCONCLUSIVE:
        return None
    return status is Status.POLYNOMIAL


def check_kemper_malle_condition(G: MatrixGroup, degree_cap="auto",
                                 report: SingularityReport | None = None) -> KemperMalleReport:
    if report is None:
        report = classify(G, degree_cap)
    statuses = [r.verdict.status for r in report.fixator_lattice]
    failing = [r.subspace for r in report.fixator_lattice
               if r.verdict.status is Status.NOT_POLYNOMIAL]
    if failing:
        all_poly = False
    elif Status.INCONCLUSIVE in statuses:
        all_poly = None
    else:
        all_poly = True
    return KemperMalleReport(
        generated_by_pseudoreflections=is_generated_by_pseudoreflections(G),
        all_fixators_polynomial=all_poly,
        invariants_polynomial=_tri(report.origin.status),
        absolutely_irreducible=is_absolutely_irreducible(G),
        failing_subspaces=failing,
    )


# ---------------------------------------------------------------------------
# reduction to the nonmodular quotient G/H
# ---------------------------------------------------------------------------

@dataclass
class ReductionRecord:
    h_order: int
    quotient_order: int
    p_divides_quotient: bool
    vh_verdict: PolynomialityVerdict
    isolated: bool
    witnesses: list[str] = field(default_factory=list)

    @property
    def vh_smooth(self) -> bool:
        return self.vh_verdict.is_polynomial

    @property
    def prediction_holds(self) -> bool:
        return not self.witnesses

    def to_json(self) -> dict:
        return {
            "h_order": self.h_order,
            "quotient_order": self.quotient_order,
            "p_divides_quotient": self.p_divides_quotient,
            "vh_smooth": self.vh_verdict.status.value,
            "vh_generator_degrees": self.vh_verdict.degrees,
            "isolated": self.isolated,
            "prediction_holds": self.prediction_holds,
            "witnesses": self.witnesses,
        }


def nonmodular_reduction(G: MatrixGroup, degree_cap="auto",
                         report: SingularityReport | None = None) -> ReductionRecord:
    """H = subgroup generated by pseudoreflections.  For an isolated
    singularity V/H must be smooth and p must not divide |G/H|; anything else
    is recorded as a counterexample witness."""
    if report is None:
        report = classify(G, degree_cap)
    H = pseudoreflection_subgroup(G)
    vh = decide_polynomiality(H, degree_cap)
    quotient = G.order // H.order
    p_div = quotient % G.field.p == 0
    isolated = report.verdict is Verdict.ISOLATED
    witnesses = []
    if isolated:
        if vh.status is Status.NOT_POLYNOMIAL:
            witnesses.append("V/H is singular while the verdict for V/G is isolated")
        if p_div:
            witnesses.append(f"p = {G.field.p} divides |G/H| = {quotient}")
    return ReductionRecord(H.order, quotient, p_div, vh, isolated, witnesses)


# ---------------------------------------------------------------------------
# three-dimensional groups generated by pseudoreflections
# ---------------------------------------------------------------------------

@dataclass
class CaseRecord:
    case: MainGenCase
    gp_order: int
    transvective_quotient: bool = False
    subspace: Subspace | None = None
    steps: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    kernel_invariants: KernelInvariants | None = None
    induced: InducedAction | None = None
    final: PolynomialityVerdict | None = None

    @property
    def program_ran(self) -> bool:
        return self.induced is not None

    @property
    def smooth(self) -> bool | None:
        return None if self.final is None else _tri(self.final.status)

    def to_json(self) -> dict:
        out = {
            "case": self.case.value,
            "gp_order": self.gp_order,
            "transvective_quotient": self.transvective_quotient,
            "subspace": self.subspace.to_json() if self.subspace is not None else None,
            "steps": self.steps,
            "failures": self.failures,
        }
        if self.kernel_invariants is not None:
            out["kernel_invariants"] = [str(f) for f in self.kernel_invariants.polys]
            out["kernel_invariant_degrees"] = self.kernel_invariants.degrees
        if self.induced is not None:
            out["induced_action"] = self.induced.to_json()
        if self.final is not None:
            out["final"] = self.final.status.value
        return out


def invariant_lines(G: MatrixGroup) -> list[Subspace]:
    F, n = G.field, G.dim
    out = []
    for v in projective_points(F, n):
        U = Subspace(F, n, [v])
        if all(U.is_invariant(g) for g in G.generators):
            out.append(U)
    return out


def invariant_planes(G: MatrixGroup) -> list[Subspace]:
    return [W for W in hyperplanes(G.field, G.dim)
            if all(W.is_invariant(g) for g in G.generators)]


def _conjugate_split(split: ExtensionSplit, P: SquareMatrix) -> ExtensionSplit:
    Pi = P.inverse()
    return ExtensionSplit(split.kernel.conjugate(P), split.complement.conjugate(P),
                          {k: Pi @ v @ P for k, v in split.lift_map.items()},
                          None, dict(split.checks))


def _transvective_restriction(Gp: MatrixGroup, S: Subspace, mode: str):
    R = restriction_kernel(Gp, S, mode)
    pair = noncommuting_transvection_pair(R.image)
    return R, pair


def _run_program(rec: CaseRecord, Gp: MatrixGroup, S: Subspace, mode: str, R, pair,
                 degree_cap) -> None:
    """Lift, split, change basis, compute kernel invariants and the induced action."""
    rec.steps["restriction_order"] = R.image.order
    rec.steps["kernel_order"] = R.kernel.order
    lifts = find_transvection_lifts(Gp, S, list(pair), mode)
    rec.steps["lifts_found"] = lifts is not None
    if lifts is None:
        rec.failures.append("no transvection lifts for the restricted generators")
        return
    try:
        split = split_extension(Gp, R.kernel, lifts)
    except NotAComplementError as exc:
        rec.failures.append(f"extension does not split: {exc}")
        return
    rec.steps["complement_order"] = split.complement.order
    rec.steps["order_product_matches"] = split.kernel.order * split.complement.order == Gp.order
    rec.steps["trivial_intersection"] = split.checks.get("trivial_intersection", False)
    F = Gp.field
    if mode == "subspace":
        L = split.fixed_line
        if L is None or L.dim != 1 or S.contains(L):
            rec.failures.append("lifts have no common fixed line outside the plane")
            return
        P = basis_from_columns(F, [list(v) for v in S.basis] + [list(L.basis[0])])
        kind = "plane_kernel"
    else:
        lt, ls = lifts.values()
        Wc = common_invariant_plane(lt, ls, avoid=S)
        if Wc is None:
            rec.failures.append("lifts have no common invariant plane avoiding the line")
            return
        rec.steps["complement_plane"] = Wc.to_json()
        P = basis_from_columns(F, [list(S.basis[0])] + [list(v) for v in Wc.basis])
        kind = "line_kernel"
    rec.steps["basis"] = P.rows()
    split_c = _conjugate_split(split, P)
    kinv = unipotent_kernel_invariants(split_c.kernel, kind)
    rec.kernel_invariants = kinv
    rec.steps["kernel_degree_product"] = math.prod(kinv.degrees)
    ind = induced_action(split_c, kinv)
    rec.induced = ind
    if not ind.linear:
        rec.failures.extend(ind.witnesses)
    elif ind.induced_verdict is not None:
        rec.steps["induced_polynomial"] = ind.induced_verdict.status.value


def main_gen_pipeline(G: MatrixGroup, degree_cap="auto") -> CaseRecord:
    if G.dim != 3:
        raise PreconditionError("the case analysis is for 3-dimensional groups")
    if not is_generated_by_pseudoreflections(G):
        raise PreconditionError("G is not generated by pseudoreflections")
    Gp = p_subgroup(G)
    rec = None
    for W in invariant_planes(Gp):
        R, pair = _transvective_restriction(Gp, W, "subspace")
        if pair is not None:
            rec = CaseRecord(MainGenCase.INVARIANT_PLANE_TRANSVECTIVE, Gp.order, subspace=W)
            _run_program(rec, Gp, W, "subspace", R, pair, degree_cap)
            break
    if rec is None:
        lines = invariant_lines(Gp)
        for U in lines:
            R, pair = _transvective_restriction(Gp, U, "quotient")
            if pair is not None:
                rec = CaseRecord(MainGenCase.INVARIANT_LINE, Gp.order, True, U)
                _run_program(rec, Gp, U, "quotient", R, pair, degree_cap)
                break
        if rec is None and lines:
            U = lines[0]
            rec = CaseRecord(MainGenCase.INVARIANT_LINE, Gp.order, False, U)
            # fix(U) is normal in G; G/fix(U) is nonmodular when V/fix(U) is smooth
            if all(U.is_invariant(g) for g in G.generators):
                K = fixator(G, U)
                kv = decide_polynomiality(K, degree_cap)
                rec.steps["line_fixator_order"] = K.order
                rec.steps["line_fixator_polynomial"] = kv.status.value
                rec.steps["quotient_order"] = G.order // K.order
                rec.steps["quotient_nonmodular"] = (G.order // K.order) % G.field.p != 0
    if rec is None:
        case = MainGenCase.IRREDUCIBLE if is_absolutely_irreducible(Gp) else MainGenCase.OTHER
        rec = CaseRecord(case, Gp.order)
    rec.final = decide_polynomiality(G, degree_cap)
    return rec


# ---------------------------------------------------------------------------
# everything at once
# ---------------------------------------------------------------------------

def analyze(G: MatrixGroup, degree_cap="auto", *, workers: int = 1) -> SingularityReport:
    cache = _VerdictCache(degree_cap)
    report = classify(G, degree_cap, workers=workers, _cache=cache)
    report.kemper_malle = check_kemper_malle_condition(G, degree_cap, report)
    report.reduction = nonmodular_reduction(G, degree_cap, report)
    if G.dim == 3 and report.kemper_malle.generated_by_pseudoreflections:
        report.main_gen = main_gen_pipeline(G, degree_cap)
    return report
