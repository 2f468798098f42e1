from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from quotsing import catalog
from quotsing.field import GF
from quotsing.group import closure, fixator
from quotsing.invariants import Status
from quotsing.linalg import SquareMatrix, Subspace, fixed_space
from quotsing.singularity import (
    MainGenCase,
    PreconditionError,
    Verdict,
    analyze,
    check_kemper_malle_condition,
    classify,
    fixed_space_lattice,
    is_absolutely_irreducible,
    main_gen_pipeline,
    nonmodular_reduction,
    point_status,
    rational_points,
    stabilizer,
)
from tests.conftest import cached_group

F3 = GF(3)


def image(U: Subspace, M: SquareMatrix) -> Subspace:
    return Subspace(U.field, U.ambient_dim, [M.apply(v) for v in U.basis])


def invertible3(n):
    return st.lists(st.integers(0, 2), min_size=n * n, max_size=n * n).map(
        lambda es: SquareMatrix(F3, n, es)).filter(lambda m: m.det().code != 0)


def test_cone_lattice_and_verdict():
    G = cached_group("quadratic-cone")
    L = fixed_space_lattice(G)
    assert L == [Subspace(F3, 2, [[1, 0]])]
    r = classify(G)
    assert r.verdict is Verdict.ISOLATED
    assert r.witness is None
    (rec,) = r.fixator_lattice
    assert rec.fixator_order == 3 and rec.verdict.status is Status.POLYNOMIAL
    assert r.pseudoreflection_subgroup_order == 3
    assert r.p_subgroup_order == 3


def test_reflection_group_is_smooth():
    G = closure([SquareMatrix.diag(F3, [2, 1])])
    r = classify(G)
    assert r.verdict is Verdict.SMOOTH
    assert r.fixator_lattice[0].subspace == Subspace(F3, 2, [[0, 1]])


def test_trivial_group_has_empty_lattice():
    G = cached_group("trivial-f3-dim2")
    assert fixed_space_lattice(G) == []
    assert classify(G).verdict is Verdict.SMOOTH


def test_singular_fixator_gives_nonisolated_with_witness():
    G = cached_group("quadratic-cone-plus-trivial")
    r = classify(G)
    assert r.verdict is Verdict.NONISOLATED
    assert r.witness == Subspace(F3, 3, [[0, 0, 1]])
    witness_rec = next(x for x in r.fixator_lattice if x.subspace == r.witness)
    assert witness_rec.verdict.status is Status.NOT_POLYNOMIAL


def test_lattice_is_closed_under_intersection_and_sorted():
    for name in ["ext-case3-sl2-3", "quadratic-cone-plus-trivial", "nm-b2-f3"]:
        L = fixed_space_lattice(cached_group(name))
        S = set(L)
        for a in L:
            for b in L:
                c = a.intersect(b)
                assert c.dim == 0 or c in S
        dims = [U.dim for U in L]
        assert dims == sorted(dims, reverse=True)


def test_lattice_contains_every_fixed_space():
    G = cached_group("nm-b2-f3")
    L = set(fixed_space_lattice(G))
    for g in G.elements:
        U = fixed_space(g)
        if not g.is_identity() and U.dim:
            assert U in L


def test_inconclusive_is_never_upgraded():
    G = cached_group("quadratic-cone")
    r = classify(G, 2)
    assert r.verdict is Verdict.INCONCLUSIVE


@settings(max_examples=10, deadline=None)
@given(invertible3(2), st.sampled_from(["quadratic-cone", "nm-b2-f3", "unipotent-line"]))
def test_conjugation_invariance_dim2(P, name):
    G = cached_group(name)
    H = G.conjugate(P)
    a, b = classify(G), classify(H)
    assert a.verdict is b.verdict
    Pi = P.inverse()
    assert sorted(fixed_space_lattice(H), key=lambda U: U.sort_key()) == sorted(
        (image(U, Pi) for U in fixed_space_lattice(G)), key=lambda U: U.sort_key())


@settings(max_examples=5, deadline=None)
@given(invertible3(3), st.sampled_from(["quadratic-cone-plus-trivial",
                                        "unipotent-line-plus-trivial"]))
def test_conjugation_invariance_dim3(P, name):
    G = cached_group(name)
    assert classify(G).verdict is classify(G.conjugate(P)).verdict


def test_pipeline_survives_a_change_of_basis():
    G = cached_group("ext-case3-sl2-3")
    P = SquareMatrix.from_rows(F3, [[1, 1, 0], [0, 1, 2], [1, 0, 2]])
    rec = main_gen_pipeline(G.conjugate(P))
    assert rec.case is MainGenCase.INVARIANT_PLANE_TRANSVECTIVE
    assert rec.failures == []
    assert rec.smooth is True
    assert rec.kernel_invariants.degrees == [3, 3, 1]
    assert rec.induced.linear and rec.induced.decomposable


def test_point_status_matches_minimal_lattice_element():
    for name in ["quadratic-cone", "quadratic-cone-plus-trivial", "nm-b2-f3"]:
        G = cached_group(name)
        L = fixed_space_lattice(G)
        for v in rational_points(G):
            S = stabilizer(G, v)
            containing = [U for U in L if U.contains_vector(v)]
            if not containing:
                assert S.order == 1
                continue
            U = min(containing, key=lambda U: U.dim)
            assert S.keys() == fixator(G, U).keys()
            assert point_status(G, v) is classify(G).fixator_lattice[L.index(U)].verdict.status


def test_absolute_irreducibility():
    assert is_absolutely_irreducible(cached_group("sl2-3"))
    assert not is_absolutely_irreducible(cached_group("quadratic-cone"))
    # the rotation by 90 degrees over F3 is irreducible but splits over F9
    J = SquareMatrix.from_rows(F3, [[0, 2], [1, 0]])
    assert not is_absolutely_irreducible(closure([J]))


def test_kemper_malle_examples():
    km = check_kemper_malle_condition(cached_group("quadratic-cone"))
    assert km.generated_by_pseudoreflections is False
    assert km.condition is False and km.invariants_polynomial is False
    assert km.consistent is True
    km = check_kemper_malle_condition(cached_group("sl2-3"))
    assert km.condition is True and km.invariants_polynomial is True
    assert km.absolutely_irreducible


@pytest.mark.parametrize("name", sorted(catalog.nonmodular_groups()))
def test_kemper_malle_holds_for_nonmodular_groups(name):
    G, _ = catalog.nonmodular_groups()[name]
    assert check_kemper_malle_condition(G).consistent is True


def test_reduction_for_isolated_examples():
    for name in ["quadratic-cone", "cyclic-isolated-order5-f81"]:
        red = nonmodular_reduction(cached_group(name))
        assert red.isolated
        assert red.prediction_holds
        assert red.witnesses == []
    red = nonmodular_reduction(cached_group("quadratic-cone"))
    assert red.h_order == 3 and red.quotient_order == 2


def test_cyclic_order5_over_f81_is_isolated():
    r = classify(cached_group("cyclic-isolated-order5-f81"))
    assert r.verdict is Verdict.ISOLATED
    assert r.fixator_lattice == []


def test_main_gen_cases():
    rec = main_gen_pipeline(cached_group("ext-case3-sl2-3"))
    assert rec.case is MainGenCase.INVARIANT_PLANE_TRANSVECTIVE and rec.smooth
    assert rec.induced.third_coordinate_fixed
    rec = main_gen_pipeline(cached_group("ext-case2-dual-sl2-3"))
    assert rec.case is MainGenCase.INVARIANT_LINE and rec.transvective_quotient
    assert rec.kernel_invariants.degrees == [9, 1, 1] and rec.smooth
    rec = main_gen_pipeline(cached_group("unipotent-line-plus-trivial"))
    assert rec.case is MainGenCase.INVARIANT_LINE and not rec.transvective_quotient
    assert "line_fixator_order" in rec.steps


def test_main_gen_preconditions():
    with pytest.raises(PreconditionError):
        main_gen_pipeline(cached_group("sl2-3"))
    with pytest.raises(PreconditionError):
        main_gen_pipeline(cached_group("quadratic-cone-plus-trivial"))


@pytest.mark.parametrize("name", ["ext-case3-sl2-3", "ext-case2-dual-sl2-3",
                                  "unipotent-line-plus-trivial", "trivial-f3-dim3"])
def test_groups_generated_by_pseudoreflections_in_dim3_are_not_isolated(name):
    r = analyze(cached_group(name))
    assert r.verdict is not Verdict.ISOLATED


def test_analyze_json_is_deterministic_and_parallel_safe():
    G = cached_group("ext-case3-sl2-3")
    a = json.dumps(analyze(G).to_json())
    b = json.dumps(analyze(G, workers=4).to_json())
    assert a == b
    assert set(json.loads(a)) == {"verdict", "group_order", "h_order", "gp_order", "origin",
                                  "fixators", "witness", "reduction", "case", "kemper_malle"}


@pytest.mark.parametrize("build,case,degrees", [
    (catalog.extension_case3, MainGenCase.INVARIANT_PLANE_TRANSVECTIVE, [4, 4, 1]),
    (catalog.extension_case2_dual, MainGenCase.INVARIANT_LINE, [16, 1, 1]),
])
def test_pipeline_over_f4(build, case, degrees):
    G = build("imprimitive-2")
    assert G.field.q == 4 and G.order == 96
    rec = main_gen_pipeline(G)
    assert rec.case is case and rec.failures == []
    assert rec.kernel_invariants.degrees == degrees
    assert rec.induced.linear and rec.induced.blocks == [2, 1]
    assert rec.smooth is True
