from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quotsing.field import GF
from quotsing.linalg import (
    ElementKind,
    SingularMatrixError,
    SquareMatrix,
    Subspace,
    classify_element,
    common_invariant_plane,
    element_order,
    fixed_space,
    gl_order,
    hyperplanes,
    is_pseudoreflection,
    is_transvection,
    matmul_codes,
    nullspace,
    projective_points,
    rank,
    rref,
    solve,
)

F3 = GF(3)
F4 = GF(2, 2)
F9 = GF(3, 2, [2, 1, 1])


def M(F, rows):
    return SquareMatrix.from_rows(F, rows)


def matrices(F, n):
    return st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n).map(
        lambda es: SquareMatrix(F, n, es))


def invertible(F, n):
    return matrices(F, n).filter(lambda m: m.det().code != 0)


def _brute_kernel_size(F, A):
    A = np.asarray(A)
    count = 0
    for v in itertools.product(range(F.q), repeat=A.shape[1]):
        ok = all(F.dot(row, v) == 0 for row in A.tolist())
        count += ok
    return count


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F3, F4, GF(5)]), st.data())
def test_nullspace_size_matches_brute_force(F, data):
    r = data.draw(st.integers(1, 3))
    c = data.draw(st.integers(1, 3))
    A = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=r * c, max_size=r * c)),
                 dtype=np.int32).reshape(r, c)
    K = nullspace(F, A)
    assert F.q ** K.shape[0] == _brute_kernel_size(F, A)
    assert rank(F, A) + K.shape[0] == c
    for v in K:
        assert not matmul_codes(F, A, v.reshape(-1, 1)).any()


def test_rref_is_canonical():
    A = np.array([[2, 1, 0], [1, 2, 0], [0, 0, 1]], dtype=np.int32)
    R, piv = rref(F3, A)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]
    R2, _ = rref(F3, R[::-1])
    assert (R2 == R).all()


def test_solve_returns_none_when_inconsistent():
    A = np.array([[1, 0], [1, 0]], dtype=np.int32)
    assert solve(F3, A, np.array([1, 2])) is None
    x = solve(F3, A, np.array([2, 2]))
    assert x.tolist()[0] == 2


def _leibniz(m):
    F, n = m.field, m.n
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i, j in itertools.combinations(range(n), 2):
            if perm[i] > perm[j]:
                sign = -sign
        term = 1
        for i in range(n):
            term = F.mul(term, m.entries[i * n + perm[i]])
        total = F.add(total, term if sign == 1 else F.neg(term))
    return total


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([F3, F4, F9]), st.integers(1, 3), st.data())
def test_det_matches_leibniz_formula(F, n, data):
    m = data.draw(matrices(F, n))
    assert m.det().code == _leibniz(m)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F3, F4, F9]), st.data())
def test_inverse_and_product_rules(F, data):
    a = data.draw(invertible(F, 3))
    b = data.draw(invertible(F, 3))
    ident = SquareMatrix.identity(F, 3)
    assert a @ a.inverse() == ident
    assert (a @ b).inverse() == b.inverse() @ a.inverse()
    assert (a @ b).det() == a.det() * b.det()


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        M(F3, [[1, 2], [2, 1]]).inverse()


def test_gl_order_matches_enumeration():
    for F in (GF(2), F3):
        count = sum(1 for es in itertools.product(range(F.q), repeat=4)
                    if SquareMatrix(F, 2, es).det().code)
        assert gl_order(2, F.q) == count


def test_element_classification():
    assert classify_element(M(F3, [[1, 1], [0, 1]])) is ElementKind.TRANSVECTION
    assert classify_element(M(F3, [[2, 0], [0, 1]])) is ElementKind.PSEUDOREFLECTION
    assert classify_element(M(F3, [[2, 0], [0, 2]])) is ElementKind.OTHER
    assert classify_element(SquareMatrix.identity(F3, 2)) is ElementKind.IDENTITY
    # rank(g - 1) = 1 but (g - 1)^2 != 0 with eigenvalue != 1: homology
    h = M(F3, [[1, 0, 0], [0, 1, 0], [1, 1, 2]])
    assert is_pseudoreflection(h) and not is_transvection(h)
    # a 3x3 Jordan block is unipotent but not a pseudoreflection
    j = M(F3, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert classify_element(j) is ElementKind.OTHER


def test_transvections_have_order_p():
    for F in (F3, F4, F9, GF(5)):
        for c in F.nonzero_elements():
            t = M(F, [[1, c], [0, 1]])
            assert is_transvection(t)
            assert element_order(t) == F.p


def test_subspace_dimension_formula():
    for a, b in itertools.combinations(hyperplanes(F3, 3), 2):
        assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim
        assert a.contains(a.intersect(b))


def test_counts_of_points_and_planes():
    for F in (F3, F4):
        q = F.q
        assert len(projective_points(F, 3)) == q * q + q + 1
        assert len(set(hyperplanes(F, 3))) == q * q + q + 1


def test_fixed_space_of_transvection_is_hyperplane():
    t = M(F3, [[1, 0, 1], [0, 1, 2], [0, 0, 1]])
    W = fixed_space(t)
    assert W.dim == 2
    assert W.is_fixed_pointwise(t)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F3, F4]), st.data())
def test_any_two_transvections_share_an_invariant_plane(F, data):
    T = M(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    P = data.draw(invertible(F, 3))
    Q = data.draw(invertible(F, 3))
    g, h = P @ T @ P.inverse(), Q @ T @ Q.inverse()
    assert is_transvection(g) and is_transvection(h)
    W = common_invariant_plane(g, h)
    assert W is not None and W.dim == 2
    assert W.is_invariant(g) and W.is_invariant(h)


def test_common_invariant_plane_can_avoid_a_line():
    t = M(F3, [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    s = M(F3, [[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    U = Subspace(F3, 3, [[1, 0, 0]])
    W = common_invariant_plane(t, s, avoid=U)
    assert W == Subspace(F3, 3, [[0, 1, 0], [0, 0, 1]])


def test_no_plane_avoiding_the_common_direction():
    # both are 1 + e1 phi; a plane missing e1 would have to be ker phi for both
    t = M(F3, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    s = M(F3, [[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    U = Subspace(F3, 3, [[1, 0, 0]])
    assert common_invariant_plane(t, s, avoid=U) is None
    assert common_invariant_plane(t, s) is not None


def test_subspace_equality_is_basis_independent():
    a = Subspace(F3, 3, [[1, 1, 0], [0, 1, 1]])
    b = Subspace(F3, 3, [[1, 2, 1], [2, 0, 1]])  # a1 + a2, 2a1 + a2
    assert a == b and hash(a) == hash(b)
