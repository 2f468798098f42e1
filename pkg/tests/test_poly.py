from __future__ import annotations

import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from quotsing import catalog
from quotsing.field import GF
from quotsing.linalg import SquareMatrix
from quotsing.poly import (
    Multipoly,
    act,
    action_matrix_on_degree,
    monomials,
    orbit_product,
    product_monomials,
    relative_norm,
    right_coset_representatives,
)

F3 = GF(3)
F4 = GF(2, 2)


def invertible(F, n):
    return st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n).map(
        lambda es: SquareMatrix(F, n, es)).filter(lambda m: m.det().code != 0)


def polys(F, n, d):
    mons = monomials(n, d)
    return st.lists(st.integers(0, F.q - 1), min_size=len(mons), max_size=len(mons)).map(
        lambda cs: Multipoly.from_vector(F, n, d, cs))


def test_monomial_counts_and_order():
    assert monomials(2, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    for n, d in [(2, 5), (3, 4), (3, 7)]:
        from math import comb
        assert len(monomials(n, d)) == comb(n + d - 1, d)


def test_printing_uses_x_y_z():
    x, y, z = Multipoly.variables(F3, 3)
    assert str(x * (x + y) * (x + 2 * y)) == "x^3 + 2*x*y^2"
    assert str(Multipoly.zero(F3, 3)) == "0"


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([F3, F4]), st.data())
def test_action_is_evaluation_at_inverse(F, data):
    g = data.draw(invertible(F, 2))
    f = data.draw(polys(F, 2, 3))
    gi = g.inverse()
    for v in itertools.product(range(F.q), repeat=2):
        assert act(g, f).evaluate(v) == f.evaluate(gi.apply(v))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F3, F4]), st.data())
def test_action_is_a_left_action(F, data):
    g = data.draw(invertible(F, 3))
    h = data.draw(invertible(F, 3))
    f = data.draw(polys(F, 3, 2))
    assert act(g @ h, f) == act(g, act(h, f))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F3, F4]), st.integers(0, 5), st.data())
def test_action_matrix_matches_act(F, d, data):
    g = data.draw(invertible(F, 2))
    f = data.draw(polys(F, 2, d))
    A = action_matrix_on_degree(g, d)
    v = f.to_vector(d)
    out = np.zeros_like(v)
    for i in range(len(v)):
        acc = 0
        for j in range(len(v)):
            acc = F.add(acc, F.mul(int(A[i, j]), int(v[j])))
        out[i] = acc
    assert (out == act(g, f).to_vector(d)).all()


def test_unipotent_action_on_degree_one():
    t = SquareMatrix.from_rows(F3, [[1, 1], [0, 1]])
    x, y = Multipoly.variables(F3, 2)
    # t^-1 = [[1, 2], [0, 1]]: x -> x + 2y, y -> y
    assert act(t, x) == x + 2 * y
    assert act(t, y) == y


def test_orbit_product_is_invariant():
    G = catalog.unipotent_line_group()
    x, y = Multipoly.variables(F3, 2)
    f = orbit_product(G.elements, x)
    assert f == x * (x + y) * (x + 2 * y)
    for g in G.elements:
        assert act(g, f) == f


def test_relative_norm_of_an_h_invariant_is_g_invariant():
    G = catalog.quadratic_cone_example()
    H = catalog.unipotent_line_group()
    x, y = Multipoly.variables(F3, 2)
    f1 = x * (x + y) * (x + 2 * y)
    assert len(right_coset_representatives(G, H)) == 2
    for f in (f1, y):
        n = relative_norm(G, H, f)
        assert n == -(f * f)
        for g in G.elements:
            assert act(g, n) == n


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_ring_laws(data):
    f = data.draw(polys(F3, 3, 2))
    g = data.draw(polys(F3, 3, 1))
    h = data.draw(polys(F3, 3, 1))
    assert f * (g + h) == f * g + f * h
    assert (f * g).degree in (3, -1) or (f * g).is_zero()
    # Leibniz rule
    for i in range(3):
        assert (f * g).derivative(i) == f.derivative(i) * g + f * g.derivative(i)


def test_frobenius_derivative_vanishes():
    x, y = Multipoly.variables(F3, 2)
    assert (x**3).derivative(0).is_zero()


def test_product_monomials():
    assert sorted(product_monomials([1, 3], 3)) == [(0, 1), (3, 0)]
    assert product_monomials([2, 2], 3) == []
