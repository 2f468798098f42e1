from __future__ import annotations

import pytest

from quotsing.field import GF
from quotsing.lift_identities import F9_MIN_POLY, case1, case2, case3, verify_lift_identities
from quotsing.linalg import SquareMatrix


def test_case1_every_q_and_mu():
    rep = verify_lift_identities(1)
    assert rep.passed, rep.summary()
    assert len(rep.required) == 6 * sum(q - 1 for q in (3, 5, 7, 9))


def test_case3_every_valid_pair_over_f4_and_f8():
    rep = verify_lift_identities(3)
    assert rep.passed, rep.summary()
    assert len(rep.required) == 2 * (2 * 2 + 6 * 6)


def test_case2_conclusion_holds_for_every_mu():
    F = GF(3, 2, F9_MIN_POLY)
    for mu in F.nonzero_elements():
        rep = case2(mu)
        by_name = {c.name: c for c in rep.required}
        for name in ["(t~s~)^5", "(s~t~)^5", "u = (t~s~)^5 (s~t~)^5", "(u~t~)^5",
                     "u1 = (t~u~)^5 (u~t~)^5",
                     "(u1^-1 u)^-1 s~ is a transvection restricting to s"]:
            assert by_name[name].passed, name


def test_case2_two_expected_matrices_disagree_with_exact_arithmetic():
    F = GF(3, 2, F9_MIN_POLY)
    for mu in F.nonzero_elements():
        rep = case2(mu)
        assert {c.name for c in rep.failures} == {"u~ = u s~", "(t~u~)^5"}
        # the corrected readings hold
        assert all(c.passed for c in rep.checks if c.informational)


def test_case2_corrected_u_tilde_is_u_inverse_s():
    F = GF(3, 2, F9_MIN_POLY)
    x = F.gen
    mu = F.one
    tt = SquareMatrix.from_rows(F, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    ss = SquareMatrix.from_rows(F, [[1, 0, mu], [x + 2, 1, 0], [0, 0, 1]])
    u = (tt @ ss) ** 5 @ (ss @ tt) ** 5
    expected = SquareMatrix.from_rows(F, [[1, 0, 0], [x + 2, 1, 1], [0, 0, 1]])
    assert u.inverse() @ ss == expected
    assert u @ ss != expected


def test_single_parameter_calls():
    assert case1(5, 3).passed
    assert case3(2, [0, 1], [1, 1]).passed
    with pytest.raises(ValueError):
        case1(5, 0)
    with pytest.raises(ValueError):
        case3(2, 1, [0, 1])
