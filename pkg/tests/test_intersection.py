from fractions import Fraction as F

import pytest

from virstag.algebra import AlgebraElement, NotDecomposableError, normal_order
from virstag.intersection import (
    decompose_against_L1L2,
    intersection_basis,
    intersection_dim,
)


def test_dimension_table():
    want = [0, 0, 0, 0, 0, 1, 1, 3, 4, 7, 10, 16, 21, 32, 43, 60]
    assert [intersection_dim(m) for m in range(16)] == want


def test_small_grades_empty():
    for m in range(5):
        assert intersection_basis(m, F(0)) == []


def test_grade_five_generator_is_the_displayed_pair():
    c = F(0)
    (rel,) = intersection_basis(5, c)
    lm = AlgebraElement.mode
    want_u1 = (lm(c, 1) * lm(c, 1) * lm(c, 2) + (lm(c, 2) * lm(c, 2)).scale(6)
               - lm(c, 1) * lm(c, 3) + lm(c, 4).scale(2))
    want_u2 = -(lm(c, 1) * lm(c, 1) * lm(c, 1) + (lm(c, 1) * lm(c, 2)).scale(6)
                + lm(c, 3).scale(12))
    assert rel.u1 == want_u1
    assert rel.u2 == want_u2


def test_relations_hold_in_the_algebra():
    c = F(-2)
    lm = AlgebraElement.mode
    for m in range(5, 10):
        basis = intersection_basis(m, c)
        assert len(basis) == intersection_dim(m)
        for rel in basis:
            assert rel.u1 * lm(c, 1) + rel.u2 * lm(c, 2) == AlgebraElement.zero(c)


def test_decompose_worked_examples():
    c = F(0)
    lm = AlgebraElement.mode
    u1, u2 = decompose_against_L1L2(lm(c, 1))
    assert u1 == AlgebraElement.one(c) and u2 == AlgebraElement.zero(c)
    for target in (lm(c, 3), lm(c, 4), normal_order([1, 2, 3], c), lm(c, 2) * lm(c, 5)):
        a, b = decompose_against_L1L2(target)
        assert a * lm(c, 1) + b * lm(c, 2) == target


def test_decompose_rejects_wrong_tails():
    c = F(0)
    with pytest.raises(NotDecomposableError):
        decompose_against_L1L2(AlgebraElement.mode(c, 0))
    with pytest.raises(NotDecomposableError):
        decompose_against_L1L2(AlgebraElement.mode(c, -2))


def test_intersection_json():
    (rel,) = intersection_basis(5, F(0))
    payload = rel.to_json()
    assert payload["m"] == 5 and payload["u1"] and payload["u2"]
