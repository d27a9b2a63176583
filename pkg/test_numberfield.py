#!/usr/bin/env python3
"""
Number fields with a fixed real embedding, and quadratic surds.

Usage:
    pytest test_numberfield.py
"""

import math
import random
import sys
from fractions import Fraction

import pytest

from errors import ArithmeticDomainError, DomainError, NotSquarefreeError, UsageError
from numberfield import (NumberField, Ordering, QuadraticSurd, compare_real,
                         field_arith, floor_real, is_squarefree, norm,
                         quadratic_data, quadratic_field, rational_field,
                         squarefree_decomposition, trace, trace_matrix)

# n -> (s, d) with n = s^2 d
SQUAREFREE_CASES = [
    (1, (1, 1)),
    (12, (2, 3)),
    (32, (4, 2)),
    (72, (6, 2)),
    (30, (1, 30)),
    (1000003 ** 2 * 7, (1000003, 7)),
]

# (d, a, b, floor of a + b*sqrt(d))
SURD_FLOORS = [
    (2, 0, 1, 1),
    (2, 0, -1, -2),
    (5, Fraction(1, 2), Fraction(1, 2), 1),
    (5, Fraction(1, 2), Fraction(-1, 2), -1),
    (3, 2, 1, 3),
    (2, -1, 1, 0),
    (7, Fraction(-7, 3), Fraction(1, 3), -2),
]


def plastic_field():
    # real root of t^3 - t - 1, about 1.3247
    return NumberField((1, 0, -1, -1), (Fraction(1), Fraction(2)))


@pytest.mark.parametrize("n,expected", SQUAREFREE_CASES)
def test_squarefree_decomposition(n, expected):
    assert squarefree_decomposition(n) == expected


def test_is_squarefree():
    assert is_squarefree(30)
    assert not is_squarefree(18)
    assert not is_squarefree(0)


def test_quadratic_field_requires_squarefree_d():
    with pytest.raises(NotSquarefreeError):
        quadratic_field(8)
    with pytest.raises(NotSquarefreeError):
        quadratic_field(1)


def test_field_validation():
    with pytest.raises(DomainError):
        NumberField((1, 0, -4), (Fraction(1), Fraction(3)))
    with pytest.raises(DomainError):
        NumberField((1, 0, -2), (Fraction(-2), Fraction(2)))
    with pytest.raises(DomainError):
        NumberField((2, 0, -1), (Fraction(0), Fraction(1)))


def test_trusted_field_skips_the_irreducibility_check():
    trusted = NumberField((1, 0, -4), (Fraction(1), Fraction(3)), trusted=True)
    assert trusted.trusted
    assert trusted.degree == 2
    assert NumberField((1, 0, -2), (Fraction(1), Fraction(2)), trusted=True) == quadratic_field(2)


def test_field_identity_follows_the_embedding():
    k = quadratic_field(2)
    assert NumberField((1, 0, -2), (Fraction(7, 5), Fraction(3, 2))) == k
    assert NumberField((1, 0, -2), (Fraction(-2), Fraction(-1))) != k


def test_quadratic_arithmetic():
    k = quadratic_field(2)
    r2 = k.gen
    assert r2 * r2 == k.from_rational(2)
    x = 1 + r2
    assert x * x.inverse() == k.one
    assert trace(x) == 2
    assert norm(x) == -1
    assert (x ** -2) * (x ** 2) == k.one
    assert field_arith(x, r2, "sub") == k.one
    assert field_arith(x, x, "div") == k.one
    with pytest.raises(UsageError):
        field_arith(x, x, "pow")


def test_cubic_arithmetic():
    k = plastic_field()
    g = k.gen
    assert g ** 3 == g + 1
    assert trace(g) == 0
    assert norm(g) == 1
    assert g * g.inverse() == k.one
    assert floor_real(g) == 1
    assert floor_real(g * g) == 1
    assert (g - 2).sign() == -1
    assert compare_real(g * g, g) == Ordering.GREATER
    assert compare_real(g, g) == Ordering.EQUAL


def test_random_field_identities():
    k = plastic_field()
    rng = random.Random(17)
    for _ in range(25):
        x = k.element([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)])
        y = k.element([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)])
        if x.is_zero() or y.is_zero():
            continue
        assert (x * y) / y == x
        assert norm(x * y) == norm(x) * norm(y)
        assert trace(x + y) == trace(x) + trace(y)
        assert abs(x.to_float() + y.to_float() - (x + y).to_float()) < 1e-9


def test_floor_shifts_with_integers_and_order_matches_floats():
    k = plastic_field()
    rng = random.Random(29)
    for _ in range(40):
        x = k.element([Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(3)])
        y = k.element([Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(3)])
        shift = rng.randint(-50, 50)
        assert floor_real(x + shift) == floor_real(x) + shift
        assert floor_real(x) <= x.to_float() + 1e-9
        gap = x.to_float() - y.to_float()
        if abs(gap) > 1e-9:
            assert compare_real(x, y) == (Ordering.GREATER if gap > 0 else Ordering.LESS)
            assert compare_real(y, x) == (Ordering.LESS if gap > 0 else Ordering.GREATER)


def test_sign_and_floor_of_extreme_powers():
    # (1+sqrt 2)^7000 sits about 10^-2680 below an integer
    k = quadratic_field(2)
    big = (1 + k.gen) ** 7000
    assert floor_real(big) == QuadraticSurd.from_element(big).floor()
    small = (k.gen - 1) ** 7000
    assert small.sign() == 1
    assert (-small).sign() == -1
    assert floor_real(small) == 0
    assert compare_real(big * small, k.one) == Ordering.EQUAL


def test_refinement_is_the_same_whatever_was_asked_before():
    k = NumberField((1, 0, -3), (Fraction(1), Fraction(2)))
    deep = k.root_enclosure(300)
    shallow = k.root_enclosure(70)
    assert k.root_enclosure(300) == deep
    assert shallow[0] <= deep[0] <= deep[1] <= shallow[1]
    assert shallow[1] - shallow[0] == Fraction(1, 2 ** 70)
    assert deep[0] ** 2 < 3 < deep[1] ** 2


def test_division_by_zero():
    k = quadratic_field(3)
    with pytest.raises(ArithmeticDomainError):
        k.zero.inverse()
    with pytest.raises(ArithmeticDomainError):
        k.one / 0


def test_elements_of_different_fields_do_not_mix():
    with pytest.raises(UsageError):
        quadratic_field(2).gen + quadratic_field(3).gen


def test_trace_matrix_of_power_basis():
    k = quadratic_field(2)
    assert trace_matrix([k.one, k.gen]) == [[2, 0], [0, 4]]


def test_rational_field():
    q = rational_field()
    x = q.from_rational(Fraction(7, 3))
    assert x.floor() == 2
    assert (x * x.inverse()) == q.one
    assert x.sign() == 1


@pytest.mark.parametrize("d,a,b,expected", SURD_FLOORS)
def test_surd_floor(d, a, b, expected):
    x = QuadraticSurd(d, a, b)
    assert x.floor() == expected
    assert expected == math.floor(x.to_float())
    assert x.to_element().floor() == expected


def test_surd_arithmetic_and_order():
    r2 = QuadraticSurd(2, 0, 1)
    silver = 1 + r2
    assert silver * (r2 - 1) == QuadraticSurd(2, 1)
    assert silver.norm() == -1
    assert silver.trace() == 2
    assert silver.inverse() == r2 - 1
    assert r2 > Fraction(7, 5)
    assert r2 < Fraction(3, 2)
    assert (r2 - Fraction(3, 2)).sign() == -1
    assert str(silver) == "1+1*sqrt(2)"


def test_surd_element_conversion():
    for d in (2, 3, 5, 13):
        for a, b in ((0, 1), (Fraction(1, 2), Fraction(-3, 2)), (4, 7)):
            x = QuadraticSurd(d, a, b)
            assert QuadraticSurd.from_element(x.to_element()) == x


def test_quadratic_data_of_a_non_standard_presentation():
    # golden ratio field presented by t^2 - t - 1
    k = NumberField((1, -1, -1), (Fraction(1), Fraction(2)))
    info = quadratic_data(k)
    assert info.d == 5
    assert info.sqrt_d == 2 * k.gen - 1
    assert QuadraticSurd.from_element(k.gen) == QuadraticSurd(5, Fraction(1, 2), Fraction(1, 2))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
