#!/usr/bin/env python3
"""
Perron-Frobenius data, Jacobian modules, coefficient rings and the
foliation formulas.

Usage:
    pytest test_pfdata.py
"""

import random
import sys
from fractions import Fraction

import numpy as np
import pytest

from errors import DomainError, NotHyperbolicError, NotPrimitiveError, UsageError
from exactnum import IntMatrix, det_exact
from numberfield import NumberField, QuadraticSurd, quadratic_field
from pfdata import (Similarity, coefficient_ring, covering_flow_orders,
                    dominant_eigendata, float_eigenvector, foliation_formulas,
                    handelman_triple, index_check, is_primitive,
                    jacobian_from_periods, jacobian_module, module_similar,
                    perron_data, quadratic_order, relative_homology_rank,
                    riemann_hurwitz, zippered_genus)

# Primitive nonnegative matrices of sizes 2 to 4
DESK_SUITE = [
    [[5, 2], [2, 1]],
    [[5, 1], [4, 1]],
    [[2, 1], [1, 1]],
    [[1, 1], [1, 0]],
    [[3, 1], [1, 0]],
    [[1, 2], [2, 5]],
    [[0, 1, 0], [0, 0, 1], [1, 1, 0]],
    [[1, 1, 1], [1, 0, 0], [0, 1, 0]],
    [[2, 1, 0], [1, 1, 1], [0, 1, 1]],
    [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]],
]

# (matrix, second eigenvector coordinate with v_1 = 1, conductor)
TORUS_CASES = [
    ([[5, 2], [2, 1]], QuadraticSurd(2, -1, 1), 1),
    ([[5, 1], [4, 1]], QuadraticSurd(2, -2, 2), 2),
    ([[2, 1], [1, 1]], QuadraticSurd(5, Fraction(-1, 2), Fraction(1, 2)), 1),
]


@pytest.mark.parametrize("rows", DESK_SUITE)
def test_eigenvector_is_exact(rows):
    a = IntMatrix.from_rows(rows)
    data = perron_data(a)
    lam = data.eigenvalue
    image = tuple(data.field.zero + x for x in a.apply(data.eigenvector))
    assert image == tuple(lam * x for x in data.eigenvector)
    assert data.eigenvector[0] == data.field.one
    assert all(x.sign() > 0 for x in data.eigenvector)
    expected = float_eigenvector(a)
    assert np.allclose([x.to_float() for x in data.eigenvector], expected)


@pytest.mark.parametrize("rows,second,conductor", TORUS_CASES)
def test_quadratic_eigenvectors_and_conductors(rows, second, conductor):
    data = perron_data(IntMatrix.from_rows(rows))
    assert QuadraticSurd.from_element(data.eigenvector[1]) == second
    order = coefficient_ring(jacobian_module(data))
    assert order.conductor == conductor
    assert order.is_ring


def test_primitivity():
    assert is_primitive(IntMatrix.from_rows([[1, 1], [1, 0]]))
    assert not is_primitive(IntMatrix.from_rows([[0, 1], [1, 0]]))
    assert not is_primitive(IntMatrix.from_rows([[1, 1], [0, 1]]))
    assert not is_primitive(IntMatrix.from_rows([[1, -1], [1, 1]]))
    with pytest.raises(NotPrimitiveError):
        perron_data(IntMatrix.from_rows([[0, 1], [1, 0]]))


def test_dominant_eigendata_without_positivity():
    data = dominant_eigendata(IntMatrix.from_rows([[3, -1], [1, 0]]))
    assert data.charpoly == [1, -3, 1]
    assert QuadraticSurd.from_element(data.eigenvector[1]) == QuadraticSurd(5, Fraction(3, 2), Fraction(-1, 2))


@pytest.mark.parametrize("rows", [
    # -sqrt(2) ties with sqrt(2)
    [[0, 2], [1, 0]],
    # golden ratio beside the pair +-3i
    [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -9], [0, 0, 1, 0]],
    # golden ratio beside the eigenvalue -2
    [[1, 1, 0], [1, 0, 0], [0, 0, -2]],
])
def test_dominance_is_decided_exactly(rows):
    with pytest.raises(DomainError):
        dominant_eigendata(IntMatrix.from_rows(rows))


def test_small_complex_eigenvalues_do_not_block_dominance():
    # golden ratio beside the pair +-i
    a = IntMatrix.from_rows([[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    data = dominant_eigendata(a)
    assert data.field.minpoly == (1, -1, -1)
    assert [x.is_zero() for x in data.eigenvector] == [False, False, True, True]


def test_rational_or_missing_dominant_root():
    with pytest.raises(NotHyperbolicError):
        dominant_eigendata(IntMatrix.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(NotHyperbolicError):
        dominant_eigendata(IntMatrix.from_rows([[0, -1], [1, 0]]))
    with pytest.raises(NotHyperbolicError):
        perron_data(IntMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]]))


def test_module_membership_and_scaling():
    k = quadratic_field(2)
    m = jacobian_from_periods(k, [k.one, k.gen])
    assert m.rank == 2
    assert m.contains(3 + 5 * k.gen)
    assert not m.contains(k.gen / 2)
    scaled = m.scaled(k.from_rational(3))
    assert scaled.scale == 3
    assert scaled.primitive_lattice == m.primitive_lattice
    assert module_similar(m, scaled) == Similarity.SIMILAR


def _random_unimodular(n, rng):
    u = IntMatrix.identity(n)
    for _ in range(6):
        i, j = rng.sample(range(n), 2)
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        rows[i][j] = rng.choice([-2, -1, 1, 2])
        u = u @ IntMatrix.from_rows(rows)
    return u


@pytest.mark.parametrize("rows", DESK_SUITE)
def test_module_depends_only_on_the_lattice(rows):
    data = perron_data(IntMatrix.from_rows(rows))
    m = jacobian_module(data)
    rng = random.Random(len(rows) * 7 + rows[0][0])
    for _ in range(4):
        u = _random_unimodular(len(rows), rng)
        mixed = [sum((g * u[i, j] for i, g in enumerate(m.generators)), data.field.zero)
                 for j in range(len(rows))]
        assert jacobian_from_periods(data.field, mixed).same_lattice(m)


@pytest.mark.parametrize("rows", DESK_SUITE)
def test_module_is_stable_under_the_eigenvalue(rows):
    a = IntMatrix.from_rows(rows)
    data = perron_data(a)
    m = jacobian_module(data)
    stretched = m.scaled(data.eigenvalue)
    assert all(m.contains(b) for b in stretched.basis())
    assert abs(det_exact(a)) == 1
    assert stretched.same_lattice(m)


def test_module_similarity_is_an_equivalence():
    k = quadratic_field(2)
    r2, silver = k.gen, 1 + k.gen
    modules = [
        jacobian_from_periods(k, [k.one, r2]),
        jacobian_from_periods(k, [k.one, 2 * r2]),
        jacobian_from_periods(k, [silver, silver * r2]),
        jacobian_from_periods(k, [k.from_rational(3), 3 * r2]),
        jacobian_from_periods(k, [k.one, 3 * r2]),
        jacobian_from_periods(k, [k.from_rational(2), r2]),
        jacobian_from_periods(k, [k.one, (1 + r2) / 3]),
        jacobian_from_periods(k, [silver * 2, silver * 4 * r2]),
        jacobian_from_periods(k, [r2]),
        jacobian_from_periods(k, [silver]),
    ]
    similar = [[module_similar(x, y) == Similarity.SIMILAR for y in modules] for x in modules]
    n = len(modules)
    for i in range(n):
        assert similar[i][i]
        for j in range(n):
            assert similar[i][j] == similar[j][i]
            for h in range(n):
                if similar[i][j] and similar[j][h]:
                    assert similar[i][h]
    # both conductors occur, and the rank-one modules form their own class
    assert not similar[0][1]
    assert similar[1][7]
    assert similar[8][9] and not similar[0][8]


@pytest.mark.parametrize("d", [2, 3, 5, 13])
@pytest.mark.parametrize("f", [1, 2, 3])
def test_coefficient_ring_of_an_order_is_itself(d, f):
    order_module = quadratic_order(quadratic_field(d), f)
    order = coefficient_ring(order_module)
    assert order.conductor == f
    assert all(order_module.contains(b) for b in order.basis)


def test_module_similarity():
    k = quadratic_field(2)
    maximal = jacobian_from_periods(k, [k.one, k.gen])
    conductor_two = jacobian_from_periods(k, [k.one, 2 * k.gen])
    unit_multiple = jacobian_from_periods(k, [1 + k.gen, (1 + k.gen) * k.gen])
    assert module_similar(maximal, unit_multiple) == Similarity.SIMILAR
    assert module_similar(maximal, conductor_two) == Similarity.DISTINCT
    with pytest.raises(UsageError):
        module_similar(maximal, jacobian_from_periods(quadratic_field(3), [quadratic_field(3).one]))


def test_similarity_outside_quadratic_fields_is_unsupported():
    k = NumberField((1, 0, -1, -1), (Fraction(1), Fraction(2)))
    m = jacobian_from_periods(k, [k.one, k.gen, k.gen * k.gen])
    assert module_similar(m, m) == Similarity.UNSUPPORTED


def test_handelman_triple():
    data = perron_data(IntMatrix.from_rows([[5, 2], [2, 1]]))
    triple = handelman_triple(jacobian_module(data))
    assert triple.order.conductor == 1
    assert triple.ideal_class == QuadraticSurd(2, 1, 1)


def test_zippered_genus():
    assert zippered_genus([2, 1]) == (1, 1)
    assert zippered_genus([1, 0]) == (1, 1)
    assert zippered_genus([1, 3, 2]) == (1, 2)
    with pytest.raises(DomainError):
        zippered_genus([3, 1, 2])
    with pytest.raises(DomainError):
        zippered_genus([1, 1])


def test_index_and_covering_formulas():
    assert index_check([1, 1, 1, 1], 2)
    assert not index_check([2], 2)
    assert riemann_hurwitz(1, 2) == 2
    with pytest.raises(DomainError):
        riemann_hurwitz(1, 3)
    assert relative_homology_rank(2, 4) == 7
    lifted, genus = covering_flow_orders([1, 1, 1, 1], 2)
    assert lifted == [4, 4, 4, 4]
    assert genus == 5
    assert index_check(lifted, genus)


def test_formula_dispatch():
    assert foliation_formulas("riemann_hurwitz", 2, 0) == 3
    with pytest.raises(UsageError):
        foliation_formulas("euler", 1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
