import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit import fixtures
from triplekit.errors import DimensionMismatch, NotALieAlgebra, NotAnLts
from triplekit.exactla import Matrix
from triplekit.lts_core import (
    AlgebraMorphism,
    Bivector,
    LieStructure,
    LtsStructure,
    adjoint_action,
    basis_vector,
    bracket,
    check_derivation,
    check_lie_axioms,
    check_lts_axioms,
    check_lts_morphism,
    lie_bracket,
    lie_to_lts,
    pair_basis,
)
from triplekit.tensors import zeros

LIE_FIXTURES = [fixtures.lie_abelian, fixtures.lie_heisenberg, fixtures.lie_sl2, fixtures.lie_solvable3]


@pytest.mark.parametrize("make", [fixtures.lts_dim2, fixtures.lts_dim4])
def test_literature_examples_are_lts(make):
    assert check_lts_axioms(make()).passed


def test_bracket_of_dim2_example():
    a = fixtures.lts_dim2()
    assert bracket(a, (1, 0), (0, 1), (0, 1)) == (1, 0)
    assert bracket(a, (0, 1), (1, 0), (0, 1)) == (-1, 0)
    assert bracket(a, (1, 0), (0, 1), (1, 0)) == (0, 0)


def test_from_table_fills_swapped_slot():
    a = fixtures.lts_dim4()
    assert a.c[1, 0, 0, 3] == -1
    assert a.table() == [((0, 1, 0), {3: 1})]


def test_cyclic_failure_reports_smallest_witness():
    a = LtsStructure.from_table(3, [((0, 1, 2), {0: 1})])
    report = check_lts_axioms(a)
    assert not report.passed
    failure = report.check("cyclic")
    assert not failure.passed
    assert failure.witness.indices == (0, 1, 2)
    assert report.check("slot_antisymmetry").passed


def test_non_antisymmetric_tensor_is_refused():
    c = zeros((2, 2, 2, 2))
    c[0, 1, 1, 0] = 1
    with pytest.raises(NotAnLts):
        LtsStructure(2, c)


def test_conflicting_table_entries_are_refused():
    with pytest.raises(NotAnLts):
        LtsStructure.from_table(2, [((0, 1, 1), {0: 1}), ((1, 0, 1), {0: 1})])


def test_index_out_of_range():
    with pytest.raises(DimensionMismatch):
        LtsStructure.from_table(2, [((0, 2, 1), {0: 1})])


@pytest.mark.parametrize("make", LIE_FIXTURES)
def test_lie_algebras_give_lts(make):
    g = make()
    assert check_lie_axioms(g).passed
    assert check_lts_axioms(lie_to_lts(g)).passed


def test_sl2_triple_bracket():
    a = lie_to_lts(fixtures.lie_sl2())
    # [[h, e], e] = [2e, e] = 0 and [[e, f], e] = [h, e] = 2e
    assert bracket(a, (1, 0, 0), (0, 1, 0), (0, 1, 0)) == (0, 0, 0)
    assert bracket(a, (0, 1, 0), (0, 0, 1), (0, 1, 0)) == (0, 2, 0)


def test_sl2_lie_bracket():
    g = fixtures.lie_sl2()
    h, e, f = (basis_vector(3, i) for i in range(3))
    assert lie_bracket(g, e, f) == h
    assert lie_bracket(g, h, f) == (0, 0, -2)
    with pytest.raises(DimensionMismatch):
        basis_vector(3, 3)


def test_jacobi_failure_is_refused():
    # [x, y] = x, [y, z] = x, [x, z] = y breaks Jacobi
    g = LieStructure.from_table(3, [((0, 1), {0: 1}), ((1, 2), {0: 1}), ((0, 2), {1: 1})])
    assert not check_lie_axioms(g).passed
    with pytest.raises(NotALieAlgebra):
        lie_to_lts(g)


def test_inner_derivation():
    a = fixtures.lts_dim2()
    # z -> [e1, e2, z] sends e2 to e1
    inner = Matrix.from_rows([[0, 1], [0, 0]]).to_array()
    assert check_derivation(a, inner).passed
    assert not check_derivation(a, Matrix.from_rows([[1, 0], [0, 1]]).to_array()).passed


def test_morphism_check():
    a = fixtures.lts_dim2()
    good = AlgebraMorphism(a, a, Matrix.from_rows([[2, 0], [0, 1]]))
    assert check_lts_morphism(good).passed
    bad = AlgebraMorphism(a, a, Matrix.from_rows([[1, 0], [0, 2]]))
    assert not check_lts_morphism(bad).passed


def test_bivector_construction():
    x = Bivector.from_pairs(3, {(1, 0): 2, (0, 2): "1/2"})
    assert pair_basis(3) == [(0, 1), (0, 2), (1, 2)]
    assert x.to_vector() == (-2, Fraction(1, 2), 0)
    assert x.coeffs[1, 0] == 2
    assert Bivector.from_vector(3, x.to_vector()) == x
    with pytest.raises(DimensionMismatch):
        Bivector.from_pairs(2, {(0, 0): 1})
    for pair in [(0, 2), (2, 0), (-1, 0)]:
        with pytest.raises(DimensionMismatch, match="out of range"):
            Bivector.from_pairs(2, {pair: 1})


def test_bivector_acts_through_bracket():
    a = fixtures.lts_dim2()
    x = Bivector.from_pairs(2, {(0, 1): 1})
    assert adjoint_action(a, x, (0, 1)) == (1, 0)
    assert adjoint_action(a, Bivector.zero(2), (0, 1)) == (0, 0)


SCALARS = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@pytest.mark.parametrize("make", [fixtures.lts_dim2, fixtures.lts_dim4])
@settings(max_examples=60, derandomize=True, deadline=None)
@given(data=st.data())
def test_bracket_is_trilinear(make, data):
    a = make()
    vector = st.lists(SCALARS, min_size=a.dim, max_size=a.dim)
    x, y, z, w = (tuple(data.draw(vector)) for _ in range(4))
    s = data.draw(SCALARS)
    combo = tuple(s * p + q for p, q in zip(x, y))

    def expected(u, v):
        return tuple(s * p + q for p, q in zip(u, v))

    assert bracket(a, combo, z, w) == expected(bracket(a, x, z, w), bracket(a, y, z, w))
    assert bracket(a, z, combo, w) == expected(bracket(a, z, x, w), bracket(a, z, y, w))
    assert bracket(a, z, w, combo) == expected(bracket(a, z, w, x), bracket(a, z, w, y))
    assert bracket(a, x, y, z) == tuple(-q for q in bracket(a, y, x, z))
