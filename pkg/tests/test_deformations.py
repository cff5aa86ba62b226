import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit import fixtures
from triplekit.cohomology import (
    Cochain,
    CochainSpace,
    cocycle_space,
    o_operator_coboundary,
    o_operator_cohomology,
    partial_T,
)
from triplekit.deformations import (
    DeformationSeries,
    EquivalencePair,
    check_equivalence,
    check_formal,
    check_infinitesimal,
    check_nijenhuis_element,
    check_trivial_deformation,
    extend_series,
    obstruction,
    rigidity_certificate,
    series_inverse,
    solve_next_coefficient,
)
from triplekit.errors import BaseMismatch, DimensionMismatch, NotInvertibleSeries
from triplekit.exactla import Matrix, image_basis
from triplekit.lts_core import Bivector, pair_basis
from triplekit.operators import OOperator
from triplekit.tensors import is_zero


def _rb():
    return fixtures.builtin("lts/dim2/rb")


def test_constant_series_is_formal():
    t = _rb()
    zero = Matrix.from_rows([[0, 0], [0, 0]])
    report = check_formal(DeformationSeries(t, (zero, zero)))
    assert report.passed
    assert report.details["first_failing_order"] is None


def test_scaled_operator_is_formal_to_any_order():
    # T + tT = (1 + t)T and the identity is homogeneous
    t = fixtures.builtin("lts/dim4/rb")
    report = check_formal(DeformationSeries(t, (t.matrix,)), order=4)
    assert report.passed


def test_moving_inside_the_family_is_formal():
    t = _rb()
    d = DeformationSeries(t, (fixtures.lts_dim2_operator(1, 0),))
    assert check_formal(d, order=3).passed


def test_coefficient_shape_checked():
    with pytest.raises(DimensionMismatch):
        DeformationSeries(_rb(), (Matrix.from_rows([[1, 0, 0]]),))


def test_solve_next_coefficient_from_base():
    t = _rb()
    d = DeformationSeries(t)
    assert is_zero(obstruction(d, 1))
    t1 = solve_next_coefficient(d)
    assert t1 is not None
    extended = extend_series(d, t1)
    assert extended.order == 1
    assert check_formal(extended).passed


def test_solved_coefficient_cancels_obstruction():
    t = _rb()
    d = DeformationSeries(t, (fixtures.lts_dim2_operator(1, 0),))
    t2 = solve_next_coefficient(d)
    assert t2 is not None
    assert check_formal(extend_series(d, t2)).passed


def test_infinitesimal_along_coboundary():
    t = _rb()
    x = Bivector.from_pairs(2, {(0, 1): 1})
    report = check_infinitesimal(t, partial_T(t, x).to_operator())
    assert report.check("order1").passed
    assert report.check("order1_matches_cocycle").passed
    assert report.details["cocycle"] is True


def test_zero_bivector_is_nijenhuis():
    report = check_nijenhuis_element(_rb(), Bivector.zero(2))
    assert report.passed
    assert report.cond1_pass and report.cond2_pass and report.cond3_pass
    assert report.to_report().passed


def test_nijenhuis_element_dimension_checked():
    with pytest.raises(DimensionMismatch):
        check_nijenhuis_element(_rb(), Bivector.zero(3))


def test_rigidity_certificate_is_one_sided():
    t = _rb()
    report = rigidity_certificate(t, Bivector.basis(2))
    h1 = o_operator_cohomology(t, 1)
    assert report.details["one_sided"] is True
    assert report.details["dim_Z1"] == h1.dim_cocycles
    assert report.details["codimension"] >= h1.dim_H
    if report.passed:
        assert h1.dim_H == 0


def test_rigidity_with_zero_candidate_only():
    t = _rb()
    report = rigidity_certificate(t, [Bivector.zero(2)])
    assert report.check("members_span_nijenhuis").passed
    assert report.details["dim_image"] == 0


def test_equivalence_with_zero_bivector():
    t = _rb()
    d = DeformationSeries(t, (fixtures.lts_dim2_operator(1, 0),))
    report = check_equivalence(t, d, d, Bivector.zero(2))
    assert report.passed
    assert report.check("difference_is_partial").passed


def test_equivalence_base_mismatch():
    t = _rb()
    other = OOperator(t.pair, fixtures.lts_dim2_operator(2, 2))
    with pytest.raises(BaseMismatch):
        check_equivalence(t, DeformationSeries(other), DeformationSeries(t), Bivector.zero(2))


def test_trivial_deformation_generated_by_bivector():
    t = _rb()
    x = Bivector.from_pairs(2, {(0, 1): 1})
    d = DeformationSeries(t, (partial_T(t, x).to_operator(),))
    report = check_trivial_deformation(t, d, EquivalencePair(x))
    assert report.check("order_0").passed
    assert report.check("order_1").passed
    assert report.check("order1_in_image_of_partial").passed


def test_series_inverse():
    one = Matrix.from_rows([[1, 0], [0, 1]]).to_array()
    nil = Matrix.from_rows([[0, 1], [0, 0]]).to_array()
    inv = series_inverse([one, nil], 3)
    # (1 + tN)^-1 = 1 - tN when N^2 = 0
    assert is_zero(inv[1] + nil)
    assert is_zero(inv[2]) and is_zero(inv[3])
    with pytest.raises(NotInvertibleSeries):
        series_inverse([nil], 1)


def _random_scalar(rng):
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def _random_cocycle(rng, t, kernel):
    space = CochainSpace(1, t.pair.module_dim, t.pair.source_dim)
    coords = [Fraction(0)] * space.dim
    for v in kernel.basis:
        s = _random_scalar(rng)
        coords = [a + s * b for a, b in zip(coords, v)]
    return space.cochain(coords).to_operator()


@pytest.mark.parametrize("name", ["lts/dim2/rb", "lts/dim4/rb"])
def test_random_first_order_cocycles_are_infinitesimal(name):
    t = fixtures.builtin(name)
    kernel = cocycle_space(o_operator_coboundary(t, 1).matrix)
    assert kernel.dim > 0
    rng = random.Random(21)
    for _ in range(50):
        report = check_infinitesimal(t, _random_cocycle(rng, t, kernel))
        assert report.check("order1").passed
        assert report.check("order1_matches_cocycle").passed
        assert report.details["cocycle"] is True


@pytest.mark.parametrize("name", ["lts/dim2/rb", "lts/dim4/rb"])
def test_random_bivectors_relate_first_orders_by_partial(name):
    t = fixtures.builtin(name)
    n = t.pair.source_dim
    kernel = cocycle_space(o_operator_coboundary(t, 1).matrix)
    image = image_basis(o_operator_coboundary(t, 0).matrix)
    rng = random.Random(22)
    for _ in range(20):
        t1 = _random_cocycle(rng, t, kernel)
        x = Bivector.from_vector(n, [_random_scalar(rng) for _ in pair_basis(n)])
        t1_other = Matrix.from_array(t1.to_array() - partial_T(t, x).to_operator().to_array())
        assert check_infinitesimal(t, t1_other).check("order1").passed

        difference = Cochain.from_operator(Matrix.from_array(t1.to_array() - t1_other.to_array()))
        assert image.contains(difference.coordinates())

        # T_1 + [X, T-] = T D(X) + T'_1 is the linear part of the equivalence
        report = check_equivalence(t, DeformationSeries(t, (t1,)), DeformationSeries(t, (t1_other,)), x)
        assert report.check("operator_linear").passed
        if report.passed:
            assert report.check("difference_is_partial").passed
