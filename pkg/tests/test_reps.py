import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit import fixtures
from triplekit.errors import DimensionMismatch, InvalidRepresentation, NotAnLts
from triplekit.lts_core import LtsStructure, check_lts_axioms
from triplekit.reps import (
    LtsRepPair,
    LtsRepresentation,
    adjoint_rep,
    check_rep_axioms,
    derived_D,
    semidirect_product,
    theta_of,
    zero_rep,
)
from triplekit.tensors import zeros


@pytest.mark.parametrize("make", [fixtures.lts_dim2, fixtures.lts_dim4])
def test_adjoint_representation(make):
    rep = adjoint_rep(make())
    assert check_rep_axioms(rep).passed
    pair = LtsRepPair.of(rep)
    assert check_lts_axioms(semidirect_product(pair)).passed


def test_adjoint_theta_is_right_bracket():
    rep = adjoint_rep(fixtures.lts_dim2())
    # θ(e2, e2) e1 = [e1, e2, e2] = e1
    assert theta_of(rep, (0, 1), (0, 1)).apply((1, 0)) == (1, 0)
    # D(e1, e2) e2 = [e2, e2, e1] - [e2, e1, e2]
    assert derived_D(rep, (1, 0), (0, 1)).apply((0, 1)) == (1, 0)


def test_zero_representation_is_valid():
    assert check_rep_axioms(zero_rep(fixtures.lts_dim4(), 3)).passed


def test_adjoint_of_non_lts_is_refused():
    bad = LtsStructure.from_table(3, [((0, 1, 2), {0: 1})])
    with pytest.raises(NotAnLts):
        adjoint_rep(bad)


def test_broken_theta_fails_and_semidirect_refuses():
    a = fixtures.lts_dim2()
    theta = zeros((2, 2, 1, 1))
    theta[0, 0, 0, 0] = 1
    rep = LtsRepresentation(a, 1, theta)
    report = check_rep_axioms(rep)
    assert not report.passed
    assert report.first_failure().witness is not None
    with pytest.raises(InvalidRepresentation):
        semidirect_product(LtsRepPair.of(rep))
    # the raw tensor is still available, and it is not a triple system
    assert not check_lts_axioms(semidirect_product(LtsRepPair.of(rep), validate=False)).passed


def test_theta_shape_checked():
    with pytest.raises(DimensionMismatch):
        LtsRepresentation(fixtures.lts_dim2(), 2, zeros((2, 2, 3, 3)))


def test_pair_of_different_algebras_refused():
    rep = adjoint_rep(fixtures.lts_dim2())
    with pytest.raises(InvalidRepresentation):
        LtsRepPair(LtsStructure.zero(2), rep)
