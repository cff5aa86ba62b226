import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit import fixtures
from triplekit.cohomology import induced_bracket
from triplekit.errors import DimensionMismatch, NotAnOOperator, NotNijenhuis
from triplekit.exactla import Matrix
from triplekit.operators import (
    NijenhuisCandidate,
    OOperator,
    OOperatorMorphism,
    bar_lift,
    check_four_way,
    check_graph_subalgebra,
    check_nijenhuis_operator,
    check_o_morphism,
    check_o_operator,
    check_prelts_axioms,
    check_rota_baxter,
    induced_prelts,
    nijenhuis_deformed_bracket,
    nijenhuis_morphism,
    prelts_commutator,
    require_o_operator,
)
from triplekit.lts_core import check_lts_morphism
from triplekit.reps import semidirect_product

SMALL = range(-2, 3)


@pytest.mark.parametrize("a", SMALL)
@pytest.mark.parametrize("b", SMALL)
def test_dim2_rota_baxter_family(a, b):
    algebra = fixtures.lts_dim2()
    r = fixtures.lts_dim2_operator(a, b)
    assert check_rota_baxter(algebra, r).passed
    assert check_o_operator(OOperator(fixtures.adjoint_pair(algebra), r)).passed


def _random_rationals(rng, count):
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(count)]


def test_dim4_rota_baxter_family():
    rng = random.Random(4)
    algebra = fixtures.lts_dim4()
    for _ in range(25):
        params = _random_rationals(rng, 9)
        assert check_rota_baxter(algebra, fixtures.lts_dim4_operator(*params)).passed


def test_identity_is_not_rota_baxter():
    report = check_rota_baxter(fixtures.lts_dim2(), Matrix.from_rows([[1, 0], [0, 1]]))
    assert not report.passed
    assert report.first_failure().witness.indices == (0, 1, 1)


def test_require_o_operator_raises():
    t = OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), Matrix.from_rows([[1, 0], [0, 1]]))
    with pytest.raises(NotAnOOperator):
        require_o_operator(t)


def test_operator_shape_checked():
    with pytest.raises(DimensionMismatch):
        OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), Matrix.from_rows([[1, 0, 0], [0, 1, 0]]))


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.lists(st.integers(min_value=-2, max_value=2), min_size=4, max_size=4))
def test_four_characterizations_agree(entries):
    T = Matrix.from_rows([entries[:2], entries[2:]])
    verdicts = check_four_way(OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), T))
    assert len(set(verdicts.values())) == 1, verdicts


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=3), min_size=4, max_size=4))
def test_four_characterizations_agree_on_rationals(entries):
    T = Matrix.from_rows([entries[:2], entries[2:]])
    verdicts = check_four_way(OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), T))
    assert len(set(verdicts.values())) == 1, verdicts


def test_four_characterizations_agree_on_dim4():
    rng = random.Random(44)
    pair = fixtures.adjoint_pair(fixtures.lts_dim4())
    for k in range(60):
        member = fixtures.lts_dim4_operator(*_random_rationals(rng, 9))
        if k % 3 == 0:
            verdicts = check_four_way(OOperator(pair, member))
            assert all(verdicts.values()), verdicts
            continue
        if k % 3 == 1:
            # one entry moved off the family
            arr = member.to_array()
            arr[rng.randrange(4), rng.randrange(4)] += _random_rationals(rng, 1)[0]
            T = Matrix.from_array(arr)
        else:
            T = Matrix.from_rows([[rng.randint(-1, 1) for _ in range(4)] for _ in range(4)])
        verdicts = check_four_way(OOperator(pair, T))
        assert len(set(verdicts.values())) == 1, verdicts


def test_four_way_on_fixture_operator():
    verdicts = check_four_way(fixtures.builtin("lts/dim4/rb"))
    assert all(verdicts.values())


def test_graph_subalgebra_failure_has_witness():
    t = OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), Matrix.from_rows([[1, 0], [0, 1]]))
    report = check_graph_subalgebra(t)
    assert not report.passed
    assert report.checks[0].witness is not None


@pytest.mark.parametrize("scale", [1, 2, "-1/3"])
def test_scalar_nijenhuis(scale):
    algebra = fixtures.lts_dim2()
    s = Fraction(scale)
    nc = NijenhuisCandidate(algebra, Matrix.from_rows([[s, 0], [0, s]]))
    assert check_nijenhuis_operator(nc).passed
    deformed = nijenhuis_deformed_bracket(nc)
    assert deformed.c[0, 1, 1, 0] == s * s


def test_nijenhuis_operator_maps_deformed_bracket_back():
    nc = NijenhuisCandidate(fixtures.lts_dim2(), Matrix.from_rows([[2, 0], [0, 2]]))
    assert check_lts_morphism(nijenhuis_morphism(nc)).passed


def test_lift_of_non_operator_is_not_nijenhuis():
    t = OOperator(fixtures.adjoint_pair(fixtures.lts_dim2()), Matrix.from_rows([[1, 0], [0, 1]]))
    nc = NijenhuisCandidate(semidirect_product(t.pair), bar_lift(t))
    assert not check_nijenhuis_operator(nc).passed
    with pytest.raises(NotNijenhuis):
        nijenhuis_deformed_bracket(nc)


@pytest.mark.parametrize("name", ["lts/dim2/rb", "lts/dim4/rb"])
def test_induced_prelts_commutes_to_induced_bracket(name):
    t = fixtures.builtin(name)
    p = induced_prelts(t)
    assert check_prelts_axioms(p).passed
    assert prelts_commutator(p) == induced_bracket(t)


def test_morphism_fixture():
    report = check_o_morphism(fixtures.lts_dim2_morphism())
    assert report.passed
    assert report.check("graph_agrees").passed


def test_morphism_failure_is_located():
    m = fixtures.lts_dim2_morphism()
    ident = Matrix.from_rows([[1, 0], [0, 1]])
    broken = OOperatorMorphism(m.source, m.target, ident, ident)
    report = check_o_morphism(broken)
    assert not report.passed
    assert not report.check("intertwines_operators").passed
    assert report.check("phi_lts_morphism").passed
