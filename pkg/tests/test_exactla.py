import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit.errors import InvalidScalar, NotContained
from triplekit.exactla import (
    Matrix,
    image_basis,
    inverse,
    is_subspace,
    kernel_basis,
    quotient_dim,
    rank,
    solve,
    span,
)
from triplekit.tensors import as_fraction_array, exact_einsum
from triplekit.utils import format_scalar, parse_scalar


@pytest.mark.parametrize(
    "text, expected",
    [("3", Fraction(3)), ("-2/4", Fraction(-1, 2)), (" 7/1 ", Fraction(7)), (5, Fraction(5))],
)
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("bad", [0.5, "1.5", "1e3", "", "x/2", True, "1/0", "-3/0"])
def test_parse_scalar_refuses_inexact(bad):
    with pytest.raises(InvalidScalar):
        parse_scalar(bad)


def test_format_scalar():
    assert format_scalar(Fraction(6, 4)) == "3/2"
    assert format_scalar("-8/4") == "-2"


def test_kernel_and_image_dimensions():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    kernel = kernel_basis(m)
    assert kernel.dim == 2
    for v in kernel.basis:
        assert m.apply(v) == (0, 0)
    assert image_basis(m).dim == 1
    assert image_basis(m).contains(("1/2", 1))


def test_kernel_basis_is_reduced():
    kernel = kernel_basis(Matrix.from_rows([[1, 1, 0]]))
    for v, lead in zip(kernel.basis, kernel.leads):
        assert v[lead] == 1


def test_solve_and_inconsistent_system():
    m = Matrix.from_rows([[1, 1], [1, -1]])
    assert solve(m, [3, 1]) == (Fraction(2), Fraction(1))
    assert solve(Matrix.from_rows([[1, 1], [2, 2]]), [1, 3]) is None


def test_inverse():
    m = Matrix.from_rows([[2, 1], [1, 1]])
    inv = inverse(m)
    assert (m @ inv).to_rows() == [[1, 0], [0, 1]]
    assert inverse(Matrix.from_rows([[1, 2], [2, 4]])) is None


def test_subspace_coordinates_and_containment():
    s = span([(1, 0, 1), (0, 1, 1)], 3)
    assert s.coordinates((2, 3, 5)) == (Fraction(2), Fraction(3))
    with pytest.raises(NotContained):
        s.coordinates((1, 1, 1))


def test_is_subspace():
    plane = span([(1, 0, 1), (0, 1, 1)], 3)
    assert is_subspace(span([(1, 1, 2)], 3), plane)
    assert not is_subspace(span([(1, 0, 0)], 3), plane)


def test_quotient_dim_requires_containment():
    z = span([(1, 0)], 2)
    b = span([(0, 1)], 2)
    with pytest.raises(NotContained):
        quotient_dim(z, b)
    assert quotient_dim(span([(1, 0), (0, 1)], 2), b) == 1


def test_exact_einsum_keeps_fractions():
    a = as_fraction_array([["1/3", "1/2"], [1, "2/7"]])
    out = exact_einsum("ij,jk->ik", a, a)
    assert out[0, 0] == Fraction(1, 9) + Fraction(1, 2)
    assert all(isinstance(x, Fraction) for x in out.reshape(-1))


def test_exact_einsum_large_integers_do_not_overflow():
    big = as_fraction_array([[2**40, 2**40], [2**40, 2**40]])
    out = exact_einsum("ij,jk->ik", big, big)
    assert out[0, 0] == 2 * 2**80
