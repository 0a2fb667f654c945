from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levired.endalgebra import (
    CONSTANCY_LOG,
    EndAlgebra,
    GlobalEndo,
    InvariantBreach,
    Point,
    UnsplitSpectrum,
    char_poly,
    evaluate_at,
    jordan_chevalley,
    primary_idempotents,
    radical,
    spectral_idempotents,
    unit_inverse,
)
from levired.exactmath.linalg import matmul
from levired.exactmath.roots import SearchBudget
from levired.exactmath.scalar import Scalar

from conftest import endo, endos, poly, split_types


def S(rows):
    return [[Scalar(x) for x in r] for r in rows]


@pytest.mark.parametrize(
    "a, dim",
    [((0,), 1), ((0, 0), 4), ((1, 0), 4), ((2, 0), 5), ((2, -1), 6), ((2, 1, 1), 9), ((3, 0, 0, -2), 26)],
)
def test_dimension_examples(a, dim):
    assert EndAlgebra(a).dim == dim


@given(split_types(1, 5, 4))
@settings(max_examples=50, deadline=None)
def test_dimension_closed_form(a):
    expected = sum(max(0, x - y + 1) for x in a for y in a)
    assert EndAlgebra(a).dim == expected


def test_degree_bound_enforced():
    with pytest.raises(ValueError, match="degree bound"):
        endo((0, 1), [[[1], [0, 1]], [[0], [1]]])


def test_evaluate_in_both_charts():
    sigma = endo((1, 0), [[[1], [0, 1]], [[0], [1]]])
    assert evaluate_at(sigma, Point.z(2)) == S([[1, 2], [0, 1]])
    assert evaluate_at(sigma, Point.w(0)) == S([[1, 1], [0, 1]])
    assert evaluate_at(sigma, Point.w(2)) == S([[1, 1], [0, 1]])
    const = endo((1, 0), [[[1], [3]], [[0], [1]]])
    assert evaluate_at(const, Point.w(0)) == S([[1, 0], [0, 1]])


@given(st.data(), split_types())
@settings(max_examples=30, deadline=None)
def test_evaluation_is_multiplicative(data, a):
    x, y = data.draw(endos(a)), data.draw(endos(a))
    for p in (Point.z(0), Point.z(2), Point.w(0), Point.w(-1)):
        assert evaluate_at(x * y, p) == matmul(evaluate_at(x, p), evaluate_at(y, p))


@given(st.data(), split_types())
@settings(max_examples=30, deadline=None)
def test_char_poly_constant_for_global_endos(data, a):
    x = data.draw(endos(a))
    before = CONSTANCY_LOG["failed"]
    chi, cert = char_poly(x)
    assert cert["constant"]
    assert CONSTANCY_LOG["failed"] == before
    assert chi.degree == len(a)


def test_char_poly_flags_non_global_input():
    saved = dict(CONSTANCY_LOG)
    try:
        bad = GlobalEndo((0,), [[poly(0, 1)]], check=False)
        with pytest.raises(InvariantBreach):
            char_poly(bad)
    finally:
        CONSTANCY_LOG.update(saved)


def test_jordan_chevalley_examples():
    sigma = endo((1, 0), [[[2], [0, 1]], [[0], [2]]])
    s, n = jordan_chevalley(sigma)
    assert s == GlobalEndo.identity((1, 0)) * 2
    assert n == endo((1, 0), [[[0], [0, 1]], [[0], [0]]])
    semisimple = endo((1, 0), [[[1], [0, 1]], [[0], [2]]])
    s, n = jordan_chevalley(semisimple)
    assert s == semisimple and n.is_zero()


@given(st.data(), split_types(2, 3, 2))
@settings(max_examples=25, deadline=None)
def test_jordan_chevalley_properties(data, a):
    x = data.draw(endos(a, -2, 2))
    try:
        s, n = jordan_chevalley(x, SearchBudget(conductor=12))
    except UnsplitSpectrum:
        return
    assert s + n == x
    assert s * n == n * s
    assert (n ** len(a)).is_zero()


def test_spectral_idempotents_example():
    sigma = endo((1, 0), [[[1], [0, 1]], [[0], [2]]])
    (l1, p1), (l2, p2) = spectral_idempotents(sigma)
    assert (l1, l2) == (Scalar(1), Scalar(2))
    assert p1 == endo((1, 0), [[[1], [0, -1]], [[0], [0]]])
    assert p2 == endo((1, 0), [[[0], [0, 1]], [[0], [1]]])


def test_unsplit_spectrum_and_primary_idempotents():
    sigma = GlobalEndo.constant((0, 0), [[0, 2], [1, 0]])
    with pytest.raises(UnsplitSpectrum) as info:
        jordan_chevalley(sigma, SearchBudget(conductor=4))
    assert info.value.unsplit == [poly(-2, 0, 1)]
    assert primary_idempotents(sigma, [poly(-2, 0, 1)]) == [GlobalEndo.identity((0, 0))]
    # over conductor 8 sqrt(2) exists
    assert len(spectral_idempotents(sigma, SearchBudget(conductor=8))) == 2


def test_primary_idempotents_two_factors():
    sigma = GlobalEndo.constant((0, 0, 0), [[0, 2, 0], [1, 0, 0], [0, 0, 5]])
    e1, e2 = primary_idempotents(sigma, [poly(-2, 0, 1), poly(-5, 1)])
    assert e1 == GlobalEndo.constant((0, 0, 0), [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert e1 * e2 == GlobalEndo.zero((0, 0, 0))


def test_unit_inverse():
    u = endo((2, 0), [[[1], [1, 2, 3]], [[0], [-1]]])
    assert unit_inverse(u) * u == GlobalEndo.identity((2, 0))
    with pytest.raises(ZeroDivisionError):
        unit_inverse(GlobalEndo.zero((0,)))


@pytest.mark.parametrize("a, rad_dim", [((0, 0), 0), ((1, 0), 2), ((2, 1, 1), 4), ((1, 0, -1), 7)])
def test_radical_of_full_algebra(a, rad_dim):
    assert len(radical(EndAlgebra(a).full())) == rad_dim


@pytest.mark.parametrize("a", [(1, 0), (2, 1, 1), (1, 1, 0)])
def test_radical_is_nilpotent_ideal(a):
    A = EndAlgebra(a)
    F = A.full()
    R = radical(F)
    from levired.endalgebra import Subalgebra

    Rs = Subalgebra(A, R)
    for r in R:
        assert (r ** len(a)).is_zero()
        for b in A.basis:
            assert Rs.contains(b * r) and Rs.contains(r * b)


def test_subalgebra_membership_and_corner():
    A = EndAlgebra((1, 0))
    F = A.full()
    assert F.dim == 4 and F.is_closed()
    e = endo((1, 0), [[[1], [0]], [[0], [0]]])
    C = F.corner(e)
    assert C.dim == 1 and C.contains(e)
    assert not A.full().corner(e).contains(GlobalEndo.identity((1, 0)))
