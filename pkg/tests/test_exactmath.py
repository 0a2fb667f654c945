from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from levired.exactmath import LaurentMatrix, Poly, Scalar, parse_scalar
from levired.exactmath.linalg import charpoly, inverse, matmul, nullspace, rank
from levired.exactmath.poly import gcd, poly_squarefree_split, xgcd
from levired.exactmath.roots import SearchBudget, brute_force_roots, poly_split_roots, roots_in_field
from levired.exactmath.scalar import cyclotomic_poly, totient

from conftest import lmat, lp, poly

small = st.integers(-6, 6)
conductors = st.sampled_from([1, 3, 4, 5, 8, 12])


@st.composite
def scalars(draw, m=None):
    m = m or draw(conductors)
    if m == 1:
        return Scalar(Fraction(draw(small), draw(st.integers(1, 4))))
    return Scalar(conductor=m, coeffs=[draw(small) for _ in range(totient(m))])


def test_zeta_power_relations():
    i = Scalar.zeta(4)
    assert i * i == Scalar(-1)
    w = Scalar.zeta(3)
    assert w * w + w + 1 == Scalar(0)
    assert Scalar.zeta(8) ** 8 == Scalar(1)


def test_cyclotomic_polys_match_sympy():
    x = sympy.Symbol("x")
    for m in (1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 24):
        expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_poly(m)) == [int(c) for c in expected]


def test_sqrt2_lives_in_conductor_8():
    z = Scalar.zeta(8)
    r = z - z**3
    assert r * r == Scalar(2)


def test_mixed_conductor_arithmetic_embeds():
    i, w = Scalar.zeta(4), Scalar.zeta(3)
    s = i + w
    assert s.conductor == 12
    assert (s - w) == i


def test_scalar_string_round_trip():
    for s in (Scalar(Fraction(-3, 7)), Scalar.zeta(5) * 3 + 1, Scalar(0)):
        assert parse_scalar(str(s)) == s
    assert str(Scalar(Fraction(3, 2))) == "3/2"


@given(scalars(12), scalars(12), scalars(12))
@settings(max_examples=40, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * a.inverse() == Scalar(1)


@given(scalars())
@settings(max_examples=40, deadline=None)
def test_galois_is_multiplicative(a):
    m = a.conductor
    for k in (u for u in range(1, max(m, 2)) if sympy.gcd(u, m) == 1):
        assert (a * a).galois(k) == a.galois(k) * a.galois(k)


def test_poly_division_and_gcd():
    p = poly(-1, 0, 1)  # t^2 - 1
    q = poly(1, 1)
    assert p.exact_div(q) == poly(-1, 1)
    g, s, t = xgcd(poly(-1, 0, 1), poly(-2, 1))
    assert g == poly(1)
    assert s * poly(-1, 0, 1) + t * poly(-2, 1) == g
    assert gcd(poly(0, -1, 1), poly(0, 0, 1)) == poly(0, 1)


def test_squarefree_split_examples():
    # t^3 - t^2 = t^2 (t - 1)
    assert poly_squarefree_split(poly(0, 0, -1, 1)) == [(poly(-1, 1), 1), (poly(0, 1), 2)]
    # (t-1)^3
    assert poly_squarefree_split(poly(-1, 3, -3, 1)) == [(poly(-1, 1), 3)]


def test_squarefree_split_rejects_zero():
    import pytest

    with pytest.raises(ValueError, match="zero input"):
        poly_squarefree_split(Poly())


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.lists(st.integers(1, 3), min_size=1, max_size=4))
@settings(max_examples=30, deadline=None)
def test_squarefree_split_reassembles(roots, mults):
    p = Poly([Scalar(1)])
    for r, m in zip(roots, mults):
        p = p * poly(-r, 1) ** m
    parts = poly_squarefree_split(p)
    back = Poly([Scalar(1)])
    for f, m in parts:
        back = back * f**m
        assert gcd(f, f.derivative()).degree == 0
    assert back == p.monic()


def test_split_roots_examples():
    roots, unsplit = poly_split_roots(poly(-6, 11, -6, 1))
    assert [r for r, _ in roots] == [Scalar(1), Scalar(2), Scalar(3)]
    assert not unsplit
    roots, _ = poly_split_roots(poly(1, 1, 1))
    assert {r for r, _ in roots} == {Scalar.zeta(3), Scalar.zeta(3) ** 2}


def test_unsplit_is_reported_not_raised():
    split = poly_split_roots(poly(-7, 0, 0, 1), SearchBudget(conductor=24))
    assert split.roots == []
    assert split.unsplit == [poly(-7, 0, 0, 1)]


def test_conductor_bound_limits_the_search():
    # sqrt(5) needs conductor 5
    assert not poly_split_roots(poly(-5, 0, 1), SearchBudget(conductor=4)).splits
    assert poly_split_roots(poly(-5, 0, 1), SearchBudget(conductor=5)).splits


def test_roots_agree_with_brute_force_oracle():
    cases = [(poly(-2, 0, 1), 8), (poly(1, 0, 1), 4), (poly(1, 1, 1), 3), (poly(-2, 0, 1), 4), (poly(2, -3, 1), 1)]
    for p, L in cases:
        fast = sorted(map(str, roots_in_field(p, L)))
        slow = sorted(map(str, brute_force_roots(p, L, 2)))
        assert fast == slow


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
@settings(max_examples=25, deadline=None)
def test_split_roots_recover_constructed_roots(rs):
    p = Poly([Scalar(1)])
    for r in rs:
        p = p * poly(-r, 1)
    roots, unsplit = poly_split_roots(p)
    assert not unsplit
    got = sorted((int(r.rational), m) for r, m in roots)
    expected = sorted((r, rs.count(r)) for r in set(rs))
    assert got == expected


def test_laurent_matrix_inverse_and_det():
    T = lmat([[{1: 1}, {0: 1}], [0, {0: 1}]])
    assert T.det() == lp({1: 1})
    assert T @ T.inverse() == LaurentMatrix.identity(2)
    assert T.unit_determinant() == (Scalar(1), 1)
    assert lmat([[{1: 1}, 1], [{1: 1}, 1]]).unit_determinant() is None


def test_laurent_substitutions():
    f = lp({2: 1, 0: 3})
    assert f.substitute_affine(2, 1) == lp({2: 4, 1: 4, 0: 4})
    assert f.invert_variable() == lp({-2: 1, 0: 3})
    assert f.substitute_inversion(2) == lp({-2: 4, 0: 3})


def test_linear_algebra_against_sympy():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    m = [[Scalar(x) for x in r] for r in rows]
    assert rank(m) == sympy.Matrix(rows).rank()
    for v in nullspace(m, 3):
        assert all(x.is_zero() for r in matmul(m, [[c] for c in v]) for x in r)
    inv = inverse([[Scalar(2), Scalar(1)], [Scalar(1), Scalar(1)]])
    assert inv == [[Scalar(1), Scalar(-1)], [Scalar(-1), Scalar(2)]]
    t = sympy.Symbol("t")
    expected = sympy.Poly(sympy.Matrix(rows).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert charpoly(m) == Poly([Scalar(int(c)) for c in expected])
