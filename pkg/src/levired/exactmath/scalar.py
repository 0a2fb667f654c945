"""Exact elements of cyclotomic fields Q(zeta_m).

An element is stored as its coordinate vector in the power basis
1, zeta, ..., zeta^(phi(m)-1) modulo the m-th cyclotomic polynomial.
Elements that happen to be rational are always normalised to conductor 1,
so rationals have a single canonical form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = ["Scalar", "cyclotomic_poly", "totient", "parse_scalar", "as_scalar"]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _int_poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic; low-to-high coefficients
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _int_poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta_m^k reduced to the power basis, for 0 <= k < 2*phi(m)."""
    phi = totient(m)
    cyc = cyclotomic_poly(m)
    rows = []
    cur = [Fraction(0)] * phi
    cur[0] = Fraction(1)
    for _ in range(max(2 * phi, 2)):
        rows.append(tuple(cur))
        # multiply by zeta: shift and reduce the overflow coefficient
        top = cur[-1]
        nxt = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(phi):
                nxt[i] -= top * cyc[i]
        cur = nxt
    return tuple(rows)


def _reduce(m: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    phi = totient(m)
    if len(coeffs) <= phi:
        return tuple(coeffs) + (Fraction(0),) * (phi - len(coeffs))
    table = _power_table(m)
    out = list(coeffs[:phi])
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            row = table[k] if k < len(table) else _zeta_power(m, k)
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


@lru_cache(maxsize=None)
def _zeta_power(m: int, k: int) -> tuple[Fraction, ...]:
    k %= m
    table = _power_table(m)
    if k < len(table):
        return table[k]
    half = _zeta_power(m, k // 2)
    sq = _mul_coeffs(m, half, half)
    return _mul_coeffs(m, sq, table[1]) if k % 2 else sq


def _mul_coeffs(m: int, a, b) -> tuple[Fraction, ...]:
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _reduce(m, prod)


@lru_cache(maxsize=None)
def _embedding(m: int, big: int) -> tuple[tuple[Fraction, ...], ...]:
    """Images of zeta_m^j (j < phi(m)) inside Q(zeta_big), m | big."""
    step = big // m
    return tuple(_zeta_power(big, j * step) for j in range(totient(m)))


# Extended Euclid over Q[x]; coefficient lists low-to-high.
def _qtrim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _qdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv
        q[k] = c
        if c:
            for i, d in enumerate(b):
                a[k + i] -= c * d
    return _qtrim(q), _qtrim(a[: len(b) - 1])


def _qsub_mul(a, q, b):
    out = [Fraction(0)] * max(len(a), len(q) + len(b) - 1 if q and b else 0)
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(q):
        for j, y in enumerate(b):
            out[i + j] -= x * y
    return _qtrim(out)


def _qinverse_mod(a: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    r0, r1 = _qtrim(list(mod)), _qtrim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    inv = 1 / r1[0]
    return [c * inv for c in s1]


class Scalar:
    """Element of Q(zeta_m), immutable."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, value=0, conductor: int = 1, coeffs=None):
        if coeffs is not None:
            phi = totient(conductor)
            cs = [Fraction(c) for c in coeffs]
            if len(cs) > phi:
                cs = list(_reduce(conductor, cs))
            cs += [Fraction(0)] * (phi - len(cs))
            _init(self, conductor, tuple(cs))
        else:
            if isinstance(value, Scalar):
                _init(self, value.conductor, value.coeffs)
            else:
                _init(self, 1, (Fraction(value),))

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Scalar":
        """The root of unity exp(2 pi i k / m)."""
        return _make(m, _zeta_power(m, k))

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return self.conductor == 1

    @property
    def rational(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def embed(self, big: int) -> tuple[Fraction, ...]:
        """Coordinates of self inside Q(zeta_big); requires conductor | big."""
        m = self.conductor
        if big % m:
            raise ValueError(f"Q(zeta_{m}) does not embed in Q(zeta_{big})")
        if m == big:
            return self.coeffs
        phi = totient(big)
        out = [Fraction(0)] * phi
        for c, img in zip(self.coeffs, _embedding(m, big)):
            if c:
                for i in range(phi):
                    if img[i]:
                        out[i] += c * img[i]
        return tuple(out)

    def galois(self, a: int) -> "Scalar":
        """Image under the automorphism zeta -> zeta^a, gcd(a, m) = 1."""
        m = self.conductor
        if m == 1:
            return self
        if gcd(a, m) != 1:
            raise ValueError("exponent must be a unit modulo the conductor")
        phi = totient(m)
        out = [Fraction(0)] * phi
        for j, c in enumerate(self.coeffs):
            if c:
                img = _zeta_power(m, a * j)
                for i in range(phi):
                    if img[i]:
                        out[i] += c * img[i]
        return _make(m, tuple(out))

    def to_complex(self, a: int = 1):
        """Numerical value under the embedding zeta -> exp(2 pi i a / m)."""
        import mpmath

        m = self.conductor
        if m == 1:
            return mpmath.mpf(self.coeffs[0].numerator) / self.coeffs[0].denominator
        w = mpmath.expjpi(mpmath.mpf(2 * a) / m)
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * w + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def denominator(self) -> int:
        d = 1
        for c in self.coeffs:
            d = _lcm(d, c.denominator)
        return d

    # -- arithmetic --------------------------------------------------------
    def _common(self, other: "Scalar"):
        m = _lcm(self.conductor, other.conductor)
        return m, self.embed(m), other.embed(m)

    def __add__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1 and other.conductor == 1:
            return _make1(self.coeffs[0] + other.coeffs[0])
        m, a, b = self._common(other)
        return _make(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return _make(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1 and other.conductor == 1:
            return _make1(self.coeffs[0] - other.coeffs[0])
        m, a, b = self._common(other)
        return _make(m, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1:
            c = self.coeffs[0]
            if other.conductor == 1:
                return _make1(c * other.coeffs[0])
            return _make(other.conductor, tuple(c * x for x in other.coeffs))
        if other.conductor == 1:
            c = other.coeffs[0]
            return _make(self.conductor, tuple(c * x for x in self.coeffs))
        m, a, b = self._common(other)
        return _make(m, _mul_coeffs(m, a, b))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.conductor
        if m == 1:
            return _make1(1 / self.coeffs[0])
        cyc = [Fraction(c) for c in cyclotomic_poly(m)]
        inv = _qinverse_mod(list(self.coeffs), cyc)
        return _make(m, _reduce(m, inv))

    def __truediv__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc, base = ONE, self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return False
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        if self.conductor == 1 or other.conductor == 1:
            # normalised rationals never equal a non-rational element
            return False
        _, a, b = self._common(other)
        return a == b

    def __hash__(self):
        if self.conductor == 1:
            return hash(self.coeffs[0])
        # equal elements of different conductors must collide
        return hash("cyclotomic")

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if self.conductor == 1:
            return _fmt(self.coeffs[0])
        return f"[{self.conductor}; " + ", ".join(_fmt(c) for c in self.coeffs) + "]"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _init(obj, m, coeffs):
    if m != 1 and not any(coeffs[1:]):
        m, coeffs = 1, coeffs[:1]
    object.__setattr__(obj, "conductor", m)
    object.__setattr__(obj, "coeffs", coeffs)


def _make(m: int, coeffs: tuple[Fraction, ...]) -> Scalar:
    s = object.__new__(Scalar)
    _init(s, m, coeffs)
    return s


def _make1(c: Fraction) -> Scalar:
    s = object.__new__(Scalar)
    object.__setattr__(s, "conductor", 1)
    object.__setattr__(s, "coeffs", (c,))
    return s


def as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return _make1(Fraction(x))
    return NotImplemented


ZERO = _make1(Fraction(0))
ONE = _make1(Fraction(1))
Scalar.ZERO = ZERO
Scalar.ONE = ONE

_CYC_RE = re.compile(r"^\[\s*(\d+)\s*;(.*)\]$")


def parse_scalar(text) -> Scalar:
    """Parse "p/q" or "[m; c0, c1, ...]" (ints are accepted too)."""
    if isinstance(text, (int, Scalar, Fraction)):
        return Scalar(text)
    text = str(text).strip()
    match = _CYC_RE.match(text)
    if match:
        m = int(match.group(1))
        parts = [p.strip() for p in match.group(2).split(",") if p.strip()]
        if len(parts) != totient(m):
            raise ValueError(f"conductor {m} needs {totient(m)} coordinates: {text!r}")
        return Scalar(conductor=m, coeffs=[Fraction(p) for p in parts])
    return Scalar(Fraction(text))
