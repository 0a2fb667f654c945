"""Dense univariate polynomials with Scalar coefficients."""

from __future__ import annotations

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = ["Poly", "poly_squarefree_split"]


def _trim(cs: list) -> tuple:
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


class Poly:
    """Polynomial in one variable; ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([Scalar(c) if not isinstance(c, Scalar) else c for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([ZERO] * k + [as_scalar(c)])

    @classmethod
    def t(cls) -> "Poly":
        return cls([ZERO, ONE])

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls([ONE])
        for r in roots:
            p = p * cls([-as_scalar(r), ONE])
        return p

    # -- structure ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        inv = self.coeffs[-1].inverse()
        return Poly._raw(tuple(c * inv for c in self.coeffs))

    def conductor(self) -> int:
        from math import lcm

        m = 1
        for c in self.coeffs:
            m = lcm(m, c.conductor)
        return m

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly._raw(_trim([x + y for x, y in zip(a, b)] + list(a[len(b):])))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)) or not isinstance(other, Poly):
            c = as_scalar(other)
            if c is NotImplemented:
                return NotImplemented
            if c.is_zero():
                return Poly._raw(())
            return Poly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        acc = Poly([ONE])
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = other.lc().inverse()
        if len(rem) <= db:
            return Poly._raw(()), self
        quo = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            c = rem[k + db] * inv
            quo[k] = c
            if not c.is_zero():
                for i, d in enumerate(other.coeffs):
                    rem[k + i] = rem[k + i] - c * d
        return Poly._raw(_trim(quo)), Poly._raw(_trim(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "Poly":
        return Poly._raw(_trim([c * k for k, c in enumerate(self.coeffs)][1:]))

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly._raw((c,))
        return acc

    def galois(self, a: int) -> "Poly":
        return Poly._raw(tuple(c.galois(a) for c in self.coeffs))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        c = as_scalar(other)
        if c is NotImplemented:
            return False
        return self.coeffs == ((c,) if not c.is_zero() else ())

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                terms.append(f"({c})")
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({c})*{mono}")
        return " + ".join(reversed(terms))


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([as_scalar(x)])


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = Poly([ONE]), Poly()
    t0, t1 = Poly(), Poly([ONE])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = r0.lc().inverse()
    return r0 * inv, s0 * inv, t0 * inv


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(a % m, m)
    if g.degree != 0:
        raise ZeroDivisionError("not invertible modulo the given polynomial")
    return s % m


def poly_squarefree_split(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's squarefree decomposition: monic, pairwise coprime factors.

    Constant factors are dropped, so the product matches ``p`` up to a unit.
    """
    if p.is_zero():
        raise ValueError("zero input")
    p = p.monic()
    out = []
    dp = p.derivative()
    a = gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a) if not a.is_zero() else dp
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        g = gcd(b, d)
        if g.degree > 0:
            out.append((g, k))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        k += 1
    return out
