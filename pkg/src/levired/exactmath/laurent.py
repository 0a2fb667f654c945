"""Laurent polynomials in one or several variables, and matrices of them."""

from __future__ import annotations

from typing import Iterable

from .poly import Poly
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = ["Laurent", "MLaurent", "LaurentMatrix", "perm_sign"]


class Laurent:
    """Sparse Laurent polynomial in z: exponent -> nonzero Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                c = c if isinstance(c, Scalar) else Scalar(c)
                if not c.is_zero():
                    clean[int(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Laurent":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c) -> "Laurent":
        return cls({0: c})

    @classmethod
    def mono(cls, e: int, c=1) -> "Laurent":
        return cls({e: c})

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "Laurent":
        return cls._raw({k + shift: c for k, c in enumerate(p.coeffs) if not c.is_zero()})

    def to_poly(self) -> Poly:
        if self.terms and min(self.terms) < 0:
            raise ValueError("negative exponents present")
        if not self.terms:
            return Poly()
        cs = [ZERO] * (max(self.terms) + 1)
        for e, c in self.terms.items():
            cs[e] = c
        return Poly(cs)

    def is_zero(self) -> bool:
        return not self.terms

    def min_exp(self):
        return min(self.terms) if self.terms else None

    def max_exp(self):
        return max(self.terms) if self.terms else None

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coeff(self, e: int) -> Scalar:
        return self.terms.get(e, ZERO)

    def __add__(self, other):
        other = _lcoerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Laurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lcoerce(other))

    def __rsub__(self, other):
        return _lcoerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            c = as_scalar(other)
            if c is NotImplemented:
                return NotImplemented
            if c.is_zero():
                return Laurent._raw({})
            return Laurent._raw({e: x * c for e, x in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Laurent._raw({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ArithmeticError("only monomials are invertible")
            (e, c), = self.terms.items()
            return Laurent._raw({e * k: c**k})
        acc = Laurent._raw({0: ONE})
        for _ in range(k):
            acc = acc * self
        return acc

    def shift(self, k: int) -> "Laurent":
        return Laurent._raw({e + k: c for e, c in self.terms.items()})

    def __call__(self, x):
        x = as_scalar(x)
        acc = ZERO
        for e, c in self.terms.items():
            acc = acc + c * x**e
        return acc

    def invert_variable(self) -> "Laurent":
        """f(z) -> f(1/z)."""
        return Laurent._raw({-e: c for e, c in self.terms.items()})

    def substitute_affine(self, a, b) -> "Laurent":
        """f(z) -> f(a z + b); needs no negative exponents unless b = 0."""
        a, b = as_scalar(a), as_scalar(b)
        if b.is_zero():
            return Laurent._raw({e: c * a**e for e, c in self.terms.items()})
        if self.terms and min(self.terms) < 0:
            raise ValueError("affine substitution into negative powers is not Laurent")
        lin = Laurent._raw({1: a, 0: b}) if not a.is_zero() else Laurent.const(b)
        acc = Laurent._raw({})
        for c in reversed(self.to_poly().coeffs):
            acc = acc * lin + Laurent._raw({0: c} if not c.is_zero() else {})
        return acc

    def substitute_inversion(self, b) -> "Laurent":
        """f(z) -> f(b / z)."""
        b = as_scalar(b)
        return Laurent._raw({-e: c * b**e for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.terms == other.terms
        c = as_scalar(other)
        if c is NotImplemented:
            return False
        return self.terms == ({0: c} if not c.is_zero() else {})

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Laurent({ {e: str(c) for e, c in sorted(self.terms.items())} })"


def _lcoerce(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    if isinstance(x, Poly):
        return Laurent.from_poly(x)
    return Laurent.const(as_scalar(x))


class MLaurent:
    """Sparse Laurent polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = c if isinstance(c, Scalar) else Scalar(c)
            if not c.is_zero():
                e = tuple(e)
                assert len(e) == nvars
                clean[e] = clean[e] + c if e in clean else c
        self.terms = {e: c for e, c in clean.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MLaurent":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, nvars: int, c) -> "MLaurent":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1, c=1) -> "MLaurent":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MLaurent._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MLaurent._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MLaurent):
            c = as_scalar(other)
            if c is NotImplemented:
                return NotImplemented
            return MLaurent._raw(self.nvars, {e: x * c for e, x in self.terms.items() if not (x * c).is_zero()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MLaurent._raw(self.nvars, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def _coerce(self, x) -> "MLaurent":
        if isinstance(x, MLaurent):
            return x
        return MLaurent.const(self.nvars, as_scalar(x))

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ArithmeticError("only monomials are invertible")
            (e, c), = self.terms.items()
            return MLaurent._raw(self.nvars, {tuple(x * k for x in e): c**k})
        acc = MLaurent.const(self.nvars, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def substitute(self, images: list["MLaurent"], nvars_out: int) -> "MLaurent":
        """Replace variable i by images[i] (an MLaurent in nvars_out variables)."""
        out = MLaurent(nvars_out)
        cache: dict = {}
        for e, c in self.terms.items():
            term = MLaurent.const(nvars_out, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def derivative(self, i: int) -> "MLaurent":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MLaurent._raw(self.nvars, out)

    def specialize(self, i: int, value) -> "MLaurent":
        """Set variable i to a Scalar value; the result keeps nvars - 1 variables."""
        value = as_scalar(value)
        out = MLaurent(self.nvars - 1)
        for e, c in self.terms.items():
            f = e[:i] + e[i + 1:]
            out = out + MLaurent._raw(self.nvars - 1, {f: c * value ** e[i]})
        return out

    def to_laurent(self) -> Laurent:
        assert self.nvars == 1
        return Laurent._raw({e[0]: c for e, c in self.terms.items()})

    @classmethod
    def from_laurent(cls, f: Laurent, nvars: int, index: int) -> "MLaurent":
        terms = {}
        for e, c in f.terms.items():
            k = [0] * nvars
            k[index] = e
            terms[tuple(k)] = c
        return cls._raw(nvars, terms)

    def exponents(self, i: int) -> list[int]:
        return sorted({e[i] for e in self.terms})

    def coefficient_in(self, i: int, k: int) -> "MLaurent":
        """Coefficient of x_i^k, as a polynomial in the remaining variables."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + e[i + 1:]] = c
        return MLaurent._raw(self.nvars - 1, out)

    def __eq__(self, other):
        if isinstance(other, MLaurent):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == self._coerce(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"MLaurent({self.nvars}, { {e: str(c) for e, c in sorted(self.terms.items())} })"


def perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


class LaurentMatrix:
    """Square matrix whose entries are Laurent (or MLaurent) polynomials."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(e if isinstance(e, (Laurent, MLaurent)) else _lcoerce(e) for e in r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[Laurent.const(1) if i == j else Laurent() for j in range(n)] for i in range(n)])

    @classmethod
    def diag_monomials(cls, exps) -> "LaurentMatrix":
        n = len(exps)
        return cls([[Laurent.mono(exps[i]) if i == j else Laurent() for j in range(n)] for i in range(n)])

    @classmethod
    def constant(cls, rows) -> "LaurentMatrix":
        return cls([[Laurent.const(as_scalar(c)) for c in r] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for x, y in zip(r, c):
                    if x.is_zero() or y.is_zero():
                        continue
                    acc = x * y if acc is None else acc + x * y
                row.append(acc if acc is not None else _zero_like(r[0]))
            out.append(row)
        return LaurentMatrix(out)

    def __add__(self, other):
        return LaurentMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return LaurentMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "LaurentMatrix":
        return LaurentMatrix([[a * c for a in r] for r in self.rows])

    def map(self, f) -> "LaurentMatrix":
        return LaurentMatrix([[f(a) for a in r] for r in self.rows])

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(list(zip(*self.rows)))

    def det(self):
        n = self.n
        if n == 0:
            return Laurent.const(1)
        # expansion along rows with memoisation over used-column sets
        memo: dict = {}

        def minor(row: int, cols: frozenset):
            if row == n:
                return None  # stands for 1
            if cols in memo:
                return memo[cols]
            acc = None
            free = sorted(set(range(n)) - cols)
            for pos, j in enumerate(free):
                a = self.rows[row][j]
                if a.is_zero():
                    continue
                sub = minor(row + 1, cols | {j})
                if sub is not None and sub.is_zero():
                    continue
                term = a if sub is None else a * sub
                if pos % 2:
                    term = -term
                acc = term if acc is None else acc + term
            res = acc if acc is not None else _zero_like(self.rows[0][0])
            memo[cols] = res
            return res

        res = minor(0, frozenset())
        return res if res is not None else Laurent.const(1)

    def adjugate(self) -> "LaurentMatrix":
        n = self.n
        if n == 1:
            return LaurentMatrix([[_one_like(self.rows[0][0])]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = LaurentMatrix([[self.rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i])
                d = sub.det()
                out[j][i] = d if (i + j) % 2 == 0 else -d
        return LaurentMatrix(out)

    def unit_determinant(self):
        """Return (c, k) if det = c z^k with c != 0, else None."""
        d = self.det()
        if not isinstance(d, Laurent) or not d.is_monomial():
            return None
        (k, c), = d.terms.items()
        return c, k

    def inverse(self) -> "LaurentMatrix":
        d = self.det()
        if isinstance(d, Laurent):
            if not d.is_monomial():
                raise ArithmeticError("matrix is not invertible over Laurent polynomials")
            dinv = d ** -1
        else:
            if len(d.terms) != 1:
                raise ArithmeticError("matrix is not invertible over Laurent polynomials")
            dinv = d ** -1
        return self.adjugate().map(lambda a: a * dinv)

    def evaluate(self, x) -> list[list[Scalar]]:
        return [[a(x) for a in r] for r in self.rows]

    def min_exp(self):
        es = [a.min_exp() for r in self.rows for a in r if not a.is_zero()]
        return min(es) if es else 0

    def max_exp(self):
        es = [a.max_exp() for r in self.rows for a in r if not a.is_zero()]
        return max(es) if es else 0

    def is_polynomial(self) -> bool:
        return self.min_exp() >= 0

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"LaurentMatrix({[list(r) for r in self.rows]})"


def _zero_like(a):
    if isinstance(a, MLaurent):
        return MLaurent(a.nvars)
    return Laurent()


def _one_like(a):
    if isinstance(a, MLaurent):
        return MLaurent.const(a.nvars, 1)
    return Laurent.const(1)
