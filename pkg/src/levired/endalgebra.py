"""H^0(End E) for E = O(a_1) + ... + O(a_n) as a finite-dimensional algebra.

Global endomorphisms are block matrices whose (i, j) entry is a polynomial
in z of degree <= a_i - a_j (zero when a_i < a_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exactmath.linalg import charpoly, nullspace, rref
from .exactmath.poly import Poly, gcd, inverse_mod
from .exactmath.roots import SearchBudget, poly_split_roots
from .exactmath.scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Point",
    "GlobalEndo",
    "EndAlgebra",
    "Subalgebra",
    "InvariantBreach",
    "UnsplitSpectrum",
    "end_algebra",
    "evaluate_at",
    "char_poly",
    "jordan_chevalley",
    "spectral_idempotents",
    "primary_idempotents",
    "radical",
    "unit_inverse",
    "DEFAULT_SAMPLES",
    "BASE_POINT",
    "CONSTANCY_LOG",
]


class InvariantBreach(RuntimeError):
    """An exactness tripwire fired; indicates an implementation bug."""


class UnsplitSpectrum(ArithmeticError):
    """Characteristic polynomial has factors without roots in the search range."""

    def __init__(self, unsplit):
        self.unsplit = list(unsplit)
        super().__init__("enlarge conductor: unsplit factors " + ", ".join(str(p) for p in self.unsplit))


@dataclass(frozen=True)
class Point:
    """A point of P^1: chart "0" with coordinate z, or chart "inf" with w = 1/z."""

    chart: str
    coord: Scalar

    @classmethod
    def z(cls, value) -> "Point":
        return cls("0", as_scalar(value))

    @classmethod
    def w(cls, value) -> "Point":
        return cls("inf", as_scalar(value))

    def __str__(self):
        return f"z={self.coord}" if self.chart == "0" else f"w={self.coord}"


BASE_POINT = Point.z(3)
# running tally of constancy certificates, for audit reports
CONSTANCY_LOG = {"checked": 0, "failed": 0}
DEFAULT_SAMPLES = (Point.z(0), Point.z(1), Point.z(-1), Point.z(2), Point.w(0))


class GlobalEndo:
    """Global endomorphism of O(a) in split coordinates."""

    __slots__ = ("split_type", "entries")

    def __init__(self, split_type, entries, check: bool = True):
        self.split_type = tuple(split_type)
        self.entries = tuple(tuple(e if isinstance(e, Poly) else Poly(e) for e in row) for row in entries)
        if check:
            a = self.split_type
            for i, row in enumerate(self.entries):
                for j, e in enumerate(row):
                    if not e.is_zero() and e.degree > a[i] - a[j]:
                        raise ValueError(f"entry ({i},{j}) exceeds degree bound {a[i] - a[j]}")

    @classmethod
    def identity(cls, a) -> "GlobalEndo":
        n = len(a)
        return cls(a, [[Poly([ONE]) if i == j else Poly() for j in range(n)] for i in range(n)], check=False)

    @classmethod
    def zero(cls, a) -> "GlobalEndo":
        n = len(a)
        return cls(a, [[Poly() for _ in range(n)] for _ in range(n)], check=False)

    @classmethod
    def elementary(cls, a, i: int, j: int, k: int = 0, c=1) -> "GlobalEndo":
        n = len(a)
        rows = [[Poly() for _ in range(n)] for _ in range(n)]
        rows[i][j] = Poly.monomial(k, c)
        return cls(a, rows)

    @classmethod
    def constant(cls, a, matrix) -> "GlobalEndo":
        return cls(a, [[Poly([as_scalar(c)]) for c in row] for row in matrix])

    @property
    def n(self) -> int:
        return len(self.split_type)

    def _wrap(self, rows) -> "GlobalEndo":
        return GlobalEndo(self.split_type, rows, check=False)

    def __add__(self, other):
        return self._wrap([[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return self._wrap([[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self._wrap([[-x for x in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, GlobalEndo):
            n = self.n
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = Poly()
                    for k in range(n):
                        x, y = self.entries[i][k], other.entries[k][j]
                        if not x.is_zero() and not y.is_zero():
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return self._wrap(out)
        c = as_scalar(other)
        if c is NotImplemented:
            return NotImplemented
        return self._wrap([[x * c for x in r] for r in self.entries])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        acc = GlobalEndo.identity(self.split_type)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other):
        return isinstance(other, GlobalEndo) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def trace(self) -> Scalar:
        # diagonal entries are constants
        acc = ZERO
        for i in range(self.n):
            acc = acc + self.entries[i][i].coeff(0)
        return acc

    def derivative(self) -> "GlobalEndo":
        return self._wrap([[e.derivative() for e in r] for r in self.entries])

    def times_z(self) -> "GlobalEndo":
        return self._wrap([[e * Poly.t() for e in r] for r in self.entries])

    def evaluate(self, x: Point) -> list[list[Scalar]]:
        return evaluate_at(self, x)

    def polynomial(self, p: Poly) -> "GlobalEndo":
        """p(self) by Horner."""
        acc = GlobalEndo.zero(self.split_type)
        ident = GlobalEndo.identity(self.split_type)
        for c in reversed(p.coeffs):
            acc = acc * self + ident * c
        return acc

    def to_lists(self):
        return [[[str(c) for c in e.coeffs] for e in r] for r in self.entries]

    def __repr__(self):
        return f"GlobalEndo({self.split_type}, {self.to_lists()})"


def evaluate_at(sigma: GlobalEndo, x: Point) -> list[list[Scalar]]:
    """Fibre value of sigma at x, in the split frame of the chart containing x."""
    a = sigma.split_type
    if x.chart == "0":
        return [[e(x.coord) for e in r] for r in sigma.entries]
    # in the chart at infinity entry (i,j) becomes w^(a_i-a_j) e_ij(1/w)
    out = []
    for i, r in enumerate(sigma.entries):
        row = []
        for j, e in enumerate(r):
            d = a[i] - a[j]
            acc = ZERO
            for k, c in enumerate(e.coeffs):
                if not c.is_zero():
                    acc = acc + c * x.coord ** (d - k)
            row.append(acc)
        out.append(row)
    return out


def char_poly(sigma: GlobalEndo, base: Point = BASE_POINT, samples=DEFAULT_SAMPLES):
    """Characteristic polynomial with its constancy certificate.

    Raises InvariantBreach if any sample point disagrees.
    """
    chi = charpoly(evaluate_at(sigma, base))
    CONSTANCY_LOG["checked"] += 1
    for x in samples:
        other = charpoly(evaluate_at(sigma, x))
        if other != chi:
            CONSTANCY_LOG["failed"] += 1
            raise InvariantBreach(f"characteristic polynomial differs at {x}: {other} vs {chi}")
    return chi, {"base": str(base), "points": [str(x) for x in samples], "constant": True}


def _squarefree_part(p: Poly) -> Poly:
    return p.exact_div(gcd(p, p.derivative()))


def jordan_chevalley(sigma: GlobalEndo, budget: SearchBudget | None = SearchBudget(), require_split: bool = True):
    """(sigma_s, sigma_n) with sigma_s a polynomial in sigma.

    Newton iteration s <- s - f(s)/f'(s) in k[t]/(chi) for the squarefree
    part f of chi.
    """
    chi, _ = char_poly(sigma)
    if require_split and budget is not None:
        split = poly_split_roots(chi, budget)
        if split.unsplit:
            raise UnsplitSpectrum(split.unsplit)
    f = _squarefree_part(chi)
    fp = f.derivative()
    s = Poly.t() % chi if chi.degree > 1 else Poly.t()
    for _ in range(64):
        fs = f.compose(s) % chi
        if fs.is_zero():
            break
        s = (s - fs * inverse_mod(fp.compose(s), chi)) % chi
    else:
        raise InvariantBreach("Newton iteration for the semisimple part did not converge")
    sig_s = sigma.polynomial(s)
    sig_n = sigma - sig_s
    n = sigma.n
    if not (sig_n ** n).is_zero():
        raise InvariantBreach("nilpotent part is not nilpotent")
    if sig_s * sig_n != sig_n * sig_s:
        raise InvariantBreach("Jordan-Chevalley parts do not commute")
    fs_val = sig_s.polynomial(f)
    if not fs_val.is_zero():
        raise InvariantBreach("semisimple part does not satisfy a squarefree polynomial")
    return sig_s, sig_n


def _check_orthogonal(pis, ident):
    total = None
    for i, p in enumerate(pis):
        total = p if total is None else total + p
        for j, q in enumerate(pis):
            prod = p * q
            if i == j and prod != p:
                raise InvariantBreach("idempotent check failed")
            if i != j and not prod.is_zero():
                raise InvariantBreach("orthogonality check failed")
    if pis and total != ident:
        raise InvariantBreach("idempotents do not sum to the identity")


def spectral_idempotents(sigma_s: GlobalEndo, budget: SearchBudget = SearchBudget()):
    """Lagrange idempotents of a semisimple endomorphism.

    Returns a list of (eigenvalue, idempotent), ordered by eigenvalue key.
    """
    chi, _ = char_poly(sigma_s)
    split = poly_split_roots(chi, budget)
    if split.unsplit:
        raise UnsplitSpectrum(split.unsplit)
    lams = [r for r, _ in split.roots]
    ident = GlobalEndo.identity(sigma_s.split_type)
    out = []
    for i, li in enumerate(lams):
        p = ident
        for j, lj in enumerate(lams):
            if i != j:
                p = p * ((sigma_s - ident * lj) * (li - lj).inverse())
        out.append((li, p))
    _check_orthogonal([p for _, p in out], ident)
    for _, p in out:
        char_poly(p)
    return out


def primary_idempotents(sigma: GlobalEndo, factors: list[Poly]):
    """CRT idempotents for pairwise coprime factors g_i with prod g_i = chi.

    Works without splitting the spectrum; used for unsplit factors.
    """
    chi, _ = char_poly(sigma)
    prod = Poly([ONE])
    for g in factors:
        prod = prod * g
    if prod.monic() != chi:
        raise ValueError("factors must multiply to the characteristic polynomial")
    ident = GlobalEndo.identity(sigma.split_type)
    out = []
    for g in factors:
        h = chi.exact_div(g)
        e = (h * inverse_mod(h, g)) % chi
        out.append(sigma.polynomial(e))
    _check_orthogonal(out, ident)
    return out


def unit_inverse(u: GlobalEndo) -> GlobalEndo:
    """Inverse of a unit via Cayley-Hamilton (stays in any subalgebra containing u)."""
    chi, _ = char_poly(u)
    c0 = chi.coeff(0)
    if c0.is_zero():
        raise ZeroDivisionError("not a unit")
    q = Poly(chi.coeffs[1:])  # chi = t*q + c0
    inv = u.polynomial(q) * (-c0).inverse()
    if inv * u != GlobalEndo.identity(u.split_type):
        raise InvariantBreach("Cayley-Hamilton inverse failed")
    return inv


class EndAlgebra:
    """H^0(End O(a)) with the monomial basis E_ij z^k, 0 <= k <= a_i - a_j."""

    def __init__(self, split_type, split=None):
        self.split_type = tuple(split_type)
        self.split = split
        a = self.split_type
        n = len(a)
        self.basis_index = [(i, j, k) for i in range(n) for j in range(n) for k in range(a[i] - a[j] + 1)]
        self._pos = {key: p for p, key in enumerate(self.basis_index)}

    @property
    def dim(self) -> int:
        return len(self.basis_index)

    @property
    def n(self) -> int:
        return len(self.split_type)

    @cached_property
    def basis(self) -> list[GlobalEndo]:
        return [GlobalEndo.elementary(self.split_type, i, j, k) for i, j, k in self.basis_index]

    def identity(self) -> GlobalEndo:
        return GlobalEndo.identity(self.split_type)

    def coords(self, x: GlobalEndo) -> list[Scalar]:
        v = [ZERO] * self.dim
        for i, row in enumerate(x.entries):
            for j, e in enumerate(row):
                for k, c in enumerate(e.coeffs):
                    if not c.is_zero():
                        v[self._pos[(i, j, k)]] = c
        return v

    def from_coords(self, v) -> GlobalEndo:
        n = self.n
        rows = [[[] for _ in range(n)] for _ in range(n)]
        for (i, j, k), c in zip(self.basis_index, v):
            cs = rows[i][j]
            while len(cs) <= k:
                cs.append(ZERO)
            cs[k] = c
        return GlobalEndo(self.split_type, [[Poly(c) for c in r] for r in rows], check=False)

    def full(self) -> "Subalgebra":
        return Subalgebra(self, self.basis)

    def structure_constants(self):
        """c[p][q] = coordinates of basis_p * basis_q."""
        return [[self.coords(x * y) for y in self.basis] for x in self.basis]


def end_algebra(S) -> EndAlgebra:
    a = S.split_type if hasattr(S, "split_type") else tuple(S)
    return EndAlgebra(a, S if hasattr(S, "split_type") else None)


class Subalgebra:
    """Subspace of an EndAlgebra given by an echelonised basis."""

    def __init__(self, ambient: EndAlgebra, gens):
        self.ambient = ambient
        rows = [ambient.coords(g) for g in gens]
        red, piv = rref(rows) if rows else ([], [])
        self._rows = red
        self._pivots = piv
        self.basis = [ambient.from_coords(r) for r in red]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, x: GlobalEndo):
        """Coordinates in self.basis, or None if x is not in the span."""
        v = self.ambient.coords(x)
        c = [v[p] for p in self._pivots]
        recon = [ZERO] * self.ambient.dim
        for ci, r in zip(c, self._rows):
            if not ci.is_zero():
                recon = [a + ci * b for a, b in zip(recon, r)]
        return c if recon == v else None

    def contains(self, x: GlobalEndo) -> bool:
        return self.coords(x) is not None

    def combination(self, coeffs) -> GlobalEndo:
        acc = GlobalEndo.zero(self.ambient.split_type)
        for c, b in zip(coeffs, self.basis):
            if c:
                acc = acc + b * c
        return acc

    def is_closed(self) -> bool:
        return all(self.contains(x * y) for x in self.basis for y in self.basis)

    def corner(self, e: GlobalEndo) -> "Subalgebra":
        """e B e; a subalgebra with identity e when e is an idempotent of B."""
        return Subalgebra(self.ambient, [e * b * e for b in self.basis] + [e])

    def sandwich(self, left: GlobalEndo, right: GlobalEndo) -> "Subalgebra":
        """Subspace left B right (not an algebra in general)."""
        return Subalgebra(self.ambient, [left * b * right for b in self.basis])


def radical(B: Subalgebra) -> list[GlobalEndo]:
    """Jacobson radical by Dickson's trace-form criterion (char 0).

    The trace of a global endomorphism is constant, so the form
    (x, y) -> tr(x y) is taken fibrewise.
    """
    basis = B.basis
    if not basis:
        return []
    gram = [[(x * y).trace() for y in basis] for x in basis]
    null = nullspace(gram, len(basis))
    rad = [B.combination(v) for v in null]
    rad_sub = Subalgebra(B.ambient, rad) if rad else None
    n = B.ambient.n
    for x in (rad_sub.basis if rad_sub else []):
        if not (x ** n).is_zero():
            raise InvariantBreach("radical element is not nilpotent")
    return rad_sub.basis if rad_sub else []
