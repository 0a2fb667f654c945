"""Vector bundles on P^1 given by a transition matrix.

Charts: z on U0 = P^1 - {inf}, w = 1/z on U_inf.  A global section of the
bundle described by T is a pair of polynomial column vectors with

    s0(z) = T(z)^t . s_inf(1/z)

so that T = diag(z^a) describes O(a_1) + ... + O(a_n) (sections of O(a) are
the polynomials of degree <= a).  Frame changes act as
T -> L(1/z) T R(z) with L in GL_n(k[w]) and R in GL_n(k[z]); the splitting
below produces witnesses with L(1/z) T(z) R(z) = diag(z^a_1, ..., z^a_n).
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

from .exactmath.laurent import Laurent, LaurentMatrix
from .exactmath.linalg import nullspace, rank
from .exactmath.poly import Poly
from .exactmath.scalar import ZERO

__all__ = [
    "BundleError",
    "BundleDesc",
    "SplitBundle",
    "birkhoff_split",
    "section_space",
    "section_dimension",
    "split_type_via_sections",
    "subbundle_from_idempotent",
    "end_bundle",
    "type_from_counts",
]


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class BundleDesc:
    transition: LaurentMatrix

    def __post_init__(self):
        if self.transition.n and self.transition.unit_determinant() is None:
            raise BundleError("not a bundle datum: determinant is not c*z^k")

    @property
    def rank(self) -> int:
        return self.transition.n

    @property
    def degree(self) -> int:
        if self.rank == 0:
            return 0
        return self.transition.unit_determinant()[1]

    @classmethod
    def split(cls, exps) -> "BundleDesc":
        return cls(LaurentMatrix.diag_monomials(list(exps)))


@dataclass
class SplitBundle:
    split_type: tuple
    left_witness: LaurentMatrix  # polynomial in w = 1/z
    right_witness: LaurentMatrix  # polynomial in z
    original: BundleDesc
    # columns of an embedding of O(b_1)+...+O(b_r) into an ambient split bundle
    embedding: list | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.split_type)

    def verify(self) -> bool:
        """Exact re-check of the witness identity and witness shapes."""
        n = self.rank
        if n == 0:
            return True
        L, R, T = self.left_witness, self.right_witness, self.original.transition
        if not (L.is_polynomial() and R.is_polynomial()):
            return False
        for W in (L, R):
            ud = W.unit_determinant()
            if ud is None or ud[1] != 0:
                return False
        lhs = L.map(Laurent.invert_variable) @ T @ R
        if lhs != LaurentMatrix.diag_monomials(list(self.split_type)):
            return False
        a = self.split_type
        return all(a[i] >= a[i + 1] for i in range(n - 1)) and sum(a) == self.original.degree


def _column_reduce(cols: list[list[Laurent]], vcols: list[list[Laurent]]):
    n = len(cols)
    while True:
        degs = []
        for c in cols:
            es = [e.max_exp() for e in c if not e.is_zero()]
            if not es:
                raise BundleError("not a bundle datum: zero column")
            degs.append(max(es))
        lead = [[cols[j][i].coeff(degs[j]) for j in range(n)] for i in range(n)]
        null = nullspace(lead, n)
        if not null:
            return degs
        v = null[0]
        support = [j for j in range(n) if not v[j].is_zero()]
        k = max(support, key=lambda j: (degs[j], j))
        inv = v[k].inverse()
        for target in (cols, vcols):
            new = list(target[k])
            for j in support:
                if j == k:
                    continue
                f = v[j] * inv
                shift = degs[k] - degs[j]
                new = [a + b.shift(shift) * f for a, b in zip(new, target[j])]
            target[k] = new


def birkhoff_split(B: BundleDesc) -> SplitBundle:
    """Birkhoff factorisation by column reduction of z^N T(z).

    If P V is column reduced with column degrees d, then
    Q(1/z) = P V diag(z^-d) is a polynomial matrix in w with constant
    determinant, giving Q(1/z)^-1 T V = diag(z^(d - N)).
    """
    T = B.transition
    n = T.n
    if n == 0:
        empty = LaurentMatrix([])
        return SplitBundle((), empty, empty, B)
    if T.unit_determinant() is None:
        raise BundleError("not a bundle datum")
    N = max(0, -T.min_exp())
    cols = [[T.rows[i][j].shift(N) for i in range(n)] for j in range(n)]
    vcols = [[Laurent.const(1) if i == j else Laurent() for i in range(n)] for j in range(n)]
    degs = _column_reduce(cols, vcols)
    Q = LaurentMatrix([[cols[j][i].shift(-degs[j]).invert_variable() for j in range(n)] for i in range(n)])
    Linv = Q.inverse()
    V = LaurentMatrix([[vcols[j][i] for j in range(n)] for i in range(n)])
    order = sorted(range(n), key=lambda j: (-degs[j], j))
    exps = tuple(degs[j] - N for j in order)
    L = LaurentMatrix([Linv.rows[j] for j in order])
    R = LaurentMatrix([[V.rows[i][j] for j in order] for i in range(n)])
    split = SplitBundle(exps, L, R, B)
    if not split.verify():
        raise ArithmeticError("splitting witness identity failed")
    return split


def _section_conditions(Tt: LaurentMatrix, inv_min: int, twist: int):
    """Linear conditions on the coefficients of s_inf; None if there are no unknowns."""
    n = Tt.n
    top = twist - inv_min  # bound on deg s_inf
    if top < 0:
        return None
    ncols = n * (top + 1)
    # s0_i = sum_j z^twist Tt_ij(z) sum_k x_jk z^-k ; negative powers must vanish
    conds: dict = {}
    for i in range(n):
        for j in range(n):
            for e, c in Tt.rows[i][j].terms.items():
                for k in range(top + 1):
                    p = e + twist - k
                    if p < 0:
                        row = conds.setdefault((i, p), [ZERO] * ncols)
                        row[j * (top + 1) + k] = row[j * (top + 1) + k] + c
    rows = [r for r in conds.values() if any(not x.is_zero() for x in r)]
    return rows, ncols, top


def section_space(B: BundleDesc, twist: int = 0) -> list[tuple[list[Poly], list[Poly]]]:
    """Basis of H^0(E(twist)) as pairs (s0 in z, s_inf in w)."""
    n = B.rank
    if n == 0:
        return []
    Tt = B.transition.transpose()
    system = _section_conditions(Tt, Tt.inverse().min_exp(), twist)
    if system is None:
        return []
    rows, ncols, top = system
    basis = nullspace(rows, ncols) if rows else nullspace([[ZERO] * ncols], ncols)
    out = []
    for v in basis:
        sinf = [Poly(v[j * (top + 1):(j + 1) * (top + 1)]) for j in range(n)]
        s0 = []
        for i in range(n):
            acc = Laurent()
            for j in range(n):
                acc = acc + (Tt.rows[i][j] * Laurent.from_poly(sinf[j]).invert_variable()).shift(twist)
            s0.append(acc.to_poly())
        out.append((s0, sinf))
    return out


def section_dimension(B: BundleDesc, twist: int = 0) -> int:
    if B.rank == 0:
        return 0
    Tt = B.transition.transpose()
    return _section_dimension(Tt, Tt.inverse().min_exp(), twist)


def _section_dimension(Tt: LaurentMatrix, inv_min: int, twist: int) -> int:
    system = _section_conditions(Tt, inv_min, twist)
    if system is None:
        return 0
    rows, ncols, _ = system
    return ncols - (rank(rows) if rows else 0)


def type_from_counts(count, lo: int, hi: int) -> tuple:
    """Recover a splitting type from twist -> h^0 counts.

    ``count(m)`` must vanish for m <= lo and be in the linear range for m >= hi.
    """
    c = {m: count(m) for m in range(lo - 2, hi + 1)}
    jumps = {m: c[m] - c[m - 1] for m in range(lo - 1, hi + 1)}
    out = []
    for m in range(lo, hi + 1):
        mult = jumps[m] - jumps[m - 1]
        out.extend([-m] * mult)
    return tuple(sorted(out, reverse=True))


def split_type_via_sections(B: BundleDesc) -> tuple:
    """Splitting type from the dimensions of H^0(E(m)), independent of splitting."""
    n = B.rank
    if n == 0:
        return ()
    # bounds: start from the exponent span and widen until stable
    span = max(abs(B.transition.min_exp()), abs(B.transition.max_exp()),
               abs(B.transition.transpose().inverse().min_exp()),
               abs(B.transition.transpose().inverse().max_exp()))
    lo, hi = -span - 1, span + 1
    Tt = B.transition.transpose()
    inv_min = Tt.inverse().min_exp()
    h = functools.lru_cache(maxsize=None)(lambda m: _section_dimension(Tt, inv_min, m))
    while h(lo - 1) != 0:
        lo -= 1
    while h(hi) - h(hi - 1) != n:
        hi += 1
    t = type_from_counts(h, lo, hi + 1)
    if len(t) != n or sum(t) != B.degree:
        raise ArithmeticError("section counts inconsistent with rank/degree")
    return t


def end_bundle(B: BundleDesc) -> BundleDesc:
    """End(E) = E (x) E^*; its transition is T^-t (x) T in this convention."""
    T = B.transition
    A = T.transpose().inverse()
    n = T.n
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append([A.rows[i][j] * T.rows[k][l] for j in range(n) for l in range(n)])
    return BundleDesc(LaurentMatrix(rows))


def _image_section_rank(pi, a, m: int) -> int:
    """rank of pi acting on H^0(O(a_1+m) + ... + O(a_n+m))."""
    n = len(a)
    vecs = []
    for j in range(n):
        for k in range(a[j] + m + 1):
            col = [pi.entries[i][j] * Poly.monomial(k) for i in range(n)]
            vecs.append(col)
    if not vecs:
        return 0
    rows = []
    for col in vecs:
        row = []
        for i in range(n):
            d = a[i] + m
            row.extend(col[i].coeff(k) for k in range(d + 1))
        rows.append(row)
    return rank(rows)


def image_type(pi, a) -> tuple:
    """Splitting type of the image of an idempotent endomorphism of O(a)."""
    a = tuple(a)
    if not a:
        return ()
    lo, hi = -max(a), -min(a) + 1
    return type_from_counts(lambda m: _image_section_rank(pi, a, m), lo, hi)


def subbundle_from_idempotent(S: SplitBundle, pi, seed: int = 0, attempts: int = 40) -> SplitBundle:
    """Image bundle of an idempotent global endomorphism (split coordinates).

    The result carries ``embedding``: columns s_k (entries of degree
    <= a_i - b_k) giving a bundle isomorphism O(b) -> image(pi).
    """
    a = tuple(S.split_type)
    if pi * pi != pi:
        raise ValueError("input is not idempotent")
    b = image_type(pi, a)
    r = len(b)
    ident = LaurentMatrix.identity(r)
    desc = BundleDesc.split(b)
    if r == 0:
        return SplitBundle((), ident, ident, desc, embedding=[])
    rng = random.Random(seed)
    n = len(a)
    spaces = {}
    for bk in set(b):
        gens = []
        for j in range(n):
            for k in range(a[j] - bk + 1):
                gens.append([pi.entries[i][j] * Poly.monomial(k) for i in range(n)])
        spaces[bk] = gens
    for _ in range(attempts):
        cols = []
        for bk in b:
            gens = spaces[bk]
            col = [Poly() for _ in range(n)]
            for g in gens:
                c = rng.randint(-3, 3)
                if c:
                    col = [x + y * c for x, y in zip(col, g)]
            cols.append(col)
        if _is_subbundle_embedding(cols, a, b):
            return SplitBundle(b, ident, ident, desc, embedding=cols)
    raise ArithmeticError("failed to find an embedding of the image bundle")


def _is_subbundle_embedding(cols, a, b) -> bool:
    from itertools import combinations

    from .exactmath.poly import gcd

    n, r = len(a), len(b)
    # fibre at infinity: coefficient of z^(a_i - b_k)
    lead = [[cols[k][i].coeff(a[i] - b[k]) for k in range(r)] for i in range(n)]
    if rank(lead) < r:
        return False
    g = Poly()
    for rows in combinations(range(n), r):
        sub = LaurentMatrix([[Laurent.from_poly(cols[k][i]) for k in range(r)] for i in rows])
        m = sub.det().to_poly()
        g = gcd(g, m) if not g.is_zero() else (m.monic() if not m.is_zero() else m)
        if not g.is_zero() and g.degree == 0:
            return True
    return not g.is_zero() and g.degree == 0
