"""Gaussian elimination over Scalars (lists of lists, row-major)."""

from __future__ import annotations

from .scalar import ONE, ZERO, Scalar

__all__ = ["rref", "rank", "nullspace", "solve", "inverse", "matmul", "identity", "charpoly", "det"]


def rref(rows: list[list[Scalar]]):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if not f.is_zero():
                    row = m[i]
                    m[i] = [a - f * b if not b.is_zero() else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows: list[list[Scalar]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(v)
    return basis


def solve(a: list[list[Scalar]], b: list[Scalar]):
    """One solution of a.x = b, or None if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x = [ZERO] * ncols
    for r, p in zip(red, piv):
        x[p] = r[ncols]
    return x


def identity(n: int) -> list[list[Scalar]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    out = []
    for r in a:
        row = []
        for c in bt:
            acc = ZERO
            for x, y in zip(r, c):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def inverse(a):
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def det(a) -> Scalar:
    m = [list(r) for r in a]
    n = len(m)
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if not f.is_zero():
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def charpoly(a):
    """Characteristic polynomial det(t - a) via Faddeev-LeVerrier (char 0)."""
    from .poly import Poly

    n = len(a)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = identity(n)
    am = a
    for k in range(1, n + 1):
        am = matmul(a, mk)
        tr = ZERO
        for i in range(n):
            tr = tr + am[i][i]
        c = -tr / k
        coeffs[n - k] = c
        mk = [[am[i][j] + (c if i == j else ZERO) for j in range(n)] for i in range(n)]
    return Poly(coeffs)
