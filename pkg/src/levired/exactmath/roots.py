"""Exact roots of polynomials inside cyclotomic fields.

Candidates are produced numerically: a root alpha in Q(zeta_L) has all of
its Galois conjugates sigma_a(alpha) among the complex roots of
sigma_a(p).  Choosing one complex root per embedding determines the
coordinate vector of alpha by a Vandermonde solve; rounding gives a
candidate, and every candidate is accepted only after exact evaluation.
Floating point therefore only proposes roots, it never certifies them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import mpmath

from .poly import Poly, poly_squarefree_split
from .scalar import Scalar, totient

__all__ = ["SearchBudget", "poly_split_roots", "roots_in_field", "brute_force_roots"]

_DPS = 50
_MAX_COMBINATIONS = 4096


@dataclass(frozen=True)
class SearchBudget:
    """Bounds on the candidate search: coordinate height and conductor."""

    height: int = 10**6
    conductor: int = 24


@dataclass
class RootSplit:
    roots: list = field(default_factory=list)  # (Scalar, multiplicity)
    unsplit: list = field(default_factory=list)  # Poly

    def __iter__(self):
        return iter((self.roots, self.unsplit))

    @property
    def splits(self) -> bool:
        return not self.unsplit


def _units(L: int) -> list[int]:
    return [a for a in range(1, L + 1) if gcd(a, L) == 1]


def _conductors(base: int, bound: int) -> list[int]:
    # Q(zeta_2k) = Q(zeta_k) for odd k, so conductors 2 mod 4 are redundant
    out = [L for L in range(base, bound + 1) if L % base == 0 and (L % 4 != 2 or L == base)]
    if base % 4 == 2:
        out = [base] + [L for L in out if L != base]
    return sorted(out, key=lambda L: (totient(L), L))


def _integralize(p: Poly) -> tuple[Poly, int]:
    """Return (q, D) with q(t) = D^deg * p(t/D) having integral coordinates."""
    D = 1
    for c in p.coeffs:
        d = c.denominator()
        D = D * d // gcd(D, d)
    n = p.degree
    return Poly([c * (D ** (n - k)) for k, c in enumerate(p.coeffs)]), D


def _embedding_value(s: Scalar, a: int, L: int):
    if s.conductor == 1:
        return s.to_complex()
    return s.to_complex(a * (L // s.conductor))


@lru_cache(maxsize=256)
def _complex_roots(coeffs: tuple) -> tuple:
    # coeffs: high to low, as mpmath-parsable strings of the embedded values
    with mpmath.workdps(_DPS):
        vals = [mpmath.mpc(c) for c in coeffs]
        rts = mpmath.polyroots(vals, maxsteps=400, extraprec=4 * _DPS, error=False)
        return tuple(complex(r) for r in rts)


@lru_cache(maxsize=64)
def _coordinate_weights(L: int):
    """W[a][j] with coordinate_j = sum over reps a of 2 Re(W[a][j] * root_a).

    Rows of the inverse Vandermonde matrix of the embeddings
    zeta -> zeta^a; conjugate embeddings are folded into the real part.
    """
    k = totient(L)
    units = _units(L)
    with mpmath.workdps(_DPS):
        zeta = mpmath.expjpi(mpmath.mpf(2) / L)
        V = mpmath.matrix([[zeta ** (a * j) for j in range(k)] for a in units])
        Vinv = V**-1
        cols = {a: [complex(Vinv[j, i]) for j in range(k)] for i, a in enumerate(units)}
    return cols


def roots_in_field(p: Poly, L: int, height: int = 10**6) -> list[Scalar]:
    """All roots of the squarefree polynomial ``p`` lying in Q(zeta_L).

    Requires every coefficient conductor to divide L.
    """
    if p.degree < 1:
        return []
    p = p.monic()
    q, D = _integralize(p)
    k = totient(L)
    units = _units(L)
    reps = [1] if L <= 2 else [a for a in units if a < L / 2]
    root_sets = {}
    for a in reps:
        with mpmath.workdps(_DPS):
            key = tuple(str(_embedding_value(c, a, L)) for c in reversed(q.coeffs))
        root_sets[a] = _complex_roots(key)
    if len(root_sets[1]) ** len(reps) > _MAX_COMBINATIONS:
        return []
    found: list[Scalar] = []
    tol = 1e-6
    if k == 1:
        choices = [[r.real] for r in root_sets[1] if abs(r.imag) < tol]
    else:
        W = _coordinate_weights(L)
        # per-embedding contribution to every coordinate
        contrib = {a: [[2 * (w * r).real for w in W[a]] for r in root_sets[a]] for a in reps}
        choices = []
        for combo in itertools.product(*(contrib[a] for a in reps)):
            choices.append([sum(c[j] for c in combo) for j in range(k)])
    for coords in choices:
        ints = [round(c) for c in coords]
        if any(abs(c - i) > tol * max(1, abs(i)) for c, i in zip(coords, ints)):
            continue
        if any(abs(i) > height for i in ints):
            continue
        cand = Scalar(ints[0]) if k == 1 else Scalar(conductor=L, coeffs=ints)
        if q(cand).is_zero():
            root = cand / D
            if root not in found:
                found.append(root)
    return found


def poly_split_roots(p: Poly, budget: SearchBudget = SearchBudget()) -> RootSplit:
    """Split a monic polynomial into linear factors over cyclotomic fields.

    Returns roots with multiplicity and the leftover factors that have no
    root within the budget (legal outcome, not an error).
    """
    if p.is_zero():
        raise ValueError("zero input")
    out = RootSplit()
    for factor, mult in poly_squarefree_split(p):
        rest = factor
        base = rest.conductor()
        if base % 4 == 2:
            base //= 2
        for L in _conductors(base, budget.conductor):
            if rest.degree < 1:
                break
            for r in roots_in_field(rest, L, budget.height):
                out.roots.append((r, mult))
                rest = rest.exact_div(Poly([-r, 1]))
        if rest.degree >= 1:
            out.unsplit.append(rest**mult)
    out.roots.sort(key=lambda rm: _root_key(rm[0]))
    return out


def _root_key(r: Scalar):
    return (r.conductor, r.coeffs)


def brute_force_roots(p: Poly, L: int, height: int) -> list[Scalar]:
    """Roots of ``p`` among all elements of Q(zeta_L) with integer
    coordinates bounded by ``height`` (exhaustive; for cross-checking)."""
    k = totient(L)
    found = []
    for coords in itertools.product(range(-height, height + 1), repeat=k):
        cand = Scalar(conductor=L, coeffs=coords) if L > 1 else Scalar(coords[0])
        if p(cand).is_zero() and cand not in found:
            found.append(cand)
    return found
