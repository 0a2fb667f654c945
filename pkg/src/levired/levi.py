"""Equivariant reductions to block Levi subgroups, as idempotent systems.

A reduction of GL(n) to a block Levi is a complete orthogonal system of
idempotents in H^0(End E); the reduction is Gamma-invariant exactly when
every idempotent is fixed by Gamma.  The finest such system comes from a
maximal torus of the unit group of the fixed subalgebra, and any two are
conjugate by a fixed unit (Krull-Schmidt).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bundle import image_type
from .endalgebra import (
    BASE_POINT,
    DEFAULT_SAMPLES,
    EndAlgebra,
    GlobalEndo,
    InvariantBreach,
    Point,
    Subalgebra,
    char_poly,
    evaluate_at,
    jordan_chevalley,
    primary_idempotents,
    radical,
    spectral_idempotents,
    unit_inverse,
)
from .equivariant import BundleAction, act_on_endo, derivation, fixed_subalgebra
from .exactmath.linalg import inverse as mat_inverse
from .exactmath.linalg import matmul, rank, rref, solve
from .exactmath.poly import Poly
from .exactmath.roots import SearchBudget, poly_split_roots
from .exactmath.scalar import ONE, ZERO, Scalar

__all__ = [
    "Decomposition",
    "LeviClass",
    "EquivarianceCertificate",
    "check_equivariant",
    "invariance_oracle",
    "reduction_from_generator",
    "maximal_torus_decomposition",
    "indecomposable_certificate",
    "torus_injectivity",
    "canonical_levi",
    "intertwiner",
    "conjugate_decomposition",
    "certify",
]


@dataclass
class Decomposition:
    split_type: tuple
    idempotents: list
    summand_types: list
    gamma_fixed: bool | None = None
    labels: list = field(default_factory=list)
    unsplit: list = field(default_factory=list)  # factors that blocked further splitting

    @property
    def ranks(self) -> list[int]:
        return [len(t) for t in self.summand_types]

    @property
    def partition(self) -> tuple:
        return tuple(sorted(self.ranks, reverse=True))

    @property
    def conditional(self) -> bool:
        return bool(self.unsplit)

    def validate(self) -> None:
        """Completeness, orthogonality and the type multiset; raises ValueError."""
        a = tuple(self.split_type)
        ident = GlobalEndo.identity(a)
        total = GlobalEndo.zero(a)
        for i, p in enumerate(self.idempotents):
            if p.split_type != a:
                raise ValueError("idempotent lives on a different bundle")
            total = total + p
            for j, q in enumerate(self.idempotents):
                prod = p * q
                if (i == j and prod != p) or (i != j and not prod.is_zero()):
                    raise ValueError(f"idempotents {i},{j} are not orthogonal idempotents")
        if total != ident:
            raise ValueError("idempotents do not sum to the identity")
        merged = sorted((x for t in self.summand_types for x in t), reverse=True)
        if tuple(merged) != tuple(sorted(a, reverse=True)):
            raise ValueError("summand types do not add up to the splitting type")


def _sort_key(p: GlobalEndo, t: tuple):
    return (len(t), tuple(-x for x in t), repr(p.to_lists()))


def _make_decomposition(a, idems, gamma_fixed=None, unsplit=()) -> Decomposition:
    typed = [(p, image_type(p, a)) for p in idems]
    typed.sort(key=lambda pt: _sort_key(*pt))
    labels = [f"U{i}" for i in range(len(typed))]
    return Decomposition(tuple(a), [p for p, _ in typed], [t for _, t in typed], gamma_fixed, labels, list(unsplit))


@dataclass
class EquivarianceCertificate:
    fixed: bool
    moved: list = field(default_factory=list)  # (element label, summand index)
    checked: list = field(default_factory=list)

    def __bool__(self):
        return self.fixed


def _is_fixed(action: BundleAction, p: GlobalEndo):
    """List of element labels that move p (empty if p is fixed)."""
    G = action.gamma
    if G.kind == "finite":
        return [G.elements[g].label for g in action.elements() if act_on_endo(action, g, p) != p]
    moved = []
    if not derivation(action, p).is_zero():
        moved.append("d/dt")
    # a finite parameter value as an independent check on the derivation
    t0 = Scalar(2) if G.kind == "mult" else Scalar(1)
    if (act_on_endo(action, t0, p) != p) != bool(moved):
        raise InvariantBreach("derivation and group action disagree on fixedness")
    return moved


def check_equivariant(D: Decomposition, action: BundleAction) -> EquivarianceCertificate:
    """True iff every idempotent of D is fixed by the group."""
    D.validate()
    if tuple(action.split_type) != tuple(D.split_type):
        raise ValueError("decomposition and action live on different bundles")
    moved = []
    for i, p in enumerate(D.idempotents):
        for label in _is_fixed(action, p):
            moved.append((label, i))
    G = action.gamma
    checked = [e.label for e in G.elements] if G.kind == "finite" else ["d/dt"]
    return EquivarianceCertificate(not moved, moved, checked)


def invariance_oracle(D: Decomposition, action: BundleAction, points=(1, -1, 2, 3), params=(2, 3)) -> bool:
    """Fibrewise check that the group maps each summand into itself.

    For y = phi^-1(x) the image of pi(y) is pushed through the lift and must
    land in the image of pi(x).  Uses only fibre values, independently of
    the symbolic conjugation behind check_equivariant.
    """
    G = action.gamma
    elems = action.elements() if G.kind == "finite" else [Scalar(t) for t in params]
    for g in elems:
        phi, C = action.element(g)
        back = phi.inverse()
        for x in points:
            x = Scalar(x)
            if (back.c * x + back.d).is_zero():
                continue
            y = back(x)
            if phi.kind == "inversion" and y.is_zero():
                continue
            Cy = C.evaluate(y)
            for p in D.idempotents:
                moved = matmul(Cy, evaluate_at(p, Point.z(y)))
                if matmul(evaluate_at(p, Point.z(x)), moved) != moved:
                    return False
    return True


def _split_along(x: GlobalEndo, e: GlobalEndo, budget: SearchBudget):
    """Pieces of e cut out by the spectrum of x in eFe, plus unsplit factors."""
    chi, _ = char_poly(x)
    split = poly_split_roots(chi, budget)
    if split.unsplit:
        factors = [Poly([-r, ONE]) ** m for r, m in split.roots] + list(split.unsplit)
        if len(factors) < 2:
            return [e], split.unsplit
        idems = primary_idempotents(x, factors)
    else:
        xs, _ = jordan_chevalley(x, budget)
        idems = [p for _, p in spectral_idempotents(xs, budget)]
    pieces = [e * p for p in idems]
    return [p for p in pieces if not p.is_zero()], split.unsplit


def reduction_from_generator(sigma: GlobalEndo, action: BundleAction | None = None,
                             budget: SearchBudget = SearchBudget()) -> Decomposition:
    """Spectral decomposition of a fixed endomorphism's semisimple part."""
    if action is not None and _is_fixed(action, sigma):
        raise ValueError("generator is not fixed by the group")
    sig_s, _ = jordan_chevalley(sigma, budget)
    idems = [p for _, p in spectral_idempotents(sig_s, budget)]
    D = _make_decomposition(sigma.split_type, idems)
    if action is not None:
        D.gamma_fixed = check_equivariant(D, action).fixed
    return D


def _corner_is_local(C: Subalgebra):
    rad = radical(C)
    return C.dim - len(rad) == 1, rad


def _candidates(C: Subalgebra, rng: random.Random, bound: int, attempts: int):
    basis = C.basis
    for _ in range(attempts):
        yield C.combination([Scalar(rng.randint(-bound, bound)) for _ in basis])
    yield from basis
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            yield basis[i] + basis[j] * 2


def maximal_torus_decomposition(A: EndAlgebra, G, seed: int = 0, coeff_bound: int = 5,
                                budget: SearchBudget = SearchBudget(), attempts: int = 30) -> Decomposition:
    """Finest Gamma-fixed idempotent system, found by random spectral splitting.

    Each summand is refined until its corner of the fixed subalgebra is
    local (one-dimensional modulo the radical); summands that cannot be
    split within the root-search budget are kept and reported as unsplit.
    """
    action = G if isinstance(G, BundleAction) else BundleAction(A.split, G)
    F = fixed_subalgebra(A, action)
    rng = random.Random(seed)
    work = [A.identity()]
    done = []
    blocked = []
    while work:
        e = work.pop(0)
        C = F.corner(e)
        local, _ = _corner_is_local(C)
        if local:
            done.append(e)
            continue
        pieces = None
        stuck = []
        # rational spectra first: cheaper, and the idempotents stay rational
        for b in (SearchBudget(budget.height, 1), budget):
            for x in _candidates(C, rng, coeff_bound, attempts):
                got, unsplit = _split_along(x, e, b)
                if len(got) > 1:
                    pieces = got
                    break
                if b is budget:
                    stuck.extend(u for u in unsplit if u not in stuck)
            if pieces is not None:
                break
        if pieces is None:
            done.append(e)
            blocked.extend(stuck or [Poly([ONE])])
        else:
            work.extend(pieces)
    D = _make_decomposition(A.split_type, done, unsplit=blocked)
    D.validate()
    D.gamma_fixed = check_equivariant(D, action).fixed
    if not D.gamma_fixed:
        raise InvariantBreach("idempotents drawn from the fixed subalgebra are not fixed")
    return D


def indecomposable_certificate(D: Decomposition, i: int, A: EndAlgebra, G, F: Subalgebra | None = None) -> dict:
    """Corner algebra of summand i modulo its radical has dimension 1."""
    if F is None:
        F = fixed_subalgebra(A, G)
    C = F.corner(D.idempotents[i])
    local, rad = _corner_is_local(C)
    return {
        "summand": i,
        "corner_dim": C.dim,
        "radical_dim": len(rad),
        "quotient_dim": C.dim - len(rad),
        "radical_basis": [r.to_lists() for r in rad],
        "certified": local,
    }


def torus_injectivity(D: Decomposition, samples=(BASE_POINT,) + DEFAULT_SAMPLES) -> bool:
    """The evaluated idempotents are linearly independent at every sample point,
    so lambda -> sum lambda_i pi_i(x) is injective."""
    for x in samples:
        vecs = [[c for row in evaluate_at(p, x) for c in row] for p in D.idempotents]
        if rank(vecs) != len(vecs):
            return False
    return True


@dataclass
class LeviClass:
    partition: tuple
    base_point_frame: list  # columns adapted to the summands at the base point

    @property
    def description(self) -> str:
        return " x ".join(f"GL({k})" for k in self.partition)


def canonical_levi(D: Decomposition, base: Point = BASE_POINT) -> LeviClass:
    n = len(D.split_type)
    cols = []
    for p in D.idempotents:
        m = evaluate_at(p, base)
        colvecs = [list(c) for c in zip(*m)]
        red, _ = rref(colvecs)
        cols.extend(red)
    g = [list(r) for r in zip(*cols)] if cols else []
    if len(cols) != n:
        raise InvariantBreach("evaluated idempotents do not span the fibre")
    ginv = mat_inverse(g)
    start = 0
    for p, r in zip(D.idempotents, D.ranks):
        conj = matmul(matmul(ginv, evaluate_at(p, base)), g)
        for i in range(n):
            for j in range(n):
                want = ONE if (i == j and start <= i < start + r) else ZERO
                if conj[i][j] != want:
                    raise InvariantBreach("base-point frame does not diagonalise the torus")
        start += r
    return LeviClass(D.partition, g)


def _solve_left_inverse(x: GlobalEndo, target: GlobalEndo, space: Subalgebra, A: EndAlgebra):
    """y in span(space) with y x = target, or None."""
    if not space.basis:
        return None
    cols = [A.coords(b * x) for b in space.basis]
    rows = [list(r) for r in zip(*cols)]
    sol = solve(rows, A.coords(target))
    return None if sol is None else space.combination(sol)


def _match_pair(p: GlobalEndo, q: GlobalEndo, F: Subalgebra, A: EndAlgebra, rng: random.Random, tries: int):
    """(x, y) with x in q F p, y in p F q, y x = p and x y = q."""
    fwd = F.sandwich(q, p)
    back = F.sandwich(p, q)
    cands = [q * p] + [fwd.combination([Scalar(rng.randint(-3, 3)) for _ in fwd.basis]) for _ in range(tries)]
    for x in cands:
        if x.is_zero():
            continue
        y = _solve_left_inverse(x, p, back, A)
        if y is not None and x * y == q:
            return x, y
    return None


def intertwiner(D1: Decomposition, D2: Decomposition, A: EndAlgebra, G, seed: int = 0, tries: int = 10):
    """Fixed unit tau and matching m with tau pi_i tau^-1 = pi'_m(i)."""
    if tuple(D1.split_type) != tuple(D2.split_type) or len(D1.idempotents) != len(D2.idempotents):
        raise ValueError("decompositions are not comparable")
    F = fixed_subalgebra(A, G)
    rng = random.Random(seed)
    k = len(D1.idempotents)
    pairs: dict = {}

    def pair(i, j):
        if (i, j) not in pairs:
            if D1.summand_types[i] != D2.summand_types[j]:
                pairs[(i, j)] = None
            else:
                pairs[(i, j)] = _match_pair(D1.idempotents[i], D2.idempotents[j], F, A, rng, tries)
        return pairs[(i, j)]

    match: list = [None] * k
    used = [False] * k

    def search(i):
        if i == k:
            return True
        for j in range(k):
            if not used[j] and pair(i, j) is not None:
                used[j], match[i] = True, j
                if search(i + 1):
                    return True
                used[j], match[i] = False, None
        return False

    if not search(0):
        raise InvariantBreach("no intertwiner between two maximal decompositions")
    a = A.split_type
    tau, tau_inv = GlobalEndo.zero(a), GlobalEndo.zero(a)
    for i, j in enumerate(match):
        x, y = pairs[(i, j)]
        tau, tau_inv = tau + x, tau_inv + y
    ident = GlobalEndo.identity(a)
    if tau * tau_inv != ident or tau_inv * tau != ident:
        raise InvariantBreach("intertwiner is not a unit")
    if not F.contains(tau):
        raise InvariantBreach("intertwiner is not fixed")
    for i, j in enumerate(match):
        if tau * D1.idempotents[i] * tau_inv != D2.idempotents[j]:
            raise InvariantBreach("intertwiner does not conjugate the summands")
    return tau, match


def conjugate_decomposition(g: GlobalEndo, D: Decomposition, action: BundleAction | None = None) -> Decomposition:
    """Idempotents g pi g^-1; fixedness is re-checked when an action is given."""
    ginv = unit_inverse(g)
    idems = [g * p * ginv for p in D.idempotents]
    out = Decomposition(D.split_type, idems, list(D.summand_types), None, list(D.labels), list(D.unsplit))
    out.validate()
    if action is not None:
        out.gamma_fixed = check_equivariant(out, action).fixed
    return out


def certify(D: Decomposition, A: EndAlgebra, G) -> dict:
    """All certificates for a reduction, in report form."""
    action = G if isinstance(G, BundleAction) else BundleAction(A.split, G)
    D.validate()
    F = fixed_subalgebra(A, action)
    eq = check_equivariant(D, action)
    oracle = invariance_oracle(D, action)
    if eq.fixed and not oracle:
        raise InvariantBreach("fixed idempotents with a non-invariant summand")
    consts = []
    for p in D.idempotents:
        chi, cert = char_poly(p)
        consts.append({"charpoly": [str(c) for c in chi.coeffs], **cert})
    minimal = [indecomposable_certificate(D, i, A, action, F) for i in range(len(D.idempotents))]
    return {
        "complete_orthogonal": True,
        "equivariant": eq.fixed,
        "moved": [list(m) for m in eq.moved],
        "subbundle_invariance": oracle,
        "indecomposable": minimal,
        "minimal": all(m["certified"] for m in minimal),
        "conditional": D.conditional,
        "unsplit": [[str(c) for c in u.coeffs] for u in D.unsplit],
        "torus_injective": torus_injectivity(D),
        "charpoly_constancy": consts,
    }
