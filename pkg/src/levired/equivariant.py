"""Group actions on bundles over P^1 and the induced action on endomorphisms.

A lift C_g(y) is the linear map from the fibre over y to the fibre over
phi_g(y), written in the chart-0 frame of the transition matrix.  With this
convention the lifts compose as

    C_{gh}(y) = C_g(phi_h(y)) C_h(y)

and an endomorphism transforms as (g.sigma)(z) = C_g(y) sigma(y) C_g(y)^-1
with y = phi_g^-1(z).

Three kinds of group are supported: finite groups given by a complete
multiplication table, the multiplicative group acting by t.z = t^q z, and
the additive group acting by translation or trivially on the base.
Finite elements must move the base by an affine map z -> a z + b or by an
inversion z -> b / z; both keep the standard charts aligned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundle import SplitBundle
from .endalgebra import EndAlgebra, GlobalEndo, InvariantBreach, Subalgebra
from .exactmath.laurent import Laurent, LaurentMatrix, MLaurent
from .exactmath.linalg import nullspace
from .exactmath.poly import Poly
from .exactmath.scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Mobius",
    "GammaElement",
    "GammaStructure",
    "BundleAction",
    "ValidationReport",
    "transport",
    "validate_action",
    "act_on_endo",
    "derivation",
    "fixed_subalgebra",
]


class Mobius:
    """z -> (a z + b) / (c z + d), stored up to scale."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=1, b=0, c=0, d=1):
        self.a, self.b, self.c, self.d = (as_scalar(x) for x in (a, b, c, d))
        if (self.a * self.d - self.b * self.c).is_zero():
            raise ValueError("degenerate Mobius map")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls()

    @classmethod
    def affine(cls, alpha, beta=0) -> "Mobius":
        return cls(alpha, beta, 0, 1)

    @classmethod
    def inversion(cls, beta) -> "Mobius":
        return cls(0, beta, 1, 0)

    @property
    def kind(self) -> str:
        if self.c.is_zero():
            return "affine"
        if self.a.is_zero() and self.d.is_zero():
            return "inversion"
        return "general"

    def matrix(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        u = (self.a, self.b, self.c, self.d)
        v = (other.a, other.b, other.c, other.d)
        return all(u[i] * v[j] == u[j] * v[i] for i in range(4) for j in range(i + 1, 4))

    def __hash__(self):
        return 0

    def is_identity(self) -> bool:
        return self == Mobius()

    def __call__(self, z):
        z = as_scalar(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def pullback(self, f: Laurent) -> Laurent:
        """f(phi(y)) as a Laurent polynomial in y."""
        k = self.kind
        if k == "affine":
            dinv = self.d.inverse()
            return f.substitute_affine(self.a * dinv, self.b * dinv)
        if k == "inversion":
            return f.substitute_inversion(self.b / self.c)
        raise ValueError("only affine maps and inversions are supported")

    def __repr__(self):
        return f"Mobius({self.a}, {self.b}, {self.c}, {self.d})"


def _pullback_matrix(phi: Mobius, M: LaurentMatrix) -> LaurentMatrix:
    return M.map(phi.pullback)


@dataclass
class GammaElement:
    label: str
    mobius: Mobius
    lift: LaurentMatrix  # chart-0 frame of the transition matrix, variable y


@dataclass
class GammaStructure:
    """A group acting on the bundle.

    kind "finite": ``elements`` and ``table`` (table[i][j] = index of g_i g_j).
    kind "mult": ``lift`` is a matrix of MLaurent in (t, y); base map y -> t^q y.
    kind "add": ``lift`` in (t, y); base map y -> y + t if ``shift`` else trivial.
    """

    kind: str
    rank: int
    elements: list = field(default_factory=list)
    table: list = field(default_factory=list)
    lift: LaurentMatrix | None = None
    q: int = 0
    shift: bool = False

    @classmethod
    def trivial(cls, n: int) -> "GammaStructure":
        return cls("finite", n, [GammaElement("e", Mobius(), LaurentMatrix.identity(n))], [[0]])

    @classmethod
    def finite(cls, elements, table) -> "GammaStructure":
        n = elements[0].lift.n if elements else 0
        return cls("finite", n, list(elements), [list(r) for r in table])

    @classmethod
    def mult(cls, lift: LaurentMatrix, q: int = 0) -> "GammaStructure":
        return cls("mult", lift.n, lift=lift, q=q)

    @classmethod
    def add(cls, lift: LaurentMatrix, shift: bool = False) -> "GammaStructure":
        return cls("add", lift.n, lift=lift, shift=shift)

    @classmethod
    def from_generators(cls, gens, max_order: int = 48) -> "GammaStructure":
        """Close a list of (label, Mobius, lift) under composition."""
        gens = [g if isinstance(g, GammaElement) else GammaElement(*g) for g in gens]
        n = gens[0].lift.n
        elems = [GammaElement("e", Mobius(), LaurentMatrix.identity(n))]
        frontier = [elems[0]]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(g, x)
                    if _find(elems, y) is None:
                        if len(elems) >= max_order:
                            raise ValueError(f"group generated exceeds order {max_order}")
                        y.label = g.label if x.label == "e" else f"{g.label}*{x.label}"
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        table = []
        for x in elems:
            row = []
            for y in elems:
                k = _find(elems, compose(x, y))
                if k is None:
                    raise ValueError("generated set is not closed")
                row.append(k)
            table.append(row)
        return cls("finite", n, elems, table)

    @property
    def is_trivial(self) -> bool:
        if self.kind != "finite":
            return False
        return all(e.mobius.is_identity() and e.lift == LaurentMatrix.identity(self.rank) for e in self.elements)

    @property
    def identity_parameter(self) -> Scalar:
        return ONE if self.kind == "mult" else ZERO


def compose(g: GammaElement, h: GammaElement) -> GammaElement:
    """The element gh: first h, then g."""
    lift = _pullback_matrix(h.mobius, g.lift) @ h.lift
    return GammaElement(f"{g.label}*{h.label}", g.mobius @ h.mobius, lift)


def _find(elems, x: GammaElement):
    for i, e in enumerate(elems):
        if e.mobius == x.mobius and e.lift == x.lift:
            return i
    return None


def _embed(f: Laurent, nvars: int, index: int) -> MLaurent:
    return MLaurent.from_laurent(f, nvars, index)


def _transport_finite(S: SplitBundle, el: GammaElement) -> LaurentMatrix:
    # chart-0 split frame is R(z)^t times the original frame
    Rt = S.right_witness.transpose()
    return _pullback_matrix(el.mobius, Rt) @ el.lift @ Rt.inverse()


def _transport_param(S: SplitBundle, G: GammaStructure) -> LaurentMatrix:
    Rt = S.right_witness.transpose()
    t, y = MLaurent.var(2, 0), MLaurent.var(2, 1)
    if G.kind == "mult":
        image = (t ** G.q) * y if G.q else y
    else:
        image = y + t if G.shift else y
    R_moved = Rt.map(lambda f: _embed(f, 1, 0).substitute([image], 2))
    R_inv = Rt.inverse().map(lambda f: _embed(f, 2, 1))
    return R_moved @ G.lift @ R_inv


@dataclass
class ValidationReport:
    valid: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


class BundleAction:
    """A GammaStructure transported into the split coordinates of S."""

    def __init__(self, S: SplitBundle, G: GammaStructure):
        if G.rank != S.rank:
            raise ValueError(f"lift rank {G.rank} does not match bundle rank {S.rank}")
        self.split = S
        self.gamma = G
        if G.kind == "finite":
            self.lifts = [_transport_finite(S, e) for e in G.elements]
            self.param_lift = None
        else:
            self.lifts = []
            self.param_lift = _transport_param(S, G)

    @property
    def split_type(self):
        return self.split.split_type

    def element(self, g):
        """(Mobius, split-frame lift in y) for an element index or parameter value."""
        G = self.gamma
        if G.kind == "finite":
            return G.elements[g].mobius, self.lifts[g]
        t0 = as_scalar(g)
        if G.kind == "mult":
            phi = Mobius.affine(t0 ** G.q if G.q else ONE)
        else:
            phi = Mobius.affine(1, t0 if G.shift else 0)
        C = self.param_lift.map(lambda f: f.specialize(0, t0).to_laurent())
        return phi, C

    def elements(self):
        if self.gamma.kind == "finite":
            return list(range(len(self.gamma.elements)))
        raise ValueError("one-parameter groups have no element list")

    def tangent_lift(self) -> LaurentMatrix:
        """d/dt of the split-frame lift at the identity parameter."""
        e = self.gamma.identity_parameter
        return self.param_lift.map(lambda f: f.derivative(0).specialize(0, e).to_laurent())

    def base_velocity(self) -> Poly:
        """dy/dt at the identity for y = phi_t^-1(z), as a polynomial in z."""
        G = self.gamma
        if G.kind == "mult":
            return Poly.monomial(1, -G.q) if G.q else Poly()
        return Poly([Scalar(-1)]) if G.shift else Poly()


def transport(S: SplitBundle, G: GammaStructure) -> BundleAction:
    return BundleAction(S, G)


def _regular_affine(C: LaurentMatrix, a) -> str | None:
    n = len(a)
    for i in range(n):
        for j in range(n):
            f = C.rows[i][j]
            if f.is_zero():
                continue
            if f.min_exp() < 0:
                return f"lift entry ({i},{j}) has a pole at z=0"
            if f.max_exp() > a[i] - a[j]:
                return f"lift entry ({i},{j}) has a pole at infinity"
    ud = C.unit_determinant()
    if ud is None or ud[1] != 0:
        return "lift is not invertible on every fibre"
    return None


def _regular_inversion(C: LaurentMatrix, a) -> str | None:
    n = len(a)
    for i in range(n):
        for j in range(n):
            f = C.rows[i][j]
            if f.is_zero():
                continue
            if f.min_exp() < -a[i] or f.max_exp() > -a[j]:
                return f"lift entry ({i},{j}) is singular where the charts swap"
    ud = C.unit_determinant()
    if ud is None or ud[1] != -sum(a):
        return "lift is not invertible on every fibre"
    return None


def _regular_param(C: LaurentMatrix, a) -> str | None:
    n = len(a)
    for i in range(n):
        for j in range(n):
            f = C.rows[i][j]
            ys = f.exponents(1)
            if ys and (ys[0] < 0 or ys[-1] > a[i] - a[j]):
                return f"lift entry ({i},{j}) is not regular in the split frame"
    d = C.det()
    if len(d.terms) != 1 or next(iter(d.terms))[1] != 0:
        return "lift determinant is not a unit"
    return None


def _check_param_law(G: GammaStructure) -> list[str]:
    C = G.lift
    n = C.n
    s, t, y = (MLaurent.var(3, i) for i in range(3))
    failures = []
    e = G.identity_parameter
    at_e = C.map(lambda f: f.specialize(0, e))
    if at_e != LaurentMatrix.identity(n).map(lambda f: _embed(f, 1, 0)):
        failures.append(f"lift at the identity parameter {e} is not the identity")
    sub = lambda images: C.map(lambda f: f.substitute(images, 3))
    if G.kind == "mult":
        lhs = sub([s * t, y])
        rhs = sub([s, (t ** G.q) * y if G.q else y]) @ sub([t, y])
    else:
        if any(f.exponents(0) and f.exponents(0)[0] < 0 for r in C.rows for f in r):
            failures.append("additive lift must be polynomial in t")
            return failures
        lhs = sub([s + t, y])
        rhs = sub([s, y + t if G.shift else y]) @ sub([t, y])
    if lhs != rhs:
        failures.append("parameter law C_(s.t)(y) = C_s(phi_t y) C_t(y) fails")
    return failures


def validate_action(S: SplitBundle, G: GammaStructure) -> ValidationReport:
    """Check identity, cocycle/parameter law and regularity in both charts."""
    failures: list[str] = []
    if G.rank != S.rank:
        return ValidationReport(False, [f"lift rank {G.rank} does not match bundle rank {S.rank}"])
    a = S.split_type
    n = S.rank
    if G.kind == "finite":
        els, table = G.elements, G.table
        m = len(els)
        for e in els:
            if e.mobius.kind == "general":
                failures.append(f"element {e.label}: base map {e.mobius} is not affine or an inversion")
        if failures:
            return ValidationReport(False, failures)
        if len(table) != m or any(len(r) != m or any(not 0 <= k < m for k in r) for r in table):
            return ValidationReport(False, ["multiplication table has the wrong shape"])
        ids = [i for i in range(m) if all(table[i][j] == j and table[j][i] == j for j in range(m))]
        if not ids:
            failures.append("table has no identity element")
        else:
            e = els[ids[0]]
            if not e.mobius.is_identity() or e.lift != LaurentMatrix.identity(n):
                failures.append(f"identity element {e.label} does not act trivially")
            for i in range(m):
                if ids[0] not in table[i]:
                    failures.append(f"element {els[i].label} has no inverse in the table")
        for i in range(m):
            for j in range(m):
                k = table[i][j]
                prod = compose(els[i], els[j])
                if prod.mobius != els[k].mobius:
                    failures.append(f"base maps: {els[i].label}*{els[j].label} != {els[k].label}")
                if prod.lift != els[k].lift:
                    failures.append(f"cocycle law fails for ({els[i].label}, {els[j].label})")
        action = BundleAction(S, G)
        for idx, e in enumerate(els):
            C = action.lifts[idx]
            msg = _regular_affine(C, a) if e.mobius.kind == "affine" else _regular_inversion(C, a)
            if msg:
                failures.append(f"element {e.label}: {msg}")
    elif G.kind in ("mult", "add"):
        if G.lift is None or G.lift.n != n:
            return ValidationReport(False, ["missing or misshapen parameter lift"])
        failures.extend(_check_param_law(G))
        action = BundleAction(S, G)
        msg = _regular_param(action.param_lift, a)
        if msg:
            failures.append(msg)
    else:
        failures.append(f"unknown group kind {G.kind!r}")
    return ValidationReport(not failures, failures)


def _as_action(A_or_S, G) -> BundleAction:
    if isinstance(G, BundleAction):
        return G
    S = A_or_S.split if isinstance(A_or_S, EndAlgebra) else A_or_S
    if S is None:
        raise ValueError("a split bundle is needed to transport the action")
    return BundleAction(S, G)


def _laurent_to_endo(a, M: LaurentMatrix) -> GlobalEndo:
    rows = []
    for r in M.rows:
        row = []
        for f in r:
            if not f.is_zero() and f.min_exp() < 0:
                raise InvariantBreach("action produced a non-global endomorphism")
            row.append(f.to_poly())
        rows.append(row)
    try:
        return GlobalEndo(a, rows)
    except ValueError as exc:
        raise InvariantBreach(f"action broke the degree bounds: {exc}") from None


def act_on_endo(action: BundleAction, g, sigma: GlobalEndo) -> GlobalEndo:
    """g.sigma for an element index (finite) or a parameter value (one-parameter)."""
    if sigma.split_type != tuple(action.split_type):
        raise ValueError("shape mismatch between endomorphism and action")
    phi, C = action.element(g)
    sig = LaurentMatrix([[Laurent.from_poly(e) for e in r] for r in sigma.entries])
    M = C @ sig @ C.inverse()
    back = phi.inverse()
    M = _pullback_matrix(back, M)
    return _laurent_to_endo(sigma.split_type, M)


def derivation(action: BundleAction, sigma: GlobalEndo) -> GlobalEndo:
    """Infinitesimal action d/dt (t.sigma) at the identity parameter."""
    Cdot = action.tangent_lift()
    sig = LaurentMatrix([[Laurent.from_poly(e) for e in r] for r in sigma.entries])
    comm = Cdot @ sig - sig @ Cdot
    vel = Laurent.from_poly(action.base_velocity())
    drift = sig.map(lambda f: Laurent.from_poly(f.to_poly().derivative()) * vel)
    return _laurent_to_endo(sigma.split_type, comm + drift)


def _kernel_of(B: Subalgebra | EndAlgebra, A: EndAlgebra, maps) -> list[GlobalEndo]:
    """Common kernel of linear maps End -> End, restricted to the basis of B."""
    basis = B.basis
    for f in maps:
        if not basis:
            break
        cols = [A.coords(f(b)) for b in basis]
        rows = [list(r) for r in zip(*cols)]
        if all(x.is_zero() for r in rows for x in r):
            continue
        null = nullspace(rows, len(basis))
        new = []
        for v in null:
            acc = GlobalEndo.zero(A.split_type)
            for c, b in zip(v, basis):
                if not c.is_zero():
                    acc = acc + b * c
            new.append(acc)
        basis = new
    return basis


def fixed_subalgebra(A: EndAlgebra, G) -> Subalgebra:
    """Gamma-invariant global endomorphisms (kernel of the derivation for one-parameter groups)."""
    action = _as_action(A, G)
    if action.gamma.kind == "finite":
        maps = [
            (lambda g: (lambda s: act_on_endo(action, g, s) - s))(g)
            for g in action.elements()
            if not (action.gamma.elements[g].mobius.is_identity() and action.lifts[g] == LaurentMatrix.identity(A.n))
        ]
    else:
        maps = [lambda s: derivation(action, s)]
    F = Subalgebra(A, _kernel_of(A, A, maps))
    if not F.contains(A.identity()):
        raise InvariantBreach("fixed subalgebra does not contain the identity")
    if not F.is_closed():
        raise InvariantBreach("fixed subalgebra is not closed under multiplication")
    return F
