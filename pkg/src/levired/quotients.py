"""Unipotent radical and Levi quotient of Aut(E), and how a connected group acts on the quotient.

For E = O(a_1) + ... + O(a_n) the automorphism group is the unit group of
H^0(End E).  Entries with a_i > a_j form its unipotent radical; the
quotient is the product of GL(m_d) over the distinct degrees d, realised
by keeping the constant block-diagonal part (the map ``psi``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .endalgebra import EndAlgebra, GlobalEndo
from .equivariant import BundleAction, GammaStructure, derivation
from .exactmath.linalg import charpoly
from .exactmath.poly import Poly
from .exactmath.roots import SearchBudget, poly_split_roots

__all__ = [
    "LeviQuotientData",
    "ActionClassification",
    "levi_quotient",
    "psi",
    "classify_action_on_levi_quotient",
    "refines",
    "reduction_comparison",
]

TRIVIAL = "trivial"
TORUS = "torus-factoring"
NON_TORUS = "nontrivial-non-torus"
NOT_MET = "hypothesis-not-met"


@dataclass
class LeviQuotientData:
    split_type: tuple
    distinct_degrees: list  # (degree, multiplicity), descending degree
    radical_basis: list
    quotient_basis: list

    @property
    def quotient_description(self) -> str:
        return " x ".join(f"GL({m})" for _, m in self.distinct_degrees)


@dataclass
class ActionClassification:
    verdict: str
    evidence: dict = field(default_factory=dict)


def levi_quotient(A: EndAlgebra) -> LeviQuotientData:
    a = A.split_type
    counts = Counter(a)
    degrees = sorted(counts.items(), key=lambda dm: -dm[0])
    rad, quo = [], []
    for (i, j, k), b in zip(A.basis_index, A.basis):
        if a[i] > a[j]:
            rad.append(b)
        elif a[i] == a[j]:
            quo.append(b)
    if len(rad) + sum(m * m for _, m in degrees) != A.dim:
        raise ArithmeticError("radical and quotient dimensions do not add up")
    return LeviQuotientData(tuple(a), degrees, rad, quo)


def psi(sigma: GlobalEndo) -> GlobalEndo:
    """Projection to the Levi quotient: keep entries between equal degrees."""
    a = sigma.split_type
    n = len(a)
    rows = [[sigma.entries[i][j] if a[i] == a[j] else Poly() for j in range(n)] for i in range(n)]
    return GlobalEndo(a, rows, check=False)


def _quotient_coords(L: LeviQuotientData, x: GlobalEndo) -> list:
    out = []
    for b in L.quotient_basis:
        i, j = next((i, j) for i, r in enumerate(b.entries) for j, e in enumerate(r) if not e.is_zero())
        out.append(x.entries[i][j].coeff(0))
    return out


def classify_action_on_levi_quotient(L: LeviQuotientData, action: BundleAction,
                                     budget: SearchBudget = SearchBudget()) -> ActionClassification:
    """Infinitesimal action psi o D on the Levi quotient, and its verdict."""
    G = action.gamma
    if G.kind == "finite":
        return ActionClassification(NOT_MET, {"reason": "group is not connected"})
    images = [psi(derivation(action, b)) for b in L.quotient_basis]
    # column k holds the image of quotient basis element k
    M = [list(r) for r in zip(*(_quotient_coords(L, img) for img in images))]
    moved = [k for k, img in enumerate(images) if not img.is_zero()]
    evidence: dict = {"quotient": L.quotient_description}
    if G.kind == "mult":
        chi = charpoly(M) if M else Poly([1])
        split = poly_split_roots(chi, budget)
        evidence["weights"] = [str(r) for r, m in split.roots for _ in range(m)]
        evidence["unsplit"] = [str(u) for u in split.unsplit]
        return ActionClassification(TORUS, evidence)
    if not moved:
        return ActionClassification(TRIVIAL, evidence)
    k = moved[0]
    evidence["witness"] = L.quotient_basis[k].to_lists()
    evidence["witness_image"] = images[k].to_lists()
    evidence["consequence"] = "no equivariant reduction to the non-equivariant canonical Levi unless that Levi is GL(n)"
    return ActionClassification(NON_TORUS, evidence)


def refines(fine, coarse) -> bool:
    """True if the parts of ``fine`` can be grouped to give ``coarse``."""
    fine = sorted(fine, reverse=True)
    coarse = sorted(coarse, reverse=True)
    if sum(fine) != sum(coarse):
        return False
    bins = list(coarse)

    def place(i):
        if i == len(fine):
            return all(b == 0 for b in bins)
        seen = set()
        for j, b in enumerate(bins):
            if b >= fine[i] and b not in seen:
                seen.add(b)
                bins[j] -= fine[i]
                if place(i + 1):
                    return True
                bins[j] += fine[i]
        return False

    return place(0)


def reduction_comparison(A: EndAlgebra, G: GammaStructure, seed: int = 0, coeff_bound: int = 5,
                         budget: SearchBudget = SearchBudget()) -> dict:
    """Canonical partitions with and without the group, and the consistency checks between them."""
    from .levi import maximal_torus_decomposition

    action = BundleAction(A.split, G)
    hat = maximal_torus_decomposition(A, GammaStructure.trivial(A.n), seed, coeff_bound, budget)
    eq = maximal_torus_decomposition(A, action, seed, coeff_bound, budget)
    verdict = classify_action_on_levi_quotient(levi_quotient(A), action, budget)
    reaches = hat.partition == eq.partition
    consistent = not reaches or verdict.verdict in (TRIVIAL, TORUS, NOT_MET)
    return {
        "hat_partition": list(hat.partition),
        "partition": list(eq.partition),
        "refines": refines(hat.partition, eq.partition),
        "reaches_hat": reaches,
        "verdict": verdict.verdict,
        "forward_consistent": consistent,
    }
