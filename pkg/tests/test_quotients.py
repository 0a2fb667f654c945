from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levired.bundle import BundleDesc, birkhoff_split
from levired.corpus import additive_instance, mult_instance, order8_instance, swap_instance
from levired.endalgebra import EndAlgebra, Subalgebra, char_poly, end_algebra
from levired.equivariant import BundleAction, GammaStructure
from levired.exactmath.laurent import LaurentMatrix, MLaurent
from levired.levi import maximal_torus_decomposition
from levired.quotients import (
    classify_action_on_levi_quotient,
    levi_quotient,
    psi,
    reduction_comparison,
    refines,
)
from levired.serialize import parse_instance

from conftest import endos, split_types

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def setup(inst):
    S = birkhoff_split(inst.bundle)
    return end_algebra(S), BundleAction(S, inst.group())


@pytest.mark.parametrize(
    "a, rad, desc",
    [((0, 0), 0, "GL(2)"), ((1, 0), 2, "GL(1) x GL(1)"), ((2, 1, 1), 4, "GL(1) x GL(2)")],
)
def test_levi_quotient_examples(a, rad, desc):
    L = levi_quotient(EndAlgebra(a))
    assert len(L.radical_basis) == rad
    assert L.quotient_description == desc


@given(split_types(1, 4, 3))
@settings(max_examples=30, deadline=None)
def test_radical_and_quotient_dimensions_add_up(a):
    A = EndAlgebra(a)
    L = levi_quotient(A)
    assert len(L.radical_basis) + sum(m * m for _, m in L.distinct_degrees) == A.dim
    Q = Subalgebra(A, L.quotient_basis)
    assert Q.is_closed()
    for r in L.radical_basis:
        assert (r ** len(a)).is_zero()


@given(st.data(), split_types(2, 3, 2))
@settings(max_examples=50, deadline=None)
def test_psi_multiplicative_on_units(data, a):
    u, v = data.draw(endos(a)), data.draw(endos(a))
    for x in (u, v):
        if char_poly(x)[0].coeff(0).is_zero():
            return
    assert psi(u * v) == psi(u) * psi(v)


def test_mult_diagonal_lift_is_torus_factoring():
    one, zero, t = MLaurent.const(2, 1), MLaurent(2), MLaurent.var(2, 0)
    G = GammaStructure.mult(LaurentMatrix([[t, zero], [zero, one]]), q=1)
    S = birkhoff_split(BundleDesc.split((1, 0)))
    A = end_algebra(S)
    verdict = classify_action_on_levi_quotient(levi_quotient(A), BundleAction(S, G))
    assert verdict.verdict == "torus-factoring"
    # diagonal conjugation fixes the diagonal constants: both weights vanish
    assert verdict.evidence["weights"] == ["0", "0"]


def test_additive_unipotent_is_not_torus_factoring():
    A, action = setup(additive_instance(0))
    verdict = classify_action_on_levi_quotient(levi_quotient(A), action)
    assert verdict.verdict == "nontrivial-non-torus"
    assert "witness" in verdict.evidence
    assert maximal_torus_decomposition(A, action).partition == (2,)
    cmp = reduction_comparison(A, action.gamma)
    assert cmp["hat_partition"] == [1, 1] and cmp["partition"] == [2]
    assert cmp["refines"] and not cmp["reaches_hat"] and cmp["forward_consistent"]


@pytest.mark.parametrize("inst", [order8_instance(), swap_instance(1, hidden=True, seed=2)], ids=["order8", "swap"])
def test_finite_groups_do_not_meet_the_hypothesis(inst):
    A, action = setup(inst)
    assert classify_action_on_levi_quotient(levi_quotient(A), action).verdict == "hypothesis-not-met"


def test_trivial_additive_action():
    one, zero = MLaurent.const(2, 1), MLaurent(2)
    G = GammaStructure.add(LaurentMatrix([[one, zero], [zero, one]]))
    S = birkhoff_split(BundleDesc.split((0, 0)))
    assert classify_action_on_levi_quotient(levi_quotient(end_algebra(S)), BundleAction(S, G)).verdict == "trivial"


@pytest.mark.parametrize("seed", range(5))
def test_mult_instances_are_torus_factoring_and_consistent(seed):
    inst = mult_instance(random.Random(seed))
    A, action = setup(inst)
    cmp = reduction_comparison(A, action.gamma)
    assert cmp["verdict"] == "torus-factoring"
    assert cmp["forward_consistent"] and cmp["refines"]


def test_refines_examples():
    assert refines([1, 1], [2])
    assert refines([2, 1, 1], [3, 1])
    assert refines([1, 1, 1], [1, 1, 1])
    assert not refines([2, 2], [3, 1])
    assert not refines([2], [1, 1])


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.stem)
def test_hat_refines_equivariant_partition_on_corpus(path):
    inst = parse_instance(path.read_text())
    A, action = setup(inst)
    cmp = reduction_comparison(A, action.gamma)
    assert cmp["refines"]
    assert cmp["forward_consistent"]
