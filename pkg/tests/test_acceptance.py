"""Acceptance criteria 1-10, one test each.

Every test records a one-line verdict in RESULTS; conftest prints them at the
end of the run.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from pathlib import Path

from levired.bundle import BundleDesc, birkhoff_split, split_type_via_sections
from levired.cli import EXIT_NEGATIVE, main, run_reduce
from levired.corpus import (
    additive_instance,
    cyclic_instance,
    hidden_bundle,
    mult_instance,
    order8_instance,
    random_split_instance,
    swap_instance,
)
from levired.endalgebra import CONSTANCY_LOG, GlobalEndo, char_poly, end_algebra, radical, unit_inverse
from levired.equivariant import BundleAction, act_on_endo, fixed_subalgebra
from levired.exactmath.scalar import Scalar
from levired.levi import (
    check_equivariant,
    conjugate_decomposition,
    indecomposable_certificate,
    intertwiner,
    invariance_oracle,
    maximal_torus_decomposition,
    torus_injectivity,
)
from levired.quotients import classify_action_on_levi_quotient, levi_quotient, reduction_comparison
from levired.serialize import Instance, decomposition_from_json, instance_to_json, parse_instance

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
RESULTS: dict[int, str] = {}
OUTPUTS: list = []  # every decomposition produced here, for criterion 10


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


def setup(inst):
    S = birkhoff_split(inst.bundle)
    return end_algebra(S), BundleAction(S, inst.group())


def corpus_instances():
    return [parse_instance(p.read_text()) for p in sorted(CORPUS.glob("*.json"))]


def test_criterion_01_splitting_soundness():
    rng = random.Random(101)
    exact = verified = 0
    slowest = 0.0
    for _ in range(100):
        T, a, _ = random_split_instance(rng, n_max=4, a_max=4, deg=3)
        start = time.perf_counter()
        S = birkhoff_split(BundleDesc(T))
        ok_witness = S.verify()
        slowest = max(slowest, time.perf_counter() - start)
        exact += S.split_type == a
        verified += ok_witness
    ok = exact == 100 and verified == 100 and slowest < 1.0
    record(1, ok, f"types exact {exact}/100, witnesses verified {verified}/100, slowest {slowest:.3f}s")


def test_criterion_02_oracle_agreement():
    insts = corpus_instances()
    agree = sum(split_type_via_sections(i.bundle) == birkhoff_split(i.bundle).split_type for i in insts)
    record(2, agree == len(insts) > 0, f"section oracle agrees on {agree}/{len(insts)} corpus instances")


def test_criterion_03_trivial_group_splits_into_lines():
    rng = random.Random(303)
    lines = 0
    for _ in range(100):
        T, a, _ = random_split_instance(rng, n_max=4, a_max=4, deg=3)
        _, rep = run_reduce(Instance(BundleDesc(T)))
        lines += rep["partition"] == [1] * len(a)
        OUTPUTS.append(decomposition_from_json(rep["decomposition"]))
    record(3, lines == 100, f"all-ones partition on {lines}/100 random bundles")


def test_criterion_04_mult_equivariant_line_splitting():
    rng = random.Random(404)
    good = 0
    for _ in range(20):
        inst = mult_instance(rng)
        _, rep = run_reduce(inst)
        cert = rep["certificates"]
        D = decomposition_from_json(rep["decomposition"])
        OUTPUTS.append(D)
        good += rep["partition"] == [1] * inst.rank and cert["equivariant"] and cert["minimal"]
    record(4, good == 20, f"rank-1 fixed summands with passing certificates on {good}/20 instances")


def _unit(A, rng, F=None, bound=2):
    while True:
        space = F.basis if F is not None else A.basis
        u = A.identity() + sum((b * Scalar(rng.randint(-bound, bound)) for b in space), GlobalEndo.zero(A.split_type))
        if not char_poly(u)[0].coeff(0).is_zero():
            return u


def _equivariant_pool(rng):
    while True:
        inst = rng.choice([lambda: cyclic_instance(rng), lambda: mult_instance(rng),
                           lambda: swap_instance(rng.randint(-1, 2), hidden=True, seed=rng.randint(0, 99))])()
        A, action = setup(inst)
        D = maximal_torus_decomposition(A, action, seed=rng.randint(0, 99))
        if len(D.idempotents) > 1:
            yield A, action, D


def test_criterion_05_fixedness_matches_invariance():
    rng = random.Random(505)
    pos = neg = wrong = 0
    pool = _equivariant_pool(rng)
    while pos < 20 or neg < 20:
        A, action, D = next(pool)
        if pos < 20:
            truth = invariance_oracle(D, action)
            wrong += check_equivariant(D, action).fixed != truth
            pos += truth
            OUTPUTS.append(D)
        if neg < 20:
            F = fixed_subalgebra(A, action)
            for _ in range(20):
                u = _unit(A, rng)
                if F.contains(u):
                    continue
                C = conjugate_decomposition(u, D)
                truth = invariance_oracle(C, action)
                if not truth:
                    wrong += check_equivariant(C, action).fixed
                    neg += 1
                    break
    record(5, wrong == 0, f"{pos} positives, {neg} negatives, {wrong} misclassified")


def test_criterion_06_uniqueness_up_to_fixed_automorphism():
    rng = random.Random(606)
    insts = []
    for _ in range(10):
        a = tuple(sorted((rng.randint(-3, 3) for _ in range(rng.randint(1, 3))), reverse=True))
        insts.append(Instance(BundleDesc(hidden_bundle(a, rng, 3)[0])))
    insts += [cyclic_instance(rng) for _ in range(4)] + [mult_instance(rng) for _ in range(4)]
    insts += [swap_instance(1, hidden=True, seed=6), order8_instance()]
    good = 0
    for inst in insts:
        A, action = setup(inst)
        D1 = maximal_torus_decomposition(A, action, seed=rng.randint(0, 10**6))
        D2 = maximal_torus_decomposition(A, action, seed=rng.randint(0, 10**6))
        OUTPUTS.extend([D1, D2])
        if sorted(D1.summand_types) != sorted(D2.summand_types):
            continue
        tau, match = intertwiner(D1, D2, A, action)
        inv = unit_inverse(tau)
        good += all(tau * D1.idempotents[i] * inv == D2.idempotents[j] for i, j in enumerate(match))
    record(6, good == len(insts) == 20, f"intertwiner exact on {good}/{len(insts)} seed pairs")


def _rank_one_idempotents(height):
    vals = range(-height, height + 1)
    for v in itertools.product(vals, repeat=2):
        for w in itertools.product(vals, repeat=2):
            if v == (0, 0) or v[0] * w[0] + v[1] * w[1] != 1:
                continue
            yield GlobalEndo.constant((0, 0), [[v[i] * w[j] for j in range(2)] for i in range(2)])


def test_criterion_07_order8_minimality():
    A, action = setup(order8_instance())
    D = maximal_torus_decomposition(A, action)
    OUTPUTS.append(D)
    cert = indecomposable_certificate(D, 0, A, action)
    F = fixed_subalgebra(A, action)
    corner = F.corner(D.idempotents[0])
    # idempotents of a one-dimensional corner c*pi: c^2 = c forces c in {0, 1}
    only_trivial = corner.dim - len(radical(corner)) == 1 and corner.dim == 1
    fixed_found = 0
    tried = 0
    for p in _rank_one_idempotents(3):
        tried += 1
        fixed_found += all(act_on_endo(action, g, p) == p for g in action.elements())
    ok = D.partition == (2,) and cert["certified"] and only_trivial and fixed_found == 0 and tried > 0
    record(7, ok, f"partition {list(D.partition)}, certified {cert['certified']}, "
                  f"{tried} rank-1 idempotents of height <= 3 checked, {fixed_found} fixed")


def test_criterion_08_no_equivariant_reduction(tmp_path, capsys):
    inst = order8_instance()
    plain = Instance(inst.bundle)
    _, rep_plain = run_reduce(plain)
    code, rep_eq = run_reduce(inst)
    path = tmp_path / "order8.json"
    path.write_text(json.dumps(instance_to_json(inst)))
    cli_code = main(["reduce", str(path)])
    capsys.readouterr()
    OUTPUTS.extend(decomposition_from_json(r["decomposition"]) for r in (rep_plain, rep_eq))
    ok = rep_plain["partition"] == [1, 1] and rep_eq["partition"] == [2] and code == cli_code == EXIT_NEGATIVE
    record(8, ok, f"trivial group {rep_plain['partition']}, order-8 group {rep_eq['partition']}, exit {cli_code}")


def test_criterion_09_levi_quotient_classification():
    A, action = setup(additive_instance(0))
    verdict = classify_action_on_levi_quotient(levi_quotient(A), action).verdict
    cmp = reduction_comparison(A, action.gamma)
    add_ok = verdict == "nontrivial-non-torus" and cmp["partition"] == [2] and cmp["hat_partition"] == [1, 1]
    rng = random.Random(909)
    mults = [i for i in corpus_instances() if i.group().kind == "mult"] + [mult_instance(rng) for _ in range(20)]
    mult_ok = 0
    for inst in mults:
        A, action = setup(inst)
        c = reduction_comparison(A, action.gamma)
        mult_ok += c["verdict"] == "torus-factoring" and c["forward_consistent"]
    ok = add_ok and mult_ok == len(mults)
    record(9, ok, f"additive {verdict} with {cmp['partition']} vs {cmp['hat_partition']}; "
                  f"torus-factoring and consistent on {mult_ok}/{len(mults)} multiplicative instances")


def test_criterion_10_exactness_tripwires():
    before = CONSTANCY_LOG["checked"]
    for inst in corpus_instances():
        A, action = setup(inst)
        OUTPUTS.append(maximal_torus_decomposition(A, action))
    checked_here = CONSTANCY_LOG["checked"] - before
    injective = sum(torus_injectivity(D) for D in OUTPUTS)
    ok = CONSTANCY_LOG["failed"] == 0 and checked_here > 0 and injective == len(OUTPUTS)
    record(10, ok, f"char-poly constancy checks {CONSTANCY_LOG['checked']}, failures {CONSTANCY_LOG['failed']}; "
                   f"torus injective on {injective}/{len(OUTPUTS)} outputs")
