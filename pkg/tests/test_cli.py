from __future__ import annotations

import json
import random

import pytest

from levired.cli import EXIT_BREACH, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, main
from levired.corpus import additive_instance, example_instances, mult_instance, order8_instance, swap_instance
from levired.serialize import instance_to_json, parse_instance


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out


def inst_file(tmp_path, inst, name="inst.json"):
    return write(tmp_path, name, instance_to_json(inst))


def test_split_diagonal(tmp_path, capsys):
    path = write(tmp_path, "d.json", {"transition": [[{"2": 1}, {}], [{}, {"-1": 1}]]})
    code, rep, _ = run(capsys, "split", path)
    assert code == EXIT_OK
    assert rep["split_type"] == [2, -1] and rep["verified"] and rep["oracle_agrees"]


def test_split_upper_triangular(tmp_path, capsys):
    path = write(tmp_path, "u.json", {"transition": [[{"1": 1}, 1], [{}, 1]]})
    code, rep, _ = run(capsys, "split", path)
    assert code == EXIT_OK and rep["split_type"] == [1, 0]


@pytest.mark.parametrize(
    "doc",
    [
        {"transition": [[{"1": 1}, 1], [{"1": 1}, 1]]},
        {"transition": [[1, 0]]},
        {"rank": 2},
        {"transition": [[{"x": 1}]]},
        {"transition": [[1]], "gamma": {"kind": "weird"}},
    ],
    ids=["singular", "ragged", "missing", "bad-exponent", "bad-gamma"],
)
def test_invalid_instances_exit_2(tmp_path, capsys, doc):
    code, _, out = run(capsys, "split", write(tmp_path, "bad.json", doc))
    assert code == EXIT_INVALID
    assert "invalid input" in out.err


def test_malformed_json_exits_2(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "split", str(p))[0] == EXIT_INVALID


def test_invalid_action_exits_2(tmp_path, capsys):
    doc = instance_to_json(swap_instance(0))
    doc["gamma"]["elements"][1]["lift"] = [[1, 1], [0, 1]]
    code, _, out = run(capsys, "reduce", write(tmp_path, "g.json", doc))
    assert code == EXIT_INVALID


def test_reduce_exit_codes(tmp_path, capsys):
    code, rep, _ = run(capsys, "reduce", inst_file(tmp_path, order8_instance()))
    assert code == EXIT_NEGATIVE and rep["partition"] == [2]
    assert rep["certificates"]["equivariant"] and rep["certificates"]["minimal"]
    code, rep, _ = run(capsys, "reduce", inst_file(tmp_path, swap_instance(0)))
    assert code == EXIT_OK and rep["partition"] == [1, 1]
    code, rep, _ = run(capsys, "reduce", inst_file(tmp_path, additive_instance(0)))
    assert code == EXIT_NEGATIVE


def test_trivial_group_reduce_gives_lines(tmp_path, capsys):
    path = write(tmp_path, "t.json", {"transition": [[{"1": 1}, 1], [{}, {"1": 1}]]})
    code, rep, _ = run(capsys, "reduce", path)
    assert code == EXIT_OK and rep["partition"] == [1, 1]


def test_reports_are_byte_identical(tmp_path, capsys):
    path = inst_file(tmp_path, swap_instance(1, hidden=True, seed=5))
    outs = []
    for _ in range(2):
        main(["reduce", path, "--seed", "3"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_verify_replays_reduce_compare_quotient(tmp_path, capsys):
    path = inst_file(tmp_path, mult_instance(random.Random(4)))
    reports = {}
    for seed in ("1", "2"):
        main(["reduce", path, "--seed", seed])
        reports[seed] = write(tmp_path, f"r{seed}.json", json.loads(capsys.readouterr().out))
    main(["compare", path, reports["1"], reports["2"]])
    cmp_path = write(tmp_path, "cmp.json", json.loads(capsys.readouterr().out))
    main(["quotient", path])
    q_path = write(tmp_path, "q.json", json.loads(capsys.readouterr().out))
    for rp in (reports["1"], cmp_path, q_path):
        code, rep, _ = run(capsys, "verify", rp)
        assert code == EXIT_OK and rep["ok"], rep


def test_verify_detects_tampering(tmp_path, capsys):
    path = inst_file(tmp_path, swap_instance(0))
    main(["reduce", path])
    rep = json.loads(capsys.readouterr().out)
    # exchange the swap-fixed lines for coordinate projectors
    rep["decomposition"]["idempotents"] = [[[["1"], []], [[], []]], [[[], []], [[], ["1"]]]]
    code, out, _ = run(capsys, "verify", write(tmp_path, "bad.json", rep))
    assert code == EXIT_NEGATIVE and not out["ok"]


def test_compare_identical_reductions(tmp_path, capsys):
    path = inst_file(tmp_path, swap_instance(0))
    main(["reduce", path])
    r = write(tmp_path, "r.json", json.loads(capsys.readouterr().out))
    code, rep, _ = run(capsys, "compare", path, r, r)
    assert code == EXIT_OK
    assert rep["tau"] == [[["1"], []], [[], ["1"]]] and rep["matching"] == [0, 1]


def test_compare_rejects_other_bundle(tmp_path, capsys):
    main(["reduce", inst_file(tmp_path, swap_instance(0), "a.json")])
    r = write(tmp_path, "r.json", json.loads(capsys.readouterr().out))
    other = write(tmp_path, "o.json", {"transition": [[{"1": 1}, {}], [{}, 1]]})
    assert run(capsys, "compare", other, r, r)[0] == EXIT_INVALID


def test_compare_type_mismatch_exits_1(tmp_path, capsys):
    path = write(tmp_path, "t.json", {"transition": [[{"1": 1}, {}], [{}, {"1": 1}]]})
    main(["reduce", path])
    rep = json.loads(capsys.readouterr().out)
    whole = dict(rep)
    whole["decomposition"] = dict(rep["decomposition"], idempotents=[[[["1"], []], [[], ["1"]]]],
                                  summand_types=[[1, 1]], labels=["U0"])
    code, _, _ = run(capsys, "compare", path, write(tmp_path, "a.json", rep), write(tmp_path, "b.json", whole))
    assert code == EXIT_NEGATIVE


@pytest.mark.parametrize(
    "inst, verdict",
    [(additive_instance(0), "nontrivial-non-torus"), (order8_instance(), "hypothesis-not-met"),
     (mult_instance(random.Random(1)), "torus-factoring")],
    ids=["additive", "order8", "mult"],
)
def test_quotient_verdicts(tmp_path, capsys, inst, verdict):
    code, rep, _ = run(capsys, "quotient", inst_file(tmp_path, inst))
    assert code == EXIT_OK and rep["verdict"] == verdict


def test_aut_summary(tmp_path, capsys):
    code, rep, _ = run(capsys, "aut", inst_file(tmp_path, swap_instance(0)))
    assert code == EXIT_OK and rep["end_dim"] == 4 and rep["fixed_dim"] == 2


def test_instance_round_trip():
    for inst in example_instances():
        doc = instance_to_json(inst)
        assert instance_to_json(parse_instance(json.dumps(doc))) == doc


def test_corpus_write_and_run(tmp_path, capsys):
    d = tmp_path / "corpus"
    code, rep, _ = run(capsys, "corpus", "write", str(d))
    assert code == EXIT_OK and len(rep["files"]) == len(example_instances())
    code, rep, _ = run(capsys, "corpus", "run", str(d), "--jobs", "2")
    assert code == EXIT_OK and rep["all_consistent"]
    assert all(r["oracle_agrees"] and r["equivariant"] for r in rep["instances"])


def test_breach_code_is_distinct():
    assert len({EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_BREACH}) == 4
