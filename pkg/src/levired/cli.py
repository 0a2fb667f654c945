"""Command-line front end.

Every command reads an instance (JSON file or "-" for stdin) and prints a
canonical JSON report.  Exit codes: 0 ok, 1 verified negative, 2 invalid
input, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bundle import SplitBundle, birkhoff_split, split_type_via_sections
from .endalgebra import (
    EndAlgebra,
    GlobalEndo,
    InvariantBreach,
    Subalgebra,
    char_poly,
    end_algebra,
    radical,
    unit_inverse,
)
from .equivariant import BundleAction, act_on_endo, derivation, fixed_subalgebra, validate_action
from .exactmath.laurent import LaurentMatrix
from .exactmath.roots import SearchBudget
from .levi import (
    canonical_levi,
    certify,
    check_equivariant,
    intertwiner,
    maximal_torus_decomposition,
    torus_injectivity,
)
from .quotients import classify_action_on_levi_quotient, levi_quotient, reduction_comparison, refines
from .serialize import (
    Instance,
    InstanceError,
    decomposition_from_json,
    decomposition_to_json,
    dumps,
    endo_from_json,
    endo_to_json,
    instance_to_json,
    laurent_from_json,
    matrix_to_json,
    parse_instance,
)

__all__ = ["main", "run_command", "EXIT_OK", "EXIT_NEGATIVE", "EXIT_INVALID", "EXIT_BREACH"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_BREACH = 0, 1, 2, 3


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON: {exc}") from None


def _options(inst: Instance, args) -> dict:
    opts = dict(inst.options)
    for key in ("seed", "conductor_max", "coeff_bound"):
        val = getattr(args, key, None) if args is not None else None
        if val is not None:
            opts[key] = val
    return opts


def _budget(opts) -> SearchBudget:
    return SearchBudget(conductor=int(opts["conductor_max"]))


def _split_json(S: SplitBundle) -> dict:
    return {
        "split_type": list(S.split_type),
        "left_witness": matrix_to_json(S.left_witness),
        "right_witness": matrix_to_json(S.right_witness),
        "verified": S.verify(),
    }


def _split_from_report(inst: Instance, d) -> SplitBundle:
    try:
        n = inst.rank
        L = LaurentMatrix([[laurent_from_json(e) for e in r] for r in d["left_witness"]]) if n else LaurentMatrix([])
        R = LaurentMatrix([[laurent_from_json(e) for e in r] for r in d["right_witness"]]) if n else LaurentMatrix([])
        return SplitBundle(tuple(d["split_type"]), L, R, inst.bundle)
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"report lacks splitting data: {exc}") from None


def _checked_action(S: SplitBundle, inst: Instance) -> BundleAction:
    G = inst.group()
    report = validate_action(S, G)
    if not report.valid:
        raise InstanceError("invalid group action: " + "; ".join(report.failures))
    return BundleAction(S, G)


def run_split(inst: Instance, args=None):
    S = birkhoff_split(inst.bundle)
    oracle = split_type_via_sections(inst.bundle) if inst.rank else ()
    rep = {"command": "split", "instance": instance_to_json(inst), **_split_json(S),
           "section_oracle": list(oracle), "oracle_agrees": tuple(oracle) == S.split_type}
    if not rep["verified"] or not rep["oracle_agrees"]:
        raise InvariantBreach("splitting witness or section oracle disagrees")
    return EXIT_OK, rep


def run_aut(inst: Instance, args=None):
    S = birkhoff_split(inst.bundle)
    action = _checked_action(S, inst)
    A = end_algebra(S)
    F = fixed_subalgebra(A, action)
    rad = radical(F)
    L = levi_quotient(A)
    return EXIT_OK, {
        "command": "aut",
        "instance": instance_to_json(inst),
        "split": _split_json(S),
        "end_dim": A.dim,
        "fixed_dim": F.dim,
        "fixed_basis": [endo_to_json(b) for b in F.basis],
        "fixed_radical_dim": len(rad),
        "unipotent_radical_dim": len(L.radical_basis),
        "levi_quotient": L.quotient_description,
    }


def run_reduce(inst: Instance, args=None):
    opts = _options(inst, args)
    S = birkhoff_split(inst.bundle)
    action = _checked_action(S, inst)
    A = end_algebra(S)
    D = maximal_torus_decomposition(A, action, int(opts["seed"]), int(opts["coeff_bound"]), _budget(opts))
    levi = canonical_levi(D)
    rep = {
        "command": "reduce",
        "instance": instance_to_json(inst),
        "options": opts,
        "seed": opts["seed"],
        "split": _split_json(S),
        "decomposition": decomposition_to_json(D),
        "partition": list(D.partition),
        "summand_types": [list(t) for t in D.summand_types],
        "levi": {
            "partition": list(levi.partition),
            "h0": levi.description,
            "base_point_frame": [[str(c) for c in r] for r in levi.base_point_frame],
        },
        "certificates": certify(D, A, action),
    }
    proper = len(D.idempotents) > 1 or inst.rank <= 1
    return (EXIT_OK if proper else EXIT_NEGATIVE), rep


def _decomp_from_report(d):
    return decomposition_from_json(d["decomposition"] if "decomposition" in d else d)


def run_compare(inst: Instance, rep_a, rep_b, args=None):
    opts = _options(inst, args)
    S = birkhoff_split(inst.bundle)
    for r in (rep_a, rep_b):
        if "split" in r and _split_json(S)["right_witness"] != r["split"]["right_witness"]:
            raise InstanceError("reduction was computed for a different bundle or frame")
    D1, D2 = _decomp_from_report(rep_a), _decomp_from_report(rep_b)
    if D1.split_type != S.split_type or D2.split_type != S.split_type:
        raise InstanceError("reductions belong to a different bundle")
    rep = {"command": "compare", "instance": instance_to_json(inst), "split": _split_json(S),
           "a": decomposition_to_json(D1), "b": decomposition_to_json(D2)}
    if sorted(D1.summand_types) != sorted(D2.summand_types):
        rep["types_equal"] = False
        return EXIT_NEGATIVE, rep
    action = _checked_action(S, inst)
    A = end_algebra(S)
    tau, match = intertwiner(D1, D2, A, action, int(opts["seed"]))
    rep.update({
        "types_equal": True,
        "tau": endo_to_json(tau),
        "tau_inverse": endo_to_json(unit_inverse(tau)),
        "matching": match,
        "verified": True,
    })
    return EXIT_OK, rep


def run_quotient(inst: Instance, args=None):
    opts = _options(inst, args)
    S = birkhoff_split(inst.bundle)
    action = _checked_action(S, inst)
    A = end_algebra(S)
    L = levi_quotient(A)
    cls = classify_action_on_levi_quotient(L, action, _budget(opts))
    comp = reduction_comparison(A, inst.group(), int(opts["seed"]), int(opts["coeff_bound"]), _budget(opts))
    return EXIT_OK, {
        "command": "quotient",
        "instance": instance_to_json(inst),
        "split": _split_json(S),
        "degrees": [d for d, _ in L.distinct_degrees],
        "multiplicities": [m for _, m in L.distinct_degrees],
        "radical_dim": len(L.radical_basis),
        "levi_quotient": L.quotient_description,
        "verdict": cls.verdict,
        "evidence": cls.evidence,
        "comparison": comp,
    }


def _verify_reduce(inst, S, rep, checks):
    action = _checked_action(S, inst)
    A = EndAlgebra(S.split_type, S)
    D = _decomp_from_report(rep)
    checks["complete_orthogonal"] = True  # decomposition_from_json validates
    cert = rep.get("certificates", {})
    eq = check_equivariant(D, action).fixed
    checks["equivariance_matches"] = eq == cert.get("equivariant")
    F = fixed_subalgebra(A, action)
    for item in cert.get("indecomposable", []):
        i = item["summand"]
        C = F.corner(D.idempotents[i])
        rad = radical(C)
        checks[f"summand_{i}_quotient_dim"] = C.dim - len(rad) == item["quotient_dim"]
        claimed = [endo_from_json(S.split_type, g) for g in item.get("radical_basis", [])]
        checks[f"summand_{i}_radical_basis"] = Subalgebra(A, claimed).dim == len(rad) and all(
            Subalgebra(A, rad).contains(x) for x in claimed)
    checks["torus_injective"] = torus_injectivity(D) == cert.get("torus_injective")
    for p, c in zip(D.idempotents, cert.get("charpoly_constancy", [])):
        chi, _ = char_poly(p)
        checks.setdefault("charpoly_constancy", True)
        checks["charpoly_constancy"] &= [str(x) for x in chi.coeffs] == c["charpoly"]
    checks["partition"] = list(D.partition) == rep.get("partition")


def _verify_compare(inst, S, rep, checks):
    action = _checked_action(S, inst)
    a = S.split_type
    D1, D2 = decomposition_from_json(rep["a"]), decomposition_from_json(rep["b"])
    if not rep.get("types_equal", True):
        checks["types_differ"] = sorted(D1.summand_types) != sorted(D2.summand_types)
        return
    tau, tinv = endo_from_json(a, rep["tau"]), endo_from_json(a, rep["tau_inverse"])
    ident = GlobalEndo.identity(a)
    checks["tau_unit"] = tau * tinv == ident and tinv * tau == ident
    G = action.gamma
    if G.kind == "finite":
        checks["tau_fixed"] = all(act_on_endo(action, g, tau) == tau for g in action.elements())
    else:
        checks["tau_fixed"] = derivation(action, tau).is_zero()
    checks["conjugation"] = all(
        tau * D1.idempotents[i] * tinv == D2.idempotents[j] for i, j in enumerate(rep["matching"]))


def run_verify(rep, args=None):
    """Replay the certificates of a report with exact arithmetic only."""
    if not isinstance(rep, dict) or "command" not in rep or "instance" not in rep:
        raise InstanceError("not a report produced by this tool")
    inst = parse_instance(rep["instance"])
    cmd = rep["command"]
    split_data = rep["split"] if "split" in rep else rep
    S = _split_from_report(inst, split_data)
    checks = {"witness_identity": S.verify()}
    checks["split_type"] = S.split_type == birkhoff_split(inst.bundle).split_type
    if cmd == "reduce":
        _verify_reduce(inst, S, rep, checks)
    elif cmd == "compare":
        _verify_compare(inst, S, rep, checks)
    elif cmd == "quotient":
        action = _checked_action(S, inst)
        cls = classify_action_on_levi_quotient(levi_quotient(EndAlgebra(S.split_type, S)), action)
        checks["verdict"] = cls.verdict == rep.get("verdict")
        comp = rep.get("comparison", {})
        checks["refines"] = refines(comp.get("hat_partition", []), comp.get("partition", [])) == comp.get("refines")
    elif cmd not in ("split", "aut"):
        raise InstanceError(f"cannot verify a {cmd!r} report")
    ok = all(checks.values())
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"command": "verify", "of": cmd, "checks": checks, "ok": ok}


def _corpus_one(path: str, seed: int):
    inst = parse_instance(_load_json(path))
    inst.options["seed"] = seed
    S = birkhoff_split(inst.bundle)
    oracle = split_type_via_sections(inst.bundle)
    code, rep = run_reduce(inst)
    comp = reduction_comparison(end_algebra(S), inst.group(), seed)
    c = rep["certificates"]
    return {
        "name": inst.name or Path(path).stem,
        "split_type": list(S.split_type),
        "oracle_agrees": tuple(oracle) == S.split_type,
        "partition": rep["partition"],
        "equivariant": c["equivariant"],
        "minimal": c["minimal"],
        "torus_injective": c["torus_injective"],
        "verdict": comp["verdict"],
        "refines": comp["refines"],
        "forward_consistent": comp["forward_consistent"],
        "exit": code,
    }


def run_corpus(directory: str, seed: int = 0, jobs: int = 1):
    paths = sorted(str(p) for p in Path(directory).glob("*.json"))
    if not paths:
        raise InstanceError(f"no instance files in {directory}")
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_corpus_one, paths, [seed] * len(paths)))
    else:
        rows = [_corpus_one(p, seed) for p in paths]
    keys = ("oracle_agrees", "equivariant", "minimal", "torus_injective", "refines", "forward_consistent")
    ok = all(r[k] for r in rows for k in keys)
    code = EXIT_OK if ok else EXIT_BREACH
    return code, {"command": "corpus run", "seed": seed, "instances": rows, "all_consistent": ok}


def _add_common(p):
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--conductor-max", dest="conductor_max", type=int, default=None,
                   help="largest cyclotomic conductor tried for eigenvalues (default 24)")
    p.add_argument("--coeff-bound", dest="coeff_bound", type=int, default=None,
                   help="bound B for random coefficients in [-B, B] (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levired", description="Equivariant Levi reductions of bundles on P^1.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [("split", "splitting type with witnesses"),
                       ("aut", "automorphism algebra summary"),
                       ("reduce", "canonical equivariant reduction with certificates"),
                       ("quotient", "Levi quotient and the induced group action")]:
        p = sub.add_parser(name, help=text)
        p.add_argument("instance", help="instance JSON path, or - for stdin")
        _add_common(p)
    p = sub.add_parser("compare", help="intertwiner between two reductions")
    p.add_argument("instance")
    p.add_argument("reduction_a")
    p.add_argument("reduction_b")
    _add_common(p)
    p = sub.add_parser("verify", help="replay the certificates in a report")
    p.add_argument("report")
    _add_common(p)
    p = sub.add_parser("corpus", help="batch operations over a directory of instances")
    p.add_argument("action", choices=["run", "write"])
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    return parser


def run_command(args):
    if args.command == "verify":
        return run_verify(_load_json(args.report), args)
    if args.command == "corpus":
        if args.action == "write":
            from .corpus import write_corpus

            paths = write_corpus(args.directory)
            return EXIT_OK, {"command": "corpus write", "files": [p.name for p in paths]}
        return run_corpus(args.directory, args.seed or 0, args.jobs)
    inst = parse_instance(_load_json(args.instance))
    if args.command == "compare":
        return run_compare(inst, _load_json(args.reduction_a), _load_json(args.reduction_b), args)
    runner = {"split": run_split, "aut": run_aut, "reduce": run_reduce, "quotient": run_quotient}[args.command]
    return runner(inst, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = run_command(args)
    except InvariantBreach as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (InstanceError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
