"""JSON encoding of instances, endomorphisms and decompositions.

Scalars are strings ("3/2" or "[m; c0, c1, ...]"), Laurent polynomials are
exponent -> scalar maps, and two-variable lifts are nested maps
{t exponent: {z exponent: scalar}}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bundle import BundleDesc, BundleError
from .endalgebra import GlobalEndo
from .equivariant import GammaElement, GammaStructure, Mobius
from .exactmath.laurent import Laurent, LaurentMatrix, MLaurent
from .exactmath.poly import Poly
from .exactmath.scalar import Scalar, parse_scalar

__all__ = [
    "InstanceError",
    "Instance",
    "dumps",
    "parse_instance",
    "instance_to_json",
    "endo_to_json",
    "endo_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
]

DEFAULT_OPTIONS = {"seed": 0, "conductor_max": 24, "coeff_bound": 5}


class InstanceError(ValueError):
    """Malformed or mathematically invalid input."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _scalar(x) -> Scalar:
    try:
        return parse_scalar(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad scalar {x!r}: {exc}") from None


def laurent_to_json(f: Laurent) -> dict:
    return {str(e): str(c) for e, c in sorted(f.terms.items())}


def laurent_from_json(d) -> Laurent:
    if isinstance(d, (int, str)) and not isinstance(d, bool):
        return Laurent.const(_scalar(d))
    if not isinstance(d, dict):
        raise InstanceError(f"expected an exponent map, got {d!r}")
    try:
        return Laurent({int(e): _scalar(c) for e, c in d.items()})
    except ValueError as exc:
        raise InstanceError(f"bad exponent map {d!r}: {exc}") from None


def mlaurent_to_json(f: MLaurent) -> dict:
    out: dict = {}
    for (te, ze), c in sorted(f.terms.items()):
        out.setdefault(str(te), {})[str(ze)] = str(c)
    return out


def mlaurent_from_json(d) -> MLaurent:
    if not isinstance(d, dict):
        raise InstanceError(f"expected a nested exponent map, got {d!r}")
    terms = {}
    try:
        for te, inner in d.items():
            for ze, c in inner.items():
                terms[(int(te), int(ze))] = _scalar(c)
    except (ValueError, AttributeError) as exc:
        raise InstanceError(f"bad parameter lift entry {d!r}: {exc}") from None
    return MLaurent(2, terms)


def _matrix_from_json(rows, entry, n=None) -> LaurentMatrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InstanceError("matrix must be a list of rows")
    if n is not None and (len(rows) != n or any(len(r) != n for r in rows)):
        raise InstanceError(f"matrix must be {n}x{n}")
    try:
        return LaurentMatrix([[entry(e) for e in r] for r in rows])
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def matrix_to_json(M: LaurentMatrix) -> list:
    enc = mlaurent_to_json if M.n and isinstance(M.rows[0][0], MLaurent) else laurent_to_json
    return [[enc(e) for e in r] for r in M.rows]


def mobius_to_json(m: Mobius) -> list:
    return [[str(x) for x in r] for r in m.matrix()]


def mobius_from_json(d) -> Mobius:
    try:
        (a, b), (c, dd) = d
        return Mobius(_scalar(a), _scalar(b), _scalar(c), _scalar(dd))
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"bad Mobius matrix {d!r}: {exc}") from None


def gamma_to_json(G: GammaStructure) -> dict:
    if G.kind == "finite":
        return {
            "kind": "finite",
            "elements": [
                {"label": e.label, "mobius": mobius_to_json(e.mobius), "lift": matrix_to_json(e.lift)}
                for e in G.elements
            ],
            "table": G.table,
        }
    out = {"kind": G.kind, "lift": matrix_to_json(G.lift)}
    if G.kind == "mult":
        out["q"] = G.q
    else:
        out["shift"] = G.shift
    return out


def gamma_from_json(d, n: int) -> GammaStructure:
    if not isinstance(d, dict) or "kind" not in d:
        raise InstanceError("gamma must be an object with a 'kind'")
    kind = d["kind"]
    if kind == "trivial":
        return GammaStructure.trivial(n)
    if kind == "finite":
        def element(e):
            return GammaElement(
                str(e.get("label", "g")),
                mobius_from_json(e.get("mobius", [[1, 0], [0, 1]])),
                _matrix_from_json(e["lift"], laurent_from_json, n),
            )

        try:
            if "generators" in d:
                return GammaStructure.from_generators([element(e) for e in d["generators"]])
            return GammaStructure.finite([element(e) for e in d["elements"]], d["table"])
        except KeyError as exc:
            raise InstanceError(f"missing field {exc}") from None
        except ValueError as exc:
            raise InstanceError(str(exc)) from None
    if kind in ("mult", "add"):
        lift = _matrix_from_json(d.get("lift"), mlaurent_from_json, n)
        if kind == "mult":
            return GammaStructure.mult(lift, int(d.get("q", 0)))
        return GammaStructure.add(lift, bool(d.get("shift", False)))
    raise InstanceError(f"unknown gamma kind {kind!r}")


@dataclass
class Instance:
    bundle: BundleDesc
    gamma: GammaStructure | None = None
    options: dict = field(default_factory=lambda: dict(DEFAULT_OPTIONS))
    name: str = ""

    @property
    def rank(self) -> int:
        return self.bundle.rank

    def group(self) -> GammaStructure:
        return self.gamma if self.gamma is not None else GammaStructure.trivial(self.rank)


def parse_instance(d) -> Instance:
    if isinstance(d, str):
        try:
            d = json.loads(d)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"invalid JSON: {exc}") from None
    if not isinstance(d, dict) or "transition" not in d:
        raise InstanceError("instance needs a 'transition' matrix")
    n = d.get("rank", len(d["transition"]))
    if not isinstance(n, int) or n < 0:
        raise InstanceError("rank must be a non-negative integer")
    T = _matrix_from_json(d["transition"], laurent_from_json, n)
    try:
        B = BundleDesc(T)
    except BundleError as exc:
        raise InstanceError(str(exc)) from None
    G = gamma_from_json(d["gamma"], n) if d.get("gamma") is not None else None
    opts = dict(DEFAULT_OPTIONS)
    opts.update(d.get("options", {}))
    return Instance(B, G, opts, str(d.get("name", "")))


def instance_to_json(inst: Instance) -> dict:
    out = {
        "rank": inst.rank,
        "transition": matrix_to_json(inst.bundle.transition),
        "options": dict(sorted(inst.options.items())),
    }
    if inst.name:
        out["name"] = inst.name
    if inst.gamma is not None:
        out["gamma"] = gamma_to_json(inst.gamma)
    return out


def endo_to_json(x: GlobalEndo) -> list:
    return x.to_lists()


def endo_from_json(a, grid) -> GlobalEndo:
    try:
        return GlobalEndo(tuple(a), [[Poly([_scalar(c) for c in e]) for e in r] for r in grid])
    except (ValueError, TypeError) as exc:
        raise InstanceError(f"bad endomorphism: {exc}") from None


def decomposition_to_json(D) -> dict:
    return {
        "split_type": list(D.split_type),
        "idempotents": [endo_to_json(p) for p in D.idempotents],
        "summand_types": [list(t) for t in D.summand_types],
        "labels": list(D.labels),
        "gamma_fixed": D.gamma_fixed,
        "partition": list(D.partition),
        "unsplit": [[str(c) for c in u.coeffs] for u in D.unsplit],
    }


def decomposition_from_json(d):
    from .levi import Decomposition

    try:
        a = tuple(d["split_type"])
        idems = [endo_from_json(a, g) for g in d["idempotents"]]
        types = [tuple(t) for t in d["summand_types"]]
        unsplit = [Poly([_scalar(c) for c in u]) for u in d.get("unsplit", [])]
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"bad decomposition: {exc}") from None
    D = Decomposition(a, idems, types, d.get("gamma_fixed"), list(d.get("labels", [])), unsplit)
    try:
        D.validate()
    except ValueError as exc:
        raise InstanceError(f"invalid decomposition: {exc}") from None
    return D
