"""Instance generators: hidden splittings and standard group actions.

Random bundles are built as T = B(1/z) diag(z^a) A(z) with B, A products of
elementary matrices, so the splitting type is known in advance.  Lifts are
written down in split coordinates and carried back to the frame of T.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .bundle import BundleDesc
from .equivariant import GammaElement, GammaStructure, Mobius
from .exactmath.laurent import Laurent, LaurentMatrix, MLaurent
from .exactmath.scalar import Scalar
from .serialize import Instance, instance_to_json

__all__ = [
    "random_unimodular",
    "hidden_bundle",
    "random_split_instance",
    "carry_finite_lift",
    "carry_param_lift",
    "example_instances",
    "swap_instance",
    "order8_instance",
    "additive_instance",
    "mult_instance",
    "cyclic_instance",
    "write_corpus",
]


def random_unimodular(rng: random.Random, n: int, deg: int, steps: int | None = None) -> LaurentMatrix:
    """Product of elementary matrices with polynomial entries of degree <= deg."""
    M = LaurentMatrix.identity(n)
    if n < 2:
        return M.scale(Scalar(rng.choice([1, -1, 2])))
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        rows = [[Laurent.const(1) if r == c else Laurent() for c in range(n)] for r in range(n)]
        rows[i][j] = Laurent({k: Scalar(rng.randint(-3, 3)) for k in range(rng.randint(0, deg) + 1)})
        M = M @ LaurentMatrix(rows)
    return M


def hidden_bundle(a, rng: random.Random, deg: int = 3):
    """(T, A) with T = B(1/z) diag(z^a) A(z)."""
    n = len(a)
    B = random_unimodular(rng, n, deg).map(Laurent.invert_variable)
    A = random_unimodular(rng, n, deg)
    return B @ LaurentMatrix.diag_monomials(list(a)) @ A, A


def random_split_instance(rng: random.Random, n_max: int = 4, a_max: int = 4, deg: int = 3, n_min: int = 1):
    n = rng.randint(n_min, n_max)
    a = sorted((rng.randint(-a_max, a_max) for _ in range(n)), reverse=True)
    T, A = hidden_bundle(a, rng, deg)
    return T, tuple(a), A


def carry_finite_lift(C_split: LaurentMatrix, A: LaurentMatrix, phi: Mobius) -> LaurentMatrix:
    """Lift in the frame of T = B(1/z) D A(z) from a lift in split coordinates."""
    At = A.transpose()
    return At.map(phi.pullback) @ C_split @ At.inverse()


def carry_param_lift(C_split: LaurentMatrix, A: LaurentMatrix, kind: str, q: int = 0, shift: bool = False):
    t, y = MLaurent.var(2, 0), MLaurent.var(2, 1)
    if kind == "mult":
        image = (t ** q) * y if q else y
    else:
        image = y + t if shift else y
    At = A.transpose()
    moved = At.map(lambda f: MLaurent.from_laurent(f, 1, 0).substitute([image], 2))
    back = At.inverse().map(lambda f: MLaurent.from_laurent(f, 2, 1))
    return moved @ C_split @ back


def _tag(a) -> str:
    return "_".join(str(x).replace("-", "m") for x in a)


def _const(rows) -> LaurentMatrix:
    return LaurentMatrix.constant(rows)


def _split_or_hidden(a, rng, hidden: bool, deg: int = 2):
    if hidden:
        return hidden_bundle(a, rng, deg)
    return LaurentMatrix.diag_monomials(list(a)), LaurentMatrix.identity(len(a))


def swap_instance(a: int = 0, hidden: bool = False, seed: int = 0) -> Instance:
    """O(a) + O(a) with Z/2 acting by z -> -z and swapping the summands."""
    rng = random.Random(seed)
    T, A = _split_or_hidden((a, a), rng, hidden)
    phi = Mobius.affine(-1)
    C = carry_finite_lift(_const([[0, 1], [1, 0]]), A, phi)
    G = GammaStructure.from_generators([GammaElement("s", phi, C)])
    return Instance(BundleDesc(T), G, name=f"swap_deg{a}" + ("_hidden" if hidden else ""))


def order8_instance() -> Instance:
    """O + O with the dihedral group generated by the swap and diag(1, -1)."""
    gens = [
        GammaElement("s", Mobius(), _const([[0, 1], [1, 0]])),
        GammaElement("d", Mobius(), _const([[1, 0], [0, -1]])),
    ]
    return Instance(BundleDesc.split((0, 0)), GammaStructure.from_generators(gens), name="order8")


def additive_instance(a: int = 0) -> Instance:
    """O(a) + O(a) with the additive group acting by the unipotent lift [[1, t], [0, 1]]."""
    one, t, zero = MLaurent.const(2, 1), MLaurent.var(2, 0), MLaurent(2)
    G = GammaStructure.add(LaurentMatrix([[one, t], [zero, one]]))
    return Instance(BundleDesc.split((a, a)), G, name=f"additive_unipotent_deg{a}")


def mult_instance(rng: random.Random, n_max: int = 3, a_max: int = 3, hidden: bool = True) -> Instance:
    """Multiplicative group with a diagonal lift t^w_i in split coordinates."""
    n = rng.randint(1, n_max)
    a = tuple(sorted((rng.randint(-a_max, a_max) for _ in range(n)), reverse=True))
    q = rng.randint(0, 2)
    weights = [rng.randint(-2, 2) for _ in range(n)]
    T, A = _split_or_hidden(a, rng, hidden)
    diag = LaurentMatrix(
        [[MLaurent.var(2, 0, weights[i]) if i == j else MLaurent(2) for j in range(n)] for i in range(n)]
    )
    C = carry_param_lift(diag, A, "mult", q)
    return Instance(BundleDesc(T), GammaStructure.mult(C, q), name=f"mult_q{q}_" + _tag(a))


def cyclic_instance(rng: random.Random, hidden: bool = True) -> Instance:
    """Z/m rotating the base by a root of unity; lift mixes equal-degree summands."""
    m = rng.choice([2, 3, 4])
    zeta = Scalar.zeta(m) if m > 2 else Scalar(-1)
    n = rng.randint(2, 3)
    d = rng.randint(-2, 2)
    a = tuple(sorted([d, d] + [rng.randint(-2, 2) for _ in range(n - 2)], reverse=True))
    T, A = _split_or_hidden(a, rng, hidden)
    phi = Mobius.affine(zeta)
    # permutation of the two equal-degree summands times a diagonal of roots of unity
    i = a.index(d)
    rows = [[Scalar(0)] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = zeta ** rng.randint(0, m - 1)
    if m == 2:
        rows[i][i], rows[i + 1][i + 1] = Scalar(0), Scalar(0)
        rows[i][i + 1], rows[i + 1][i] = Scalar(1), Scalar(1)
    C = carry_finite_lift(_const(rows), A, phi)
    G = GammaStructure.from_generators([GammaElement("r", phi, C)])
    return Instance(BundleDesc(T), G, name=f"cyclic{m}_" + _tag(a))


def example_instances() -> list[Instance]:
    z = Laurent.mono
    out = [
        Instance(BundleDesc(LaurentMatrix([[z(2), Laurent()], [Laurent(), z(-1)]])), name="diag_z2_zinv"),
        Instance(BundleDesc(LaurentMatrix([[z(1), z(0)], [Laurent(), z(0)]])), name="upper_z_1"),
        Instance(BundleDesc(LaurentMatrix([[z(1), z(0)], [Laurent(), z(1)]])), name="upper_z_z"),
        swap_instance(0),
        swap_instance(1, hidden=True, seed=3),
        order8_instance(),
        additive_instance(0),
    ]
    rng = random.Random(2024)
    for k in range(6):
        T, a, _ = random_split_instance(rng, n_min=2)
        out.append(Instance(BundleDesc(T), name=f"random_{k}_" + _tag(a)))
    for k in range(3):
        inst = mult_instance(rng)
        inst.name = f"{inst.name}_{k}"
        out.append(inst)
    for k in range(3):
        inst = cyclic_instance(rng)
        inst.name = f"{inst.name}_{k}"
        out.append(inst)
    return out


def write_corpus(directory) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in example_instances():
        p = d / f"{inst.name}.json"
        p.write_text(json.dumps(instance_to_json(inst), sort_keys=True, indent=2) + "\n")
        paths.append(p)
    return paths
