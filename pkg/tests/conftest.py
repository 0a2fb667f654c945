from __future__ import annotations

import sys

import pytest

from levired.endalgebra import GlobalEndo
from levired.exactmath.laurent import Laurent, LaurentMatrix
from levired.exactmath.poly import Poly
from levired.exactmath.scalar import Scalar


def lp(d) -> Laurent:
    """Laurent polynomial from {exponent: int}."""
    return Laurent({e: Scalar(c) for e, c in d.items()})


def lmat(rows) -> LaurentMatrix:
    return LaurentMatrix([[lp(e) if isinstance(e, dict) else Laurent.const(Scalar(e)) for e in r] for r in rows])


def poly(*coeffs) -> Poly:
    return Poly([Scalar(c) for c in coeffs])


def endo(a, grid) -> GlobalEndo:
    """grid entries are coefficient lists (low to high)."""
    return GlobalEndo(tuple(a), [[poly(*e) for e in r] for r in grid])


@pytest.fixture
def builders():
    return {"lp": lp, "lmat": lmat, "poly": poly, "endo": endo}


def split_types(n_min=1, n_max=3, a_max=3):
    from hypothesis import strategies as st

    return st.lists(st.integers(-a_max, a_max), min_size=n_min, max_size=n_max).map(
        lambda xs: tuple(sorted(xs, reverse=True))
    )


def endos(a, lo=-3, hi=3):
    """Hypothesis strategy for global endomorphisms of O(a) with small integer coefficients."""
    from hypothesis import strategies as st

    from levired.endalgebra import EndAlgebra

    A = EndAlgebra(a)
    return st.lists(st.integers(lo, hi), min_size=A.dim, max_size=A.dim).map(
        lambda v: A.from_coords([Scalar(c) for c in v])
    )


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
