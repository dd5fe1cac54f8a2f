from pathlib import Path

import pytest

from fibertool.instance import parse_instance
from fibertool.modules import ModuleRep
from fibertool.poly import PolyRing, RingSpec

CORPUS = Path(__file__).resolve().parents[1] / "src" / "fibertool" / "corpus"
GOLDEN = ("ex5", "lemma21", "a1", "free")


def load(name):
    return parse_instance((CORPUS / f"{name}.alg").read_text())


def ring(names="xy", p=32003, weights=None):
    from fibertool.field import CoeffField

    return PolyRing(tuple(names), CoeffField(p), weights)


@pytest.fixture
def ex5():
    """``A = k[x,y]/(xy)``, ``M = A/(x) ++ A/(y)``, ``I = (y)``."""
    S = ring("xy")
    x, y = S.gens()
    A = RingSpec(S, [x * y])
    M = ModuleRep.direct_sum([ModuleRep.cyclic(A, [x]), ModuleRep.cyclic(A, [y])])
    return A, M, [y]


@pytest.fixture
def a1():
    """``A = k[x,y,u]/(u^2 - xy)``, ``M = coker [[u,x],[y,u]]``, ``I = (x,u)``."""
    inst = load("a1")
    return inst.spec, inst.module(), inst.I


@pytest.fixture
def regular():
    S = ring("xy")
    x, y = S.gens()
    A = RingSpec(S, [x * x])
    return A, ModuleRep.cyclic(A, [x]), [y]


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def record(criterion: str, ok: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")
