import random

import pytest

from fibertool import _pykernels, kernels
from fibertool.groebner import buchberger

from conftest import ring

cython = pytest.importorskip("fibertool._ckernels")
P = 32003


def random_rows(rng, m, n, density=0.5):
    return [[rng.randrange(P) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def test_known_ranks():
    assert _pykernels.rank([[1, 2], [2, 4]], 2, P) == 1
    assert _pykernels.rank([[1, 0], [0, 1], [1, 1]], 2, P) == 2
    assert _pykernels.independent_rows([[0, 0], [3, 0], [6, 0], [0, 5]], 2, P) == [1, 3]
    assert _pykernels.rank([[1, 2], [2, 4]], 2, 0) == 1


def test_independent_rows_agree():
    rng = random.Random(11)
    for _ in range(200):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        rows = random_rows(rng, m, n, rng.random())
        if rng.random() < 0.3 and rows:
            rows.append([(a + 2 * b) % P for a, b in zip(rows[0], rows[-1])])
        assert cython.independent_rows(rows, n, P) == _pykernels.independent_rows(rows, n, P)


def test_reduction_agrees_on_groebner_runs():
    rng = random.Random(5)
    S = ring("xyz")
    for _ in range(30):
        gens = []
        for _ in range(3):
            f = S.zero()
            for _ in range(3):
                e = [rng.randint(0, 2) for _ in range(3)]
                f = f + S.monomial(e, rng.randint(1, 100))
            gens.append(f)
        gens = [g for g in gens if g]
        prev = kernels.use_backend("python")
        try:
            slow = buchberger(gens).polys()
            kernels.use_backend("cython")
            fast = buchberger(gens).polys()
        finally:
            kernels.use_backend(prev)
        assert slow == fast


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
