from hypothesis import given, strategies as st

from fibertool.hilbert import (
    HilbertSeries,
    binomial_basis,
    gbinom,
    hilbert_polynomial,
    monomial_numerator,
)
from fibertool.linalg import monomials_of_degree


def standard_count(gens, n, d):
    return sum(1 for m in monomials_of_degree((1,) * n, d) if not any(all(a >= b for a, b in zip(m, g)) for g in gens))


def series(gens, n, weights=None):
    w = weights or (1,) * n
    return HilbertSeries(tuple(monomial_numerator(gens, w)), w)


def test_fat_point():
    hs = series([(2, 0), (1, 1), (0, 2)], 2)
    assert hs.values(4) == [1, 2, 0, 0, 0]
    assert hs.is_finite_length and hs.length == 3 and hs.dim == 0


def test_line():
    hs = series([(1, 0)], 2)
    assert hs.values(5) == [1] * 6
    assert hs.dim == 1 and hs.multiplicity == 1
    assert not hs.is_finite_length and hs.length is None


def test_residue_field_length():
    assert series([(1, 0), (0, 1)], 2).length == 1


def test_hilbert_polynomials():
    assert hilbert_polynomial(series([(1, 1, 0), (0, 1, 1), (2, 0, 1)], 3)) == [4]
    # k[x,y,z]: C(n+2, 2) = 1 + 2n... in binomial basis [1, 2, 1]
    assert hilbert_polynomial(series([], 3)) == [1, 2, 1]


def test_weighted_series():
    hs = series([(0, 0, 2)], 3, (2, 2, 2))  # u^2 with all weights 2
    vals = hs.values(6)
    assert vals[1] == vals[3] == 0 and vals[2] == 3


gens_strategy = st.lists(st.tuples(*[st.integers(0, 3)] * 3).filter(any), max_size=4)


@given(gens_strategy)
def test_series_matches_standard_monomial_count(gens):
    hs = series(gens, 3)
    assert hs.values(5) == [standard_count(gens, 3, d) for d in range(6)]


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5), st.integers(-3, 6))
def test_binomial_basis_reproduces_values(vals, n0):
    b = binomial_basis(vals, n0)
    for i, v in enumerate(vals):
        assert sum(c * gbinom(n0 + i, j) for j, c in enumerate(b)) == v
