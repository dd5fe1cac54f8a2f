from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fibertool.modules import ModuleRep
from fibertool.torpoly import MINUS_INFINITY, NotStabilized, fit_polynomial, tor1_sequence


def test_zero_sequence():
    p = fit_polynomial([0] * 6)
    assert p.degree is None and p.is_zero
    assert p.to_json()["degree"] == MINUS_INFINITY


def test_eventually_constant():
    p = fit_polynomial([5, 1, 1, 1, 1, 1], window=4)
    assert p.degree == 0 and p.binomial == (1,) and p.stable_from == 1


def test_triangular_numbers():
    p = fit_polynomial([0, 1, 3, 6, 10, 15, 21], window=4)
    assert p.degree == 2
    assert p.binomial == (0, 1, 1)  # n + C(n, 2) = n(n+1)/2
    assert p.leading_coefficient == Fraction(1, 2)
    assert all(p(n) == n * (n + 1) // 2 for n in range(10))


def test_too_short():
    with pytest.raises(ValueError):
        fit_polynomial([1, 2, 3, 4, 5], window=4)


def test_not_stabilized():
    with pytest.raises(NotStabilized):
        fit_polynomial([1, 2, 4, 8, 16, 32, 64], window=4)


@given(st.lists(st.integers(-5, 5), max_size=3), st.lists(st.integers(-9, 9), max_size=3))
def test_recovers_polynomial_with_noisy_prefix(coeffs, prefix):
    from fibertool.hilbert import gbinom

    N = 14
    vals = [sum(c * gbinom(n, j) for j, c in enumerate(coeffs)) for n in range(N)]
    vals[: len(prefix)] = prefix
    p = fit_polynomial(vals, window=4)
    assert all(p(n) == vals[n] for n in range(p.stable_from, N))
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    assert list(p.binomial) == trimmed
    assert (p.degree is None) == all(v == 0 for v in vals[p.stable_from:])


def test_sequences(ex5, regular):
    A, M, I = ex5
    prof = tor1_sequence(M, I, 10)
    assert prof.values == (1,) * 11 and prof.degree == 0
    free = tor1_sequence(ModuleRep.free(A, (0, 0)), I, 8)
    assert free.values == (0,) * 9 and free.degree is None
    A, M, I = regular
    assert tor1_sequence(M, I, 10).to_json()["degree"] == MINUS_INFINITY


def test_a1_sequence_is_eventually_polynomial(a1):
    A, M, I = a1
    prof = tor1_sequence(M, I, 12)
    assert prof.stabilized
    p = prof.poly
    assert all(p(n) == prof.values[n] for n in range(p.stable_from, 13))
