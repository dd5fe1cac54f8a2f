from math import comb

from fibertool import linalg

from conftest import ring


def test_monomial_counts():
    for d in range(6):
        assert len(linalg.monomials_of_degree((1, 1, 1), d)) == comb(d + 2, 2)
    assert linalg.monomials_of_degree((2, 3), 5) == ((1, 1),)


def test_piece_and_quotient_dims():
    S = ring("xy")
    x, y = S.gens()
    gens = [(x * x).terms, (x * y).terms, (y * y).terms]
    assert linalg.quotient_hf(gens, S, (0,), 3) == [1, 2, 0, 0]
    assert linalg.free_dim(S, (0, 1), 2) == 3 + 2


def test_intersection_dim():
    S = ring("xy")
    x, y = S.gens()
    assert linalg.intersection_dim([x.terms], [y.terms], S, (0,), 2) == 1  # xy
    assert linalg.intersection_dim([x.terms], [y.terms], S, (0,), 1) == 0


def test_minimal_subset():
    S = ring("xy")
    x, y = S.gens()
    gens = [x.terms, (x * y).terms, y.terms, (x + y).terms]
    kept = linalg.minimal_subset(gens, S, (0,))
    assert len(kept) == 2
    assert linalg.minimal_subset([(x * y).terms], S, (0,), modulo=[x.terms]) == []
