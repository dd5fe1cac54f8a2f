import numpy as np
import pytest

from fibertool.blowup import (
    NoSuperficialFound,
    NotEquigenerated,
    analytic_spread,
    check_candidate,
    fiber_cone,
    fiber_cone_module,
    fiber_hf_dense,
    fiber_module,
    find_reduction,
    first_syzygy,
    lci_check,
    monomial_ranks,
    reduces_at,
    rees_relations,
    superficial_search,
    tor1_dense_values,
    tor1_length,
    tor1_lengths,
    valabrega_valla,
)
from fibertool.modules import ModuleRep, ideal_power
from fibertool.poly import Poly, RingSpec

from conftest import ring


def polys(rees):
    return [Poly(rees.ring, v) for v in rees.relations]


# -- Tor lengths --


def test_free_module_has_no_tor(ex5):
    A, _, I = ex5
    assert tor1_lengths(ModuleRep.free(A, (0, 1)), I, 5) == [0] * 5


def test_ex5_tor_lengths(ex5):
    A, M, I = ex5
    assert tor1_lengths(M, I, 10) == [1] * 10


def test_regular_sequence_tor_vanishes(regular):
    A, M, I = regular
    assert tor1_lengths(M, I, 10) == [0] * 10


@pytest.mark.parametrize("name", ["ex5", "a1", "regular"])
def test_tor_routes_agree(name, request):
    A, M, I = request.getfixturevalue(name)
    for n in range(1, 4):
        sub = tor1_length(M, I, n)
        assert tor1_length(M, I, n, balanced=True) == sub
        dense = tor1_dense_values(M, I, n, 10)
        assert dense[-1] == 0 and sum(dense) == sub


# -- Rees and fiber data --


def test_rees_ideal_principal_regular():
    S = ring("x")
    (x,) = S.gens()
    assert rees_relations(ModuleRep.cyclic(RingSpec(S, [])), [x]).relations == []


def test_rees_ideal_of_maximal_ideal():
    S = ring("xy")
    x, y = S.gens()
    rees = rees_relations(ModuleRep.cyclic(RingSpec(S, [])), [x, y])
    (g,) = polys(rees)
    X, Y, T1, T2 = rees.ring.gens()
    assert g in (X * T2 - Y * T1, Y * T1 - X * T2)


def test_rees_relations_vanish_under_substitution(a1):
    A, _, I = a1
    rees = rees_relations(ModuleRep.cyclic(A), I)
    X, Y, U, T1, T2 = rees.ring.gens()
    found = [g for g in polys(rees)]
    assert any(g in (Y * T1 - U * T2, U * T2 - Y * T1) for g in found)
    # T_i -> t f_i: substitute into S[t] and reduce modulo the defining ideal
    St = ring("xyut")
    x, y, u, t = St.gens()
    imgs = [t * x, t * u]
    Aq = RingSpec(St, [u * u - x * y])
    for g in found:
        acc = St.zero()
        for P, c in g.terms.items():
            e = rees.ring.layout.exps(P)
            acc = acc + St.monomial(e[:3] + (0,), c) * imgs[0] ** e[3] * imgs[1] ** e[4]
        assert not Aq.reduce(acc)


def test_fiber_cones(ex5, a1):
    A, _, I = ex5
    F = fiber_cone_module(A, I)
    assert F.hilbert(10).values == [1] * 11 and F.dim == 1
    S = ring("xy")
    assert fiber_cone(RingSpec(S, []), S.gens()) == []
    assert analytic_spread(RingSpec(S, []), S.gens()) == 2
    A1, _, I1 = a1
    assert analytic_spread(A1, I1) == 2


@pytest.mark.parametrize("name", ["ex5", "a1", "regular"])
def test_fiber_hilbert_functions_match_minimal_generators(name, request):
    A, M, I = request.getfixturevalue(name)
    cone = fiber_cone_module(A, I).hilbert(8, audit=-1).values
    assert cone[:5] == fiber_hf_dense(ModuleRep.cyclic(A), I, 4)
    fm = fiber_module(M, I).hilbert(8).values
    assert fm[:5] == fiber_hf_dense(M, I, 4)
    mu = M.num_generators()
    assert fm[0] == mu and all(a <= mu * b for a, b in zip(fm, cone))
    ell = analytic_spread(A, I)
    assert ell <= len(I) and ell <= A.dim


def test_ex5_fiber_module(ex5):
    A, M, I = ex5
    fm = fiber_module(M, I)
    assert fm.hilbert(8).values == [2] + [1] * 8
    assert fm.dim == 1 and fm.depth == 0 and not fm.is_free()


def test_free_fiber_modules(ex5, regular):
    A, _, I = ex5
    assert fiber_module(ModuleRep.cyclic(A), I).is_free()
    A, M, I = regular
    fm = fiber_module(M, I)
    assert fm.hilbert(8).values == [1] * 9 and fm.is_free()


# -- reductions --


def test_principal_nonzerodivisor_reduces_itself(regular):
    A, _, I = regular
    rep = find_reduction(A, I, np.random.default_rng(0))
    assert rep.status == "verified-le-1" and rep.r == 0


@pytest.mark.parametrize("name", ["a1"])
def test_reduction_certificates(name, request):
    A, _, I = request.getfixturevalue(name)
    rep = find_reduction(A, I, np.random.default_rng(3))
    assert rep.r == 0 and len(rep.gens) == rep.ell == 2
    assert reduces_at(A, rep.gens, I, rep.r)


def test_maximal_ideal_reduction():
    S = ring("xy")
    A = RingSpec(S, [])
    rep = find_reduction(A, S.gens(), np.random.default_rng(1))
    assert rep.r == 0 and rep.status == "verified-le-1"


def test_reduction_number_two_is_certified_both_ways():
    # I = (x^2, y^2, xy)... J = (x^2, y^2) reduces I = m^2 with r_J = 1
    S = ring("xy")
    x, y = S.gens()
    A = RingSpec(S, [])
    I = [x * x, x * y, y * y]
    J = [x * x, y * y]
    assert not reduces_at(A, J, I, 0) and reduces_at(A, J, I, 1)


def test_mixed_degrees_refused():
    S = ring("xy")
    x, y = S.gens()
    with pytest.raises(NotEquigenerated):
        find_reduction(RingSpec(S, []), [x, y * y], np.random.default_rng(0))


def test_generator_counts_decrease_in_dimension_one(ex5, regular, a1):
    for A, M, I in (ex5, regular):
        assert A.dim == 1
        mus = fiber_hf_dense(M, I, 5)[1:]
        assert all(a >= b for a, b in zip(mus, mus[1:]))
    # with analytic spread two the counts grow
    A, M, I = a1
    assert fiber_hf_dense(M, I, 4) == [2, 3, 4, 5, 6]


# -- superficial elements --


def test_valabrega_valla_on_regular_element(regular):
    A, M, I = regular
    (y,) = I
    assert all(valabrega_valla(ModuleRep.cyclic(A), I, y, 8))
    assert all(valabrega_valla(M, I, y, 8))


def test_zerodivisor_candidate_fails(ex5):
    A, M, I = ex5
    (y,) = I
    checks = check_candidate({"A": ModuleRep.cyclic(A)}, I, y, 6, 4)
    assert not checks["A"].regular
    with pytest.raises(NoSuperficialFound) as err:
        superficial_search(A, M, I, np.random.default_rng(0), D=6, retries=2)
    assert err.value.last is not None and err.value.last.x


def test_a1_superficial_element(a1):
    A, M, I = a1
    rep = superficial_search(A, M, I, np.random.default_rng(42), D=8)
    assert rep.passed and rep.x
    assert set(rep.checks) == {"A", "M", "L"}
    assert len(rep.coefficients) == len(I)
    assert sum((g.scale(c) for g, c in zip(I, rep.coefficients)), A.S.zero()) == rep.x


def test_first_syzygy(a1):
    A, M, _ = a1
    L = first_syzygy(M)
    assert L.rank == 2 and not L.is_zero


# -- lci and ranks --


def test_lci_examples(ex5):
    A, _, I = ex5
    v = lci_check(A, I)
    assert v.status == "verified" and v.primes == [["y"]]
    S = ring("xy")
    assert lci_check(RingSpec(S, []), S.gens()).status == "verified"
    T = ring("xyu")
    x, y, u = T.gens()
    B = RingSpec(T, [u * u - x * y])
    assert lci_check(B, [x, u]).status == "undecidable-here"
    assert lci_check(B, [x, u], asserted=True).status == "user-asserted"


def test_lci_monomial_cases():
    S = ring("xyz")
    x, y, z = S.gens()
    # minimal primes (x) and (y, z): locally (x) and (y, z)
    assert lci_check(RingSpec(S, []), [x * y, x * z]).status == "verified"
    T = ring("abcd")
    a, b, c, d = T.gens()
    # locally at (a, b) the ideal is (a, b)
    assert lci_check(RingSpec(T, []), [a * b, a * c, b * c]).status == "verified"
    # locally at (a, b) the ideal is (a, b)^2: three minimal generators in height two
    assert lci_check(RingSpec(T, []), [a * a, a * b, b * b]).status == "refuted"


def test_monomial_ranks(ex5):
    A, M, _ = ex5
    assert monomial_ranks(A, M) == {("x",): 1, ("y",): 1}
    S = A.S
    x, _ = S.gens()
    assert monomial_ranks(A, ModuleRep.cyclic(A, [x])) == {("x",): 1, ("y",): 0}


def test_ideal_power_generators(a1):
    A, _, I = a1
    assert len(ideal_power(I, 3)) == 4
