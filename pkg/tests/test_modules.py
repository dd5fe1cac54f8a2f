import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibertool.modules import (
    DomainError,
    ModuleRep,
    Submodule,
    depth_by_regular_sequence,
    ideal_power,
    krull_dim_ideal,
)
from fibertool.poly import RingSpec

from conftest import ring


@pytest.fixture
def node():
    S = ring("xy")
    x, y = S.gens()
    return S, x, y, RingSpec(S, [x * y])


def ideal_in(A, polys):
    return Submodule.ideal(list(polys) + list(A.quotient), A.S)


def test_self_intersection(node):
    S, x, y, A = node
    U = ideal_in(A, [x])
    assert U.intersect(U) == U


def test_disjoint_supports_meet_in_zero(node):
    S, x, y, A = node
    J = ideal_in(A, [])
    for n in range(1, 6):
        cap = ideal_in(A, [x]).intersect(ideal_in(A, [y**n]))
        assert cap == J
        # dense oracle: the same statement degree by degree
        for d in range(n + 3):
            assert cap.piece_dim(d) == J.piece_dim(d)


def test_containment_intersection(node):
    S, x, y, A = node
    for n in range(1, 5):
        assert ideal_in(A, [y]).intersect(ideal_in(A, [y**n])) == ideal_in(A, [y**n])


def test_colons(node):
    S, x, y, A = node
    J = ideal_in(A, [])
    assert J.colon(x.terms) == ideal_in(A, [y])
    assert J.colon(S.one().terms) == J
    assert J.colon({}) == Submodule.free(S, (0,))


def test_colon_contains_ideal_a1():
    S = ring("xyu")
    x, y, u = S.gens()
    A = RingSpec(S, [u * u - x * y])
    sq = ideal_in(A, ideal_power([x, u], 2))
    assert sq.colon(x.terms).contains_sub(ideal_in(A, [x, u]))


def test_intersection_and_colon_inclusions(node):
    S, x, y, A = node
    U, V = ideal_in(A, [x + y]), ideal_in(A, [x * x, y**3])
    cap = U.intersect(V)
    assert U.contains_sub(cap) and V.contains_sub(cap)
    col = V.colon(x.terms)
    assert V.contains_sub(col.scaled(x.terms))


def test_ideal_powers():
    S = ring("xyu")
    x, y, u = S.gens()
    assert ideal_power([x, u], 0) == [S.one()]
    assert set(ideal_power([x, u], 2)) == {x * x, x * u, u * u}
    with pytest.raises(DomainError):
        ideal_power([x], -1)


def test_minimal_generators(ex5, node):
    A, M, I = ex5
    assert ModuleRep.free(A, (0, 0)).num_generators() == 2
    assert M.num_generators() == 2 == len(M.minimal_generators())
    for n in range(1, 5):
        assert M.ideal_power_sub(I, n).num_generators() == 1


def test_hilbert_functions(node):
    S, x, y, A = node
    k_line = ModuleRep.cyclic(RingSpec(S, []), [x])
    assert k_line.hilbert(6).values == [1] * 7
    fat = ModuleRep.cyclic(RingSpec(S, []), [x * x, x * y, y * y])
    hd = fat.hilbert(5)
    assert hd.values == [1, 2, 0, 0, 0, 0] and hd.length == 3
    # y^n A / m y^n A has dimension one in each degree
    Y = ModuleRep.cyclic(A)
    for n in range(1, 5):
        P = Y.ideal_power_sub([y], n)
        Q = P.quotient(P.U.times_ideal([x, y]))
        assert Q.length == 1


def test_tor_like_subquotient_length(node):
    S, x, y, A = node
    Y = ModuleRep.cyclic(A)
    for n in range(1, 5):
        sub = Y.ideal_power_sub([y], n)
        q = sub.quotient(Y.U.times_ideal_power([y], n + 1))
        assert q.is_finite_length and q.length == 1


def test_resolutions():
    S = ring("xy")
    R = RingSpec(S, [])
    free = ModuleRep.cyclic(R)
    assert free.projdim == 0 and free.depth == 2 and free.is_cm
    k = ModuleRep.cyclic(R, S.gens())
    res = k.resolution()
    assert res.betti == [1, 2, 1] and res.is_complex()
    assert k.depth == 0 and k.dim == 0 and k.is_cm


def test_matrix_factorization_is_mcm(a1):
    A, M, I = a1
    res = M.resolution()
    assert res.length == 1 and res.betti == [2, 2]
    assert M.depth == 2 == A.dim
    assert M.is_mcm and not M.is_free()


def test_dimensions(node):
    S, x, y, A = node
    assert A.dim == 1
    T = ring("xyu")
    X, Y, U = T.gens()
    B = RingSpec(T, [U * U - X * Y])
    assert B.dim == 2
    assert krull_dim_ideal(B, [X, U]) == 1


def test_zero_module_conventions(node):
    S, x, y, A = node
    Z = ModuleRep.cyclic(A, [S.one()])
    assert Z.is_zero and Z.dim == -1 and Z.num_generators() == 0 and Z.length == 0
    assert Z.is_free() and Z.depth is None


def test_depth_oracle_agrees(ex5, a1):
    rng = np.random.default_rng(0)
    for A, M, _ in (ex5, a1):
        assert depth_by_regular_sequence(M, rng) == M.depth


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3))
def test_direct_sum_adds_hilbert_functions(a, b):
    S = ring("xy")
    R = RingSpec(S, [])
    M1 = ModuleRep.cyclic(R, [S.monomial(e) for e in a])
    M2 = ModuleRep.cyclic(R, [S.monomial(e) for e in b])
    total = ModuleRep.direct_sum([M1, M2]).hilbert(6).values
    assert total == [p + q for p, q in zip(M1.hilbert(6).values, M2.hilbert(6).values)]


def test_auslander_buchsbaum_on_small_modules():
    S = ring("xyz")
    x, y, z = S.gens()
    R = RingSpec(S, [])
    for gens in ([x], [x, y], [x * y, y * z], [x * x, y * y, z * z], [x * y, x * z, y * z]):
        M = ModuleRep.cyclic(R, gens)
        res = M.resolution()
        assert res.is_complex()
        assert res.length + M.depth == S.nvars
        assert M.depth == depth_by_regular_sequence(M, np.random.default_rng(1))
