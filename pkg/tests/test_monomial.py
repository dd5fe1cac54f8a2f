import pytest
from hypothesis import given, strategies as st

from fibertool.monomial import ArityMismatch, Layout, TermOrder, mono_cmp

exps3 = st.tuples(*[st.integers(0, 6)] * 3)


def test_reflexive():
    assert mono_cmp((1, 0), (1, 0), TermOrder.grevlex(2)) == 0


def test_grevlex_degree_two():
    assert mono_cmp((2, 0), (1, 1), TermOrder.grevlex(2)) > 0
    # x*z < y^2 in grevlex on three variables
    assert mono_cmp((1, 0, 1), (0, 2, 0), TermOrder.grevlex(3)) < 0


def test_lex_first_exponent_dominates():
    assert mono_cmp((1, 0), (0, 3), TermOrder.lex(2)) > 0


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        Layout(2).pack((1, 2, 3))


@given(exps3, st.integers(0, 5))
def test_pack_round_trip(e, pos):
    lay = Layout(3)
    assert lay.unpack(lay.pack(e, pos)) == (pos, e)


@given(exps3, exps3)
def test_divisibility_and_product(a, b):
    lay = Layout(3)
    P, Q = lay.pack(a), lay.pack(b)
    assert lay.divides(P, P + Q)
    assert lay.exps(P + Q - Q) == a
    assert lay.divides(P, Q) == all(x <= y for x, y in zip(a, b))
    assert lay.exps(lay.lcm(P, Q)) == tuple(map(max, a, b))


@pytest.mark.parametrize("order", [TermOrder.grevlex(3), TermOrder.lex(3), TermOrder.grevlex(3, (1, 2, 3)),
                                   TermOrder.elimination([2], 3)])
@given(a=exps3, b=exps3, c=exps3)
def test_total_multiplicative_global(order, a, b, c):
    ab, ba = mono_cmp(a, b, order), mono_cmp(b, a, order)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    ac = tuple(x + y for x, y in zip(a, c))
    bc = tuple(x + y for x, y in zip(b, c))
    assert mono_cmp(ac, bc, order) == ab
    assert mono_cmp((0, 0, 0), a, order) <= 0
    if ab < 0 and mono_cmp(b, c, order) < 0:
        assert mono_cmp(a, c, order) < 0


@given(exps3)
def test_weighted_degree(e):
    lay = Layout(3)
    assert lay.degree(lay.pack(e), (1, 2, 3)) == e[0] + 2 * e[1] + 3 * e[2]
