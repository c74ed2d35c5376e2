from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgeham.monomial import ChainVector
from hodgeham.symgroup import (
    GroupAlgebraElement,
    Permutation,
    act_on_chain,
    antisymmetrizer,
    compose,
    eigenvalue,
    eulerian_idempotent,
    ga_mul,
    shuffle_sum,
    shuffles,
    sign,
    total_shuffle,
    transposition,
)
from oracles import descent_idempotent

ID2 = Permutation.identity(2)
SWAP = Permutation((2, 1))


def elem(n, coeffs):
    return GroupAlgebraElement(n, {Permutation(p): c for p, c in coeffs.items()})


def test_compose_examples():
    p = Permutation((3, 1, 2))
    assert compose(Permutation.identity(3), p) == p
    assert compose(SWAP, SWAP) == ID2
    t12, t23 = transposition(3, 1, 2), transposition(3, 2, 3)
    # pointwise: 1 -> t12(1) = 2, 2 -> t12(3) = 3, 3 -> t12(2) = 1
    assert compose(t12, t23) == Permutation((2, 3, 1))
    with pytest.raises(ValueError):
        compose(ID2, p)


def test_sign_examples():
    assert sign(Permutation.identity(4)) == 1
    assert sign(transposition(5, 2, 4)) == -1
    assert sign(Permutation((2, 3, 1))) == 1


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_small_products():
    x = elem(2, {(1, 2): 3, (2, 1): Fraction(1, 2)})
    assert ga_mul(GroupAlgebraElement.one(2), x) == x
    e22 = eulerian_idempotent(2, 2)
    assert ga_mul(e22, e22) == e22
    assert not ga_mul(eulerian_idempotent(2, 1), e22)
    with pytest.raises(ValueError):
        ga_mul(x, GroupAlgebraElement.one(3))


def test_shuffles():
    assert shuffle_sum(1, 1) == elem(2, {(1, 2): 1, (2, 1): -1})
    assert len(shuffles(2, 3)) == 10
    assert len(shuffle_sum(1, 2)) == 3


def test_total_shuffle_examples():
    assert not total_shuffle(1)
    assert total_shuffle(2) == elem(2, {(1, 2): 1, (2, 1): -1})
    a2 = antisymmetrizer(2)
    assert ga_mul(total_shuffle(2), a2) == a2.scale(2)


def test_idempotent_examples():
    assert eulerian_idempotent(1, 1) == GroupAlgebraElement.one(1)
    half = Fraction(1, 2)
    assert eulerian_idempotent(2, 2) == elem(2, {(1, 2): half, (2, 1): -half})
    assert eulerian_idempotent(2, 1) == elem(2, {(1, 2): half, (2, 1): half})
    assert eulerian_idempotent(3, 3) == antisymmetrizer(3)
    assert not eulerian_idempotent(3, 4)
    assert antisymmetrizer(1) == GroupAlgebraElement.one(1)


@pytest.mark.parametrize("n", range(1, 6))
def test_idempotents_match_descent_formula(n):
    for i in range(1, n + 1):
        expected = {Permutation(p): c for p, c in descent_idempotent(n, i).items()}
        assert eulerian_idempotent(n, i).coeffs == expected


@pytest.mark.parametrize("n", range(1, 7))
def test_idempotent_algebra(n):
    es = [eulerian_idempotent(n, i) for i in range(1, n + 1)]
    total = GroupAlgebraElement.zero(n)
    for i, e in enumerate(es, 1):
        total = total + e
        assert ga_mul(total_shuffle(n), e) == e.scale(eigenvalue(i))
    assert total == GroupAlgebraElement.one(n)
    assert es[-1] == antisymmetrizer(n)
    if n <= 5:
        for i, a in enumerate(es):
            for j, b in enumerate(es):
                assert ga_mul(a, b) == (a if i == j else GroupAlgebraElement.zero(n))


def test_action_examples():
    m, z, z2 = (0,), (1,), (2,)
    c = ChainVector(2, 1, terms={(m, z, z2): 1})
    assert act_on_chain(GroupAlgebraElement.one(2), c) == c
    same = ChainVector(2, 1, terms={(m, z, z): 1})
    assert not act_on_chain(antisymmetrizer(2), same)
    got = act_on_chain(eulerian_idempotent(2, 1), c)
    half = Fraction(1, 2)
    assert got == ChainVector(2, 1, terms={(m, z, z2): half, (m, z2, z): half})
    with pytest.raises(ValueError):
        act_on_chain(GroupAlgebraElement.one(3), c)


def test_action_moves_leg_j_to_slot_sigma_j():
    legs = ((0,), (1,), (2,), (3,))
    p = Permutation((2, 3, 1))
    out = act_on_chain(GroupAlgebraElement(3, {p: 1}), {legs: 1})
    # leg 1 -> slot 2, leg 2 -> slot 3, leg 3 -> slot 1
    assert out == {((0,), (3,), (1,), (2,)): 1}


perms3 = st.permutations([1, 2, 3]).map(Permutation)
coeff = st.fractions(min_value=-3, max_value=3, max_denominator=4)
elements3 = st.dictionaries(perms3, coeff, max_size=6).map(lambda d: GroupAlgebraElement(3, d))


@settings(max_examples=50, deadline=None)
@given(elements3, elements3)
def test_action_is_left_action(g, h):
    legs = ((0, 1), (1, 0), (2, 0), (0, 3))
    terms = {legs: Fraction(1), ((1, 1), (0, 1), (0, 1), (2, 0)): Fraction(-2)}
    assert act_on_chain(ga_mul(g, h), terms) == act_on_chain(g, act_on_chain(h, terms))


@settings(max_examples=50, deadline=None)
@given(elements3, elements3, elements3)
def test_product_associative_and_bilinear(a, b, c):
    assert ga_mul(ga_mul(a, b), c) == ga_mul(a, ga_mul(b, c))
    assert ga_mul(a, b + c) == ga_mul(a, b) + ga_mul(a, c)


@settings(max_examples=50, deadline=None)
@given(perms3, perms3)
def test_sign_is_multiplicative(p, q):
    assert sign(compose(p, q)) == sign(p) * sign(q)
    assert compose(p, p.inverse()) == Permutation.identity(3)


def test_antipode_reverses_products():
    a = eulerian_idempotent(3, 2)
    b = total_shuffle(3)
    assert ga_mul(a, b).antipode() == ga_mul(b.antipode(), a.antipode())
