import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from psl2gen.errors import CapacityError, DomainError, UsageError
from psl2gen.psl2core import (
    GroupContext,
    OrderClass,
    canonicalize,
    commutator,
    element_order,
    group_context,
    identity,
    multiply,
    trace_order_class,
)

SMALL = [5, 7, 11, 13]


def naive_elements(p):
    """Every determinant-1 matrix, one per +-pair."""
    seen = set()
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            neg = tuple(-x % p for x in (a, b, c, d))
            seen.add(min((a, b, c, d), neg))
    return seen


def element(p):
    ctx = group_context(p)
    return st.integers(0, ctx.order - 1).map(ctx.element)


@pytest.mark.parametrize("p", [5, 7])
def test_group_order_and_elements(p):
    ctx = group_context(p)
    assert ctx.order == p * (p * p - 1) // 2
    assert len(naive_elements(p)) == ctx.order
    # canonical form: first nonzero entry in [1, (p-1)/2]
    for i in range(ctx.order):
        g = ctx.element(i)
        first = next(x for x in g.entries if x)
        assert 1 <= first <= (p - 1) // 2
        assert ctx.index_of(g) == i


def test_canonicalize():
    g = canonicalize([[6, 0], [0, 6]], 7)
    assert g.is_identity()
    assert canonicalize((0, 6, 1, 0), 7) == canonicalize([[0, 1], [6, 0]], 7)
    with pytest.raises(DomainError):
        canonicalize([[1, 1], [1, 1]], 7)
    with pytest.raises(DomainError):
        canonicalize([1, 2, 3], 7)


def test_mixed_primes_rejected():
    with pytest.raises(UsageError):
        multiply(identity(5), identity(7))


@pytest.mark.parametrize("p", SMALL)
def test_multiplication_matches_matrices(p):
    ctx = group_context(p)
    rng = np.random.default_rng(p)
    for _ in range(200):
        x, y = (ctx.element(int(i)) for i in rng.integers(0, ctx.order, 2))
        m = (np.array(x.matrix()) @ np.array(y.matrix())) % p
        assert x * y == canonicalize(m, p)


@given(st.data())
def test_group_axioms(data):
    p = data.draw(st.sampled_from(SMALL))
    x, y, z = (data.draw(element(p)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert (x * x.inverse()).is_identity()
    assert x * identity(p) == x
    assert commutator(x, y) == x.inverse() * y.inverse() * x * y


@given(st.data())
def test_order_by_repeated_multiplication(data):
    p = data.draw(st.sampled_from(SMALL))
    g = data.draw(element(p))
    n, h = 1, g
    while not h.is_identity():
        h, n = h * g, n + 1
    assert element_order(g) == n
    assert group_context(p).element_orders[group_context(p).index_of(g)] == n


@given(st.data())
def test_trace_classifies_small_orders(data):
    p = data.draw(st.sampled_from(SMALL))
    g = data.draw(element(p))
    o = element_order(g)
    cls = trace_order_class(g)
    expected = {2: OrderClass.ORDER2, 3: OrderClass.ORDER3, 4: OrderClass.ORDER4}
    if o in expected:
        assert cls == expected[o]
    elif o in (1, p):
        assert cls == OrderClass.ORDER_P_OR_IDENTITY
    else:
        assert cls == OrderClass.OTHER


@pytest.mark.parametrize("p", [5, 7, 13])
def test_conjugacy_classes_against_naive_orbits(p):
    ctx = group_context(p)
    els = [ctx.element(i) for i in range(ctx.order)]
    seen, classes = set(), 0
    for g in els:
        if g in seen:
            continue
        classes += 1
        seen.update(h.inverse() * g * h for h in els)
    ids = ctx.conjugacy_class_ids
    assert len(np.unique(ids)) == classes == (p + 5) // 2
    # label is the smallest index in the class
    assert all(ids[i] <= i for i in range(ctx.order))


def test_outer_automorphism_is_not_inner():
    ctx = group_context(7)
    perm = ctx.outer_conj_perm()
    ids = ctx.conjugacy_class_ids
    # PGL(2,p) fuses the two classes of elements of order p
    assert any(ids[perm[i]] != ids[i] for i in range(ctx.order))


def test_capacity_bound():
    with pytest.raises(CapacityError):
        GroupContext(101).elements
