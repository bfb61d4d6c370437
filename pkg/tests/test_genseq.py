import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psl2gen.errors import CapacityError, DomainError
from psl2gen.genseq import (
    GenSequence,
    brute_force_sets,
    compute_iota,
    compute_m,
    corresponding_maximal_families,
    count_automorphism_classes,
    count_conjugacy_classes,
    element_orders_of_group,
    enumerate_irredundant_sets,
    exhaustive_sets,
    generates,
    is_irredundant,
    replacement_census,
    replacement_failures_bitset,
    replacement_failures_exhaustive,
    sequence_satisfies_replacement,
)
from psl2gen.psl2core import group_context
from psl2gen.subgroups import maximal_subgroups


@pytest.fixture(scope="module")
def p7():
    return enumerate_irredundant_sets(7, 4, (2, 3))


def elements(p, idx):
    ctx = group_context(p)
    return [ctx.element(int(i)) for i in idx]


def test_p7_census(p7):
    assert (p7.count_sets, p7.conjugacy_classes, p7.automorphism_classes) == (252, 2, 2)
    assert p7.element_orders == [2]
    assert p7.maximal_families == [["S4", "S4", "S4", "S4"]]
    # orbit sizes sum to the count (168 + 84)
    assert sorted(p7.orbit_sizes) == [84, 168]


def test_p7_sets_by_direct_closure(p7):
    for s in p7.sets[::7]:
        seq = elements(7, s)
        assert generates(seq) and is_irredundant(seq)
        for perm in itertools.permutations(seq):
            assert is_irredundant(list(perm))


@pytest.mark.parametrize("p", [5, 7])
def test_pruned_matches_exhaustive_unfiltered(p):
    rep = enumerate_irredundant_sets(p, 4, None)
    assert rep.sets == exhaustive_sets(p, 4, None) == brute_force_sets(p, 4, None)


def test_length3_pruned_matches_exhaustive():
    rep = enumerate_irredundant_sets(7, 3, None)
    assert rep.sets == exhaustive_sets(7, 3, None)
    for s in rep.sets[::50]:
        seq = elements(7, s)
        assert generates(seq) and is_irredundant(seq)


def test_class_counts_by_naive_conjugation(p7):
    ctx = group_context(7)
    els = [ctx.element(i) for i in range(ctx.order)]
    sets = {frozenset(s) for s in p7.sets}
    seen, classes = set(), 0
    for s in sorted(sets, key=sorted):
        if s in seen:
            continue
        classes += 1
        for h in els:
            hi = h.inverse()
            seen.add(frozenset(ctx.index_of(hi * ctx.element(i) * h) for i in s))
    assert classes == 2 == count_conjugacy_classes(p7.sets, ctx)
    assert count_automorphism_classes(p7.sets, ctx) == 2


def test_families_p7_are_four_s4(p7):
    fams = corresponding_maximal_families(elements(7, p7.sets[0]))
    assert fams and all(f.type_names == ("S4",) * 4 for f in fams)


def test_families_p11_never_contain_frobenius():
    rep = enumerate_irredundant_sets(11, 4, (2, 3), keep_sets=False)
    allowed = [["A5", "A5", "A5", "A5"], ["A5", "A5", "A5", "D12"], ["A5", "A5", "D12", "D12"]]
    assert rep.maximal_families == allowed


@pytest.mark.parametrize("p,expected", [(7, 4), (11, 4), (13, 3), (17, 3)])
def test_m_without_shortcut(p, expected):
    assert compute_m(p, shortcut=False) == expected


def test_m_shortcut_agrees():
    assert compute_m(23) == compute_m(23, shortcut=False) == 3


@pytest.mark.parametrize(
    "p,n,expected",
    [
        (7, 1, set()),
        (7, 2, {2, 3, 4, 7}),
        (11, 2, {2, 3, 5, 6, 11}),
        (7, 3, {2, 3, 4}),
        (11, 3, {2, 3, 5}),
        (13, 3, {2, 3, 6}),
        (7, 4, {2}),
        (11, 4, {2, 3}),
        (13, 4, set()),
    ],
)
def test_iota(p, n, expected):
    assert compute_iota(p, n) == expected


def test_iota2_is_all_nontrivial_orders():
    for p in (5, 7, 11, 13):
        assert compute_iota(p, 2) == element_orders_of_group(p) - {1}


def test_replacement_bitset_matches_exhaustive(p7):
    ms = maximal_subgroups(7)
    for s in p7.sets[::40]:
        fast = replacement_failures_bitset(ms, list(s))
        slow = replacement_failures_exhaustive(elements(7, s))
        assert [group_context(7).element(int(i)) for i in fast] == slow
        assert bool(sequence_satisfies_replacement(elements(7, s))) == (len(slow) == 0)


def test_replacement_census_p7():
    c = replacement_census(7, all_sets=True)
    assert c.checked == 252 and c.holds


def test_budget_guard():
    with pytest.raises(CapacityError):
        enumerate_irredundant_sets(31, 4, None, budget=1000)


def test_bad_inputs():
    with pytest.raises(DomainError):
        enumerate_irredundant_sets(7, 5)
    with pytest.raises(DomainError):
        GenSequence([])
    with pytest.raises(DomainError):
        g = group_context(7).element(1)
        corresponding_maximal_families([g, g * g])


@settings(max_examples=40)
@given(st.data())
def test_irredundance_is_order_independent(data):
    ctx = group_context(7)
    idx = data.draw(st.lists(st.integers(1, ctx.order - 1), min_size=2, max_size=4, unique=True))
    seq = elements(7, idx)
    perm = data.draw(st.permutations(seq))
    assert is_irredundant(seq) == is_irredundant(perm)
    assert generates(seq) == generates(perm)


@settings(max_examples=30)
@given(st.data())
def test_enumerated_sets_are_closed_under_conjugation(data):
    rep = enumerate_irredundant_sets(7, 4, (2, 3))
    ctx = group_context(7)
    s = data.draw(st.sampled_from(rep.sets))
    h = ctx.element(data.draw(st.integers(0, ctx.order - 1)))
    img = tuple(sorted(ctx.index_of(h.inverse() * ctx.element(i) * h) for i in s))
    assert img in set(rep.sets)
