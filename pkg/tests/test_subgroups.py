import numpy as np
import pytest

from psl2gen.errors import DomainError
from psl2gen.psl2core import group_context
from psl2gen.subgroups import (
    A4,
    A5,
    S4,
    Cyclic,
    Dihedral,
    Subgroup,
    catalog_key,
    closure,
    dickson_catalog,
    in_general_position,
    intersect,
    lattice_maximal_census,
    maximal_overgroups,
    maximal_overgroups_by_extension,
    maximal_subgroups,
    whole_group,
)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_maximal_subgroups_match_lattice_oracle(p):
    ctx = group_context(p)
    ours = {h.key for h in maximal_subgroups(p)}
    oracle = {h.key for h in lattice_maximal_census(ctx)}
    assert ours == oracle


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41])
def test_catalog_counts(p):
    ms = maximal_subgroups(p)  # the constructor checks counts per type
    assert len(ms) == dickson_catalog(p).total_maximal()
    for h in ms:
        assert catalog_key(h.iso_type, p) in dickson_catalog(p).maximal_types()


def test_catalog_congruences():
    assert dickson_catalog(7)["S4"].maximal and not dickson_catalog(7)["D_{p+1}"].maximal
    assert dickson_catalog(11)["A5"].maximal and not dickson_catalog(11)["D_{p-1}"].maximal
    assert not dickson_catalog(13)["S4"].exists and dickson_catalog(13)["A4"].maximal
    assert dickson_catalog(31)["S4"].maximal and dickson_catalog(31)["A5"].maximal
    assert dickson_catalog(5)["A4"].maximal


@pytest.mark.parametrize("p", [7, 13])
def test_subgroup_closure_invariants(p):
    ctx = group_context(p)
    rng = np.random.default_rng(p)
    for _ in range(20):
        gens = [ctx.element(int(i)) for i in rng.integers(0, ctx.order, 2)]
        h = closure(gens, ctx)
        assert ctx.order % h.order == 0
        els = h.elements()
        assert all(x * y in h and x.inverse() in h for x in els[:10] for y in els[:10])
        assert ctx.element(ctx.identity_index) in h


def test_classification_of_maximals_p13():
    types = sorted({h.iso_type for h in maximal_subgroups(13)})
    assert A4 in types and Dihedral(6) in types and Dihedral(7) in types
    assert S4 not in types and A5 not in types
    assert Cyclic(1) not in types


def test_overgroups_by_catalog_match_extension():
    ctx = group_context(7)
    rng = np.random.default_rng(1)
    for _ in range(6):
        h = closure([ctx.element(int(rng.integers(1, ctx.order)))], ctx)
        fast = sorted(maximal_overgroups(h), key=lambda s: s.key)
        slow = maximal_overgroups_by_extension(h)
        assert fast == slow


def test_whole_group_has_no_overgroups():
    with pytest.raises(DomainError):
        maximal_overgroups(whole_group(group_context(7)))


def test_general_position():
    ms = maximal_subgroups(7)
    h = ms[0]
    assert not in_general_position([h, h])
    assert in_general_position([h])
    k = next(m for m in ms if m != h)
    assert in_general_position([h, k]) == (intersect(h, k).order < min(h.order, k.order))


def test_lagrange_guard():
    ctx = group_context(7)
    with pytest.raises(AssertionError):
        Subgroup(ctx, np.arange(5))
