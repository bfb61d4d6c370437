import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psl2gen.errors import DomainError
from psl2gen.fpgroups.coxeter import (
    AFFINE_A3,
    CoxeterMatrix,
    coxeter_presentation,
    detect_coxeter_subset,
    four_cycle,
)
from psl2gen.fpgroups.presentation import Presentation, library, parse_presentation
from psl2gen.fpgroups.s4 import generated, relators_from_table
from psl2gen.fpgroups.todd_coxeter import group_order, todd_coxeter, verify_coset_table
from psl2gen.fpgroups.words import Word

STRATEGIES = ["hlt", "felsch"]


def dihedral(n):
    return parse_presentation(f"gens: a b\nrel: a^2\nrel: b^2\nrel: (a b)^{n}\n")


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize("name,order", [("S3", 6), ("A4", 12), ("S4", 24), ("A5", 60)])
def test_library_orders(name, order, strategy):
    res = todd_coxeter(library(name), strategy=strategy)
    assert res.finite and res.index == order


@settings(max_examples=25)
@given(st.integers(1, 60), st.sampled_from(STRATEGIES))
def test_dihedral_orders(n, strategy):
    assert group_order(dihedral(n), strategy=strategy) == 2 * n


@settings(max_examples=25)
@given(st.integers(1, 200), st.sampled_from(STRATEGIES))
def test_cyclic_orders(n, strategy):
    pres = Presentation(1, (Word(((0, 1),)) ** n,))
    assert group_order(pres, strategy=strategy) == n


def _perm_mul(a, b):
    return tuple(b[a[i]] for i in range(len(a)))


@settings(max_examples=20)
@given(st.lists(st.permutations(range(6)), min_size=2, max_size=2), st.sampled_from(STRATEGIES))
def test_table_relators_define_permutation_groups(gens, strategy):
    # oracle: closure size of a random subgroup of S6
    gens = [tuple(g) for g in gens]
    ident = tuple(range(6))
    order = len(generated(gens, _perm_mul, ident))
    rels = relators_from_table(order, _perm_mul, gens, ident, reduce=False)
    assert group_order(Presentation(2, tuple(rels)), strategy=strategy) == order


def test_subgroup_index():
    a, b = Word.of(1), Word.of(2)
    assert todd_coxeter(library("A5"), [a]).index == 30
    assert todd_coxeter(library("A5"), [b]).index == 20
    assert todd_coxeter(library("A5"), [a, b]).index == 1
    assert todd_coxeter(library("S4"), [a * b], strategy="felsch").index == 6


def test_trivial_and_free_cases():
    assert group_order(Presentation(2, (Word.of(1), Word.of(2)))) == 1
    res = todd_coxeter(Presentation(1, ()), max_cosets=100)
    assert not res.finite and res.max_cosets == 100


def test_permutation_check():
    res = todd_coxeter(library("A4"))
    perms = res.permutations()
    assert all(sorted(p) == list(range(12)) for p in perms)
    verify_coset_table(res, library("A4").relators)


def test_bad_arguments():
    with pytest.raises(DomainError):
        todd_coxeter(library("S3"), strategy="magic")
    with pytest.raises(DomainError):
        todd_coxeter(library("S3"), max_cosets=0)
    with pytest.raises(DomainError):
        todd_coxeter(library("S3"), [Word.of(3)])


def test_definition_cap():
    res = todd_coxeter(coxeter_presentation(AFFINE_A3), max_cosets=10**5, max_definitions=1000)
    assert not res.finite and res.reason == "definitions"


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_affine_a2_overflows(strategy):
    m = CoxeterMatrix.from_array([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    res = todd_coxeter(coxeter_presentation(m), max_cosets=20000, strategy=strategy)
    assert not res.finite


def test_coxeter_finite_types():
    # A3 = S4, B3 of order 48, H3 of order 120
    a3 = CoxeterMatrix.from_array([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
    b3 = CoxeterMatrix.from_array([[1, 4, 2], [4, 1, 3], [2, 3, 1]])
    h3 = CoxeterMatrix.from_array([[1, 5, 2], [5, 1, 3], [2, 3, 1]])
    assert [group_order(coxeter_presentation(m)) for m in (a3, b3, h3)] == [24, 48, 120]


def test_coxeter_matrix_validation():
    with pytest.raises(DomainError):
        CoxeterMatrix(((1, 2), (3, 1)))
    with pytest.raises(DomainError):
        CoxeterMatrix(((2, 2), (2, 1)))
    assert four_cycle([3, 3, 3, 3]) == AFFINE_A3
    assert AFFINE_A3.to_list()[0] == [2, 3, 2, 3]
    assert AFFINE_A3.relabel([1, 2, 3, 0]) == AFFINE_A3


@given(st.lists(st.sampled_from([2, 3, 4, 5, 6]), min_size=6, max_size=6), st.permutations(range(4)))
def test_detect_recovers_coxeter_matrix(vals, perm):
    it = iter(vals)
    a = np.ones((4, 4), dtype=int)
    for i, j in itertools.combinations(range(4), 2):
        a[i, j] = a[j, i] = next(it)
    m = CoxeterMatrix.from_array(a)
    pres = coxeter_presentation(m)
    # extra relators and conjugated forms do not hide the pattern
    rels = list(pres.relators) + [Word.of(1, 2, 3, 4) ** 7]
    rels = [w.rename(perm) for w in rels]
    assert detect_coxeter_subset(rels, 4) == m.relabel(perm)


def test_detect_needs_every_pair():
    rels = [Word.of(i, i) for i in (1, 2, 3)] + [Word.of(1, 2) ** 2, Word.of(2, 3) ** 3]
    assert detect_coxeter_subset(rels, 3) is None
    assert detect_coxeter_subset(rels + [Word.of(1, 3) ** 2], 3) is not None
