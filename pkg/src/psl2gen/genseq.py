"""Irredundant generating sequences of PSL(2,p).

Two routes decide generation.  The direct route takes closures
(``generates``, ``is_irredundant``, ``replacement_holds_for``); the search
route reads membership in maximal subgroups off packed bitsets (see
``_kernels``) and is what makes the length-4 census feasible at p = 31.
Tests run both routes against each other.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError
from .fieldcore import as_prime, divisors
from .psl2core import GroupContext, GroupElement, group_context
from .subgroups import (
    MaximalSubgroups,
    Subgroup,
    closure,
    closure_indices,
    in_general_position,
    intersect_all,
    maximal_overgroups,
    maximal_subgroups,
)

DEFAULT_BUDGET = 10**11


# ------------------------------------------------------------------ sequences


class GenSequence:
    def __init__(self, elements: Sequence[GroupElement]):
        elements = list(elements)
        if not elements:
            raise DomainError("empty sequence")
        ps = {g.p for g in elements}
        if len(ps) != 1:
            raise DomainError("elements from different groups")
        self.elements = elements
        self.ctx: GroupContext = group_context(ps.pop())

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @cached_property
    def indices(self) -> list[int]:
        return [self.ctx.index_of(g) for g in self.elements]

    @cached_property
    def generated(self) -> Subgroup:
        return closure(self.elements, self.ctx)

    @cached_property
    def hole_subgroups(self) -> list[Subgroup]:
        holes = []
        for i in range(len(self.elements)):
            rest = self.elements[:i] + self.elements[i + 1:]
            if rest:
                holes.append(closure(rest, self.ctx))
            else:
                holes.append(Subgroup(self.ctx, np.array([self.ctx.identity_index])))
        return holes

    def replaced(self, i: int, g: GroupElement) -> GenSequence:
        return GenSequence(self.elements[:i] + [g] + self.elements[i + 1:])

    def __repr__(self):
        return f"GenSequence({self.elements!r})"


def _as_seq(seq) -> GenSequence:
    return seq if isinstance(seq, GenSequence) else GenSequence(seq)


def generates(seq) -> bool:
    seq = _as_seq(seq)
    return seq.generated.order == seq.ctx.order


def is_irredundant(seq) -> bool:
    seq = _as_seq(seq)
    whole = seq.generated
    return all(h.order < whole.order for h in seq.hole_subgroups)


@dataclass(frozen=True)
class MaximalFamily:
    subgroups: tuple
    types: tuple

    @property
    def type_names(self) -> tuple[str, ...]:
        return tuple(sorted(t.name for t in self.types))


def corresponding_maximal_families(seq) -> list[MaximalFamily]:
    seq = _as_seq(seq)
    if not (generates(seq) and is_irredundant(seq)):
        raise DomainError("sequence is not an irredundant generating sequence")
    choices = []
    for g, h in zip(seq.elements, seq.hole_subgroups):
        choices.append([m for m in maximal_overgroups(h) if g not in m])
    families = []
    for combo in itertools.product(*choices):
        if not in_general_position(list(combo)):
            raise AssertionError("corresponding family not in general position")
        families.append(MaximalFamily(tuple(combo), tuple(m.iso_type for m in combo)))
    return families


# ------------------------------------------------------------------ replacement


@dataclass(frozen=True)
class ReplacementVerdict:
    holds: bool
    witness: GroupElement | None = None
    fast_path: bool = False

    def __bool__(self):
        return self.holds


def replacement_holds_for(seq, g: GroupElement) -> int | None:
    """Smallest position at which ``g`` can replace an entry and keep
    generation, or None."""
    seq = _as_seq(seq)
    if g.is_identity():
        raise DomainError("the identity cannot be a replacement candidate")
    for i in range(len(seq)):
        if generates(seq.replaced(i, g)):
            return i
    return None


def sequence_satisfies_replacement(seq) -> ReplacementVerdict:
    seq = _as_seq(seq)
    families = corresponding_maximal_families(seq)
    ctx = seq.ctx
    suspects: set[int] = set()
    for fam in families:
        inter = intersect_all(list(fam.subgroups))
        suspects.update(int(i) for i in inter.indices if i != ctx.identity_index)
    if not suspects:
        return ReplacementVerdict(True, None, fast_path=True)
    for i in sorted(suspects):
        g = ctx.element(i)
        if replacement_holds_for(seq, g) is None:
            return ReplacementVerdict(False, g)
    return ReplacementVerdict(True, None)


def replacement_failures_exhaustive(seq) -> list[GroupElement]:
    """Oracle: every nonidentity g that cannot replace any entry."""
    seq = _as_seq(seq)
    ctx = seq.ctx
    return [
        ctx.element(i)
        for i in range(ctx.order)
        if i != ctx.identity_index and replacement_holds_for(seq, ctx.element(i)) is None
    ]


def replacement_failures_bitset(ms: MaximalSubgroups, idx: Sequence[int]) -> np.ndarray:
    """Indices g (nonidentity) that cannot replace any entry of the
    generating set ``idx``, read off the maximal-subgroup incidence."""
    inc = ms.incidence
    fails = np.ones(ms.ctx.order, dtype=bool)
    for i in range(len(idx)):
        rest = [idx[j] for j in range(len(idx)) if j != i]
        common = inc[rest].all(axis=0)
        fails &= (inc[:, common]).any(axis=1)
    fails[ms.ctx.identity_index] = False
    return np.flatnonzero(fails)


# ------------------------------------------------------------------ orbits of sets


class SetOrbits:
    """Orbits of element-index sets under conjugation by G (and optionally
    the outer automorphism, i.e. PGL(2,p))."""

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self.perms = [ctx.conj_perm(g) for g in ctx.generators]
        self.outer = ctx.outer_conj_perm()
        self.orbit_of: dict[tuple, int] = {}
        self.orbits: list[list[tuple]] = []

    def add(self, s: Iterable[int]) -> int:
        s = tuple(sorted(int(x) for x in s))
        if s in self.orbit_of:
            return self.orbit_of[s]
        oid = len(self.orbits)
        members = [s]
        self.orbit_of[s] = oid
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                arr = np.asarray(x)
                for perm in self.perms:
                    y = tuple(sorted(perm[arr].tolist()))
                    if y not in self.orbit_of:
                        self.orbit_of[y] = oid
                        members.append(y)
                        nxt.append(y)
            frontier = nxt
        self.orbits.append(members)
        return oid

    def automorphism_classes(self, oids: Iterable[int] | None = None) -> int:
        oids = sorted(set(range(len(self.orbits)) if oids is None else oids))
        parent = {o: o for o in oids}

        def find(o):
            while parent[o] != o:
                parent[o] = parent[parent[o]]
                o = parent[o]
            return o

        for o in oids:
            rep = np.asarray(self.orbits[o][0])
            img = self.add(self.outer[rep])
            parent.setdefault(img, img)
            a, b = find(o), find(img)
            if a != b:
                parent[max(a, b)] = min(a, b)
        return len({find(o) for o in oids})


def _to_index_sets(ctx, sets) -> list[tuple]:
    out = []
    for s in sets:
        s = list(s)
        out.append(tuple(sorted(ctx.index_of(g) if isinstance(g, GroupElement) else int(g) for g in s)))
    return out


def _context_of_sets(sets, ctx):
    if ctx is not None:
        return ctx
    for s in sets:
        for g in s:
            if isinstance(g, GroupElement):
                return group_context(g.p)
    raise DomainError("cannot infer the group from index sets; pass ctx")


def count_conjugacy_classes(sets, ctx: GroupContext | None = None) -> int:
    sets = list(sets)
    if not sets:
        return 0
    ctx = _context_of_sets(sets, ctx)
    orb = SetOrbits(ctx)
    return len({orb.add(s) for s in _to_index_sets(ctx, sets)})


def count_automorphism_classes(sets, ctx: GroupContext | None = None) -> int:
    sets = list(sets)
    if not sets:
        return 0
    ctx = _context_of_sets(sets, ctx)
    orb = SetOrbits(ctx)
    oids = {orb.add(s) for s in _to_index_sets(ctx, sets)}
    return orb.automorphism_classes(oids)


# ------------------------------------------------------------------ enumeration


@dataclass
class EnumerationReport:
    p: int
    length: int
    count_sets: int
    conjugacy_classes: int
    automorphism_classes: int
    element_orders: list[int]
    maximal_families: list[list[str]]
    orbit_sizes: list[int] = field(default_factory=list, repr=False)
    sets: list[tuple] = field(default_factory=list, repr=False)
    order_filter: list[int] | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "length": self.length,
            "count_sets": self.count_sets,
            "conjugacy_classes": self.conjugacy_classes,
            "automorphism_classes": self.automorphism_classes,
            "element_orders": list(self.element_orders),
            "maximal_families": [list(f) for f in self.maximal_families],
        }


def candidate_indices(ctx: GroupContext, order_filter=None) -> np.ndarray:
    orders = ctx.element_orders
    if order_filter is None:
        mask = orders != 1
    else:
        mask = np.isin(orders, sorted(order_filter)) & (orders != 1)
    return np.flatnonzero(mask)


def estimate_cost(ctx: GroupContext, length: int, order_filter=None) -> float:
    cand = candidate_indices(ctx, order_filter)
    reps = len(np.unique(ctx.conjugacy_class_ids[cand]))
    m = len(cand)
    return float(reps) * m ** (length - 1) / max(1, np.prod(range(1, length)))


def find_sets_through(ms: MaximalSubgroups, rep: int, cand: np.ndarray, length: int) -> list[tuple]:
    """Irredundant generating sets of the given length containing ``rep``,
    with the other entries drawn from ``cand``."""
    P = ms.packed
    cand = np.asarray(cand, dtype=np.int64)
    if length == 2:
        hit = ~((P[rep] & P[cand]) != 0).any(axis=1)
        return [(rep, int(c)) for c in cand[hit]]
    if length == 3:
        rows = _kernels.find_triples(P, rep, cand)
        return [(rep, int(cand[i]), int(cand[j])) for i, j in rows]
    if length == 4:
        rows = _kernels.find_quads(P, rep, cand)
        return [(rep, int(cand[i]), int(cand[j]), int(cand[k])) for i, j, k in rows]
    raise DomainError(f"length must be 2, 3 or 4, got {length}")


def families_of_set(ms: MaximalSubgroups, idx: Sequence[int]) -> list[tuple[str, ...]]:
    """Type multisets of every maximal family corresponding to the set."""
    inc = ms.incidence
    names = ms.type_names
    choices = []
    for i in range(len(idx)):
        rest = [idx[j] for j in range(len(idx)) if j != i]
        ok = inc[rest].all(axis=0) & ~inc[idx[i]]
        choices.append(np.flatnonzero(ok))
    fams = set()
    for combo in itertools.product(*choices):
        fams.add(tuple(sorted(names[j] for j in combo)))
    return sorted(fams)


def enumerate_irredundant_sets(
    p,
    length: int,
    order_filter=(2, 3),
    budget: float = DEFAULT_BUDGET,
    keep_sets: bool = True,
) -> EnumerationReport:
    """Census of unordered irredundant generating sets of PSL(2,p).

    Sets are searched with their first entry fixed to one representative
    per conjugacy class (sets are attributed to the smallest class they
    meet); full orbits are then recovered by conjugation.
    """
    p = as_prime(p).p
    if length not in (2, 3, 4):
        raise DomainError(f"length must be 2, 3 or 4, got {length}")
    ctx = group_context(p)
    est = estimate_cost(ctx, length, order_filter)
    if est > budget:
        raise CapacityError(
            f"estimated {est:.3g} candidate checks exceeds the budget {budget:.3g}; "
            "restrict the order filter (e.g. {2,3}) or raise --budget",
            budget=budget,
        )
    ms = maximal_subgroups(p)
    cand = candidate_indices(ctx, order_filter)
    cls = ctx.conjugacy_class_ids
    orb = SetOrbits(ctx)
    oids: list[int] = []
    for rep in sorted(set(cls[cand].tolist())):
        pool = cand[(cls[cand] >= rep) & (cand != rep)]
        for s in find_sets_through(ms, rep, pool, length):
            oid = orb.add(s)
            if oid not in oids:
                oids.append(oid)
    orbit_sizes = [len(orb.orbits[o]) for o in oids]
    orders = ctx.element_orders
    elem_orders: set[int] = set()
    fams: set[tuple] = set()
    for o in oids:
        rep_set = orb.orbits[o][0]
        elem_orders.update(int(orders[i]) for i in rep_set)
        fams.update(families_of_set(ms, rep_set))
    all_sets = sorted(s for o in oids for s in orb.orbits[o]) if keep_sets else []
    return EnumerationReport(
        p=p,
        length=length,
        count_sets=sum(orbit_sizes),
        conjugacy_classes=len(oids),
        automorphism_classes=orb.automorphism_classes(oids) if oids else 0,
        element_orders=sorted(elem_orders),
        maximal_families=[list(f) for f in sorted(fams)],
        orbit_sizes=orbit_sizes,
        sets=all_sets,
        order_filter=None if order_filter is None else sorted(order_filter),
    )


def brute_force_sets(p, length: int = 4, order_filter=None) -> list[tuple]:
    """Oracle: every 4-subset of the candidate elements checked directly,
    no conjugacy reduction and no partial-set pruning."""
    if length != 4:
        raise DomainError("the brute-force oracle covers length 4 only")
    ctx = group_context(as_prime(p).p)
    ms = maximal_subgroups(ctx.p)
    cand = candidate_indices(ctx, order_filter)
    rows = _kernels.naive_quads(ms.packed, cand)
    return sorted(tuple(int(cand[i]) for i in r) for r in rows)


def exhaustive_sets(p, length: int = 4, order_filter=None) -> list[tuple]:
    """Oracle: every set found with every element tried as first entry
    (no conjugacy reduction, no order filter by default)."""
    ctx = group_context(as_prime(p).p)
    ms = maximal_subgroups(ctx.p)
    cand = candidate_indices(ctx, order_filter)
    out = []
    for i, r in enumerate(cand):
        out.extend(find_sets_through(ms, int(r), cand[i + 1:], length))
    return sorted(out)


# ------------------------------------------------------------------ m(G) and iota


@dataclass(frozen=True)
class MResult:
    p: int
    m: int
    method: str  # "search" or "shortcut"
    length4_sets: int | None = None

    def __int__(self):
        return self.m


def m_with_certificate(p, shortcut: bool = True, order_filter=(2, 3), budget=DEFAULT_BUDGET) -> MResult:
    P = as_prime(p)
    if shortcut and not (P.plus_minus_one(8) or P.plus_minus_one(10)):
        return MResult(P.p, 3, "shortcut")
    rep = enumerate_irredundant_sets(P.p, 4, order_filter, budget=budget, keep_sets=False)
    if rep.count_sets:
        return MResult(P.p, 4, "search", rep.count_sets)
    if not _has_length3(P.p):
        raise AssertionError(f"no length-3 irredundant generating set found for p={P.p}")
    return MResult(P.p, 3, "search", 0)


def compute_m(p, shortcut: bool = True, order_filter=(2, 3), budget=DEFAULT_BUDGET) -> int:
    return m_with_certificate(p, shortcut, order_filter, budget).m


def _has_length3(p) -> bool:
    ctx = group_context(p)
    ms = maximal_subgroups(p)
    invs = np.flatnonzero(ctx.element_orders == 2)
    return _kernels.find_any_triple(ms.packed, int(invs[0]), invs[1:]) is not None


@dataclass
class IotaResult:
    p: int
    n: int
    orders: list[int]
    certificates: dict = field(default_factory=dict)  # order -> how it was decided


def theory_excluded_from_iota3(p: int, order: int) -> bool:
    """Orders that lie in a unique maximal subgroup: p itself, and orders
    > 5 dividing p+1."""
    return order == p or (order > 5 and (p + 1) % order == 0)


def iota_with_certificates(p, n: int, exhaustive_bound: int = 31, budget=DEFAULT_BUDGET) -> IotaResult:
    p = as_prime(p).p
    if n not in (1, 2, 3, 4):
        raise DomainError("n must be 1..4")
    if n == 1:
        return IotaResult(p, 1, [], {})
    ctx = group_context(p)
    orders = ctx.element_orders
    cls = ctx.conjugacy_class_ids
    reps = [int(r) for r in np.unique(cls) if orders[r] != 1]
    certs: dict[int, str] = {}
    found: set[int] = set()
    if n == 4:
        filt = None if p <= 13 else (2, 3)
        rep = enumerate_irredundant_sets(p, 4, filt, budget=budget, keep_sets=False)
        found = set(rep.element_orders)
        certs = {o: "length-4 census" for o in found}
        return IotaResult(p, 4, sorted(found), certs)
    ms = maximal_subgroups(p)
    P = ms.packed
    everything = np.flatnonzero(orders != 1)
    for r in reps:
        o = int(orders[r])
        if o in found:
            continue
        if n == 2:
            if not ((P[r] & P[everything]) != 0).any(axis=1).all():
                found.add(o)
                certs[o] = "pair search"
            continue
        if p > exhaustive_bound and theory_excluded_from_iota3(p, o):
            certs.setdefault(o, "excluded: unique maximal overgroup")
            continue
        if _kernels.find_any_triple(P, r, everything[everything != r]) is not None:
            found.add(o)
            certs[o] = "triple search"
        else:
            certs.setdefault(o, "excluded: exhaustive triple search")
    return IotaResult(p, n, sorted(found), certs)


def compute_iota(p, n: int, **kw) -> set[int]:
    return set(iota_with_certificates(p, n, **kw).orders)


def element_orders_of_group(p) -> set[int]:
    p = as_prime(p).p
    out = {1, p}
    for d in divisors((p - 1) // 2) + divisors((p + 1) // 2):
        out.add(d)
    return out


# ------------------------------------------------------------------ replacement census


@dataclass
class ReplacementCensus:
    p: int
    length: int
    scope: str  # "all sets" or "class representatives"
    checked: int
    failures: list[tuple] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "length": self.length,
            "scope": self.scope,
            "checked": self.checked,
            "holds": self.holds,
            "failures": [list(f) for f in self.failures],
        }


def replacement_census(p, length: int = 4, all_sets: bool = False, order_filter=(2, 3), budget=DEFAULT_BUDGET):
    """Check the replacement property on every length-``length`` irredundant
    generating set (``all_sets``) or on one set per conjugacy class.

    Replacement is conjugation invariant, so the two scopes give the same
    verdict; the full scope exists to confirm that directly."""
    p = as_prime(p).p
    ctx = group_context(p)
    ms = maximal_subgroups(p)
    cand = candidate_indices(ctx, order_filter)
    cls = ctx.conjugacy_class_ids
    orb = SetOrbits(ctx)
    est = estimate_cost(ctx, length, order_filter)
    if est > budget:
        raise CapacityError(f"estimated {est:.3g} checks exceeds the budget {budget:.3g}", budget=budget)
    reps: list[tuple] = []
    for rep in sorted(set(cls[cand].tolist())):
        pool = cand[(cls[cand] >= rep) & (cand != rep)]
        for s in find_sets_through(ms, rep, pool, length):
            before = len(orb.orbits)
            oid = orb.add(s)
            if oid == before:
                reps.append(orb.orbits[oid][0])
    targets = [s for o in range(len(orb.orbits)) for s in orb.orbits[o]] if all_sets else reps
    failures = []
    for s in targets:
        bad = replacement_failures_bitset(ms, list(s))
        if len(bad):
            failures.append(tuple(s))
    return ReplacementCensus(p, length, "all sets" if all_sets else "class representatives", len(targets), failures)
