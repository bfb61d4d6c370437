"""Subgroups of PSL(2,p): closure, Dickson-type recognition, maximal subgroups.

Subgroups are stored as sorted arrays of dense element indices of a
``GroupContext``; equality of subgroups is equality of those arrays.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError, UsageError
from .fieldcore import as_prime, primitive_root
from .psl2core import GroupContext, GroupElement, canonicalize, group_context, mul_array


# ------------------------------------------------------------------ types


@dataclass(frozen=True, order=True)
class DicksonType:
    tag: str
    n: int = 0
    k: int = 0

    @property
    def order(self) -> int | None:
        return {
            "Cyclic": self.n,
            "Dihedral": 2 * self.n,
            "Frobenius": self.n * self.k,
            "A4": 12,
            "S4": 24,
            "A5": 60,
            "ElemAbelian2sq": 4,
            "Full": self.n,
            "Other": self.n,
        }[self.tag]

    @property
    def name(self) -> str:
        if self.tag == "Cyclic":
            return f"C{self.n}"
        if self.tag == "Dihedral":
            return f"D{2 * self.n}"
        if self.tag == "Frobenius":
            return f"F{self.n * self.k}"
        if self.tag == "ElemAbelian2sq":
            return "V4"
        if self.tag == "Full":
            return "G"
        if self.tag == "Other":
            return f"Other{self.n}"
        return self.tag

    def __str__(self):
        return self.name


def Cyclic(n):
    return DicksonType("Cyclic", n)


def Dihedral(n):
    return DicksonType("Dihedral", n)


def Frobenius(p, k):
    return DicksonType("Frobenius", p, k)


A4 = DicksonType("A4")
S4 = DicksonType("S4")
A5 = DicksonType("A5")
V4 = DicksonType("ElemAbelian2sq")


class Subgroup:
    """A subgroup given by its member indices in ``ctx``."""

    def __init__(self, ctx: GroupContext, members: np.ndarray, generators: Sequence[GroupElement] = ()):
        self.ctx = ctx
        self.indices = np.unique(np.asarray(members, dtype=np.int64))
        self.indices.setflags(write=False)
        self.generators = list(generators)
        self.order = len(self.indices)
        if ctx.order % self.order:
            raise AssertionError(f"Lagrange violated: {self.order} does not divide {ctx.order}")

    @cached_property
    def members(self) -> np.ndarray:
        """Dense membership bitset over the element index space."""
        m = np.zeros(self.ctx.order, dtype=bool)
        m[self.indices] = True
        m.setflags(write=False)
        return m

    @cached_property
    def key(self) -> bytes:
        return self.indices.tobytes()

    @cached_property
    def iso_type(self) -> DicksonType:
        return classify_subgroup(self)

    def __contains__(self, g: GroupElement) -> bool:
        return bool(self.members[self.ctx.index_of(g)])

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.ctx.p == other.ctx.p and self.key == other.key

    def __hash__(self):
        return hash((self.ctx.p, self.key))

    def __le__(self, other: Subgroup) -> bool:
        return bool(other.members[self.indices].all())

    def __lt__(self, other: Subgroup) -> bool:
        return self.order < other.order and self <= other

    def elements(self) -> list[GroupElement]:
        return [self.ctx.element(int(i)) for i in self.indices]

    def is_proper(self) -> bool:
        return self.order < self.ctx.order

    def __repr__(self):
        return f"Subgroup(p={self.ctx.p}, order={self.order}, type={self.iso_type.name})"


# ------------------------------------------------------------------ closure


def _context_for(gens) -> GroupContext:
    ps = {g.p for g in gens}
    if len(ps) != 1:
        raise UsageError("generators from different groups")
    return group_context(ps.pop())


def closure_indices(ctx: GroupContext, gen_idx: Sequence[int]) -> np.ndarray:
    """Member indices of the subgroup generated by the given element indices.

    Breadth-first on the right Cayley graph; each frontier is multiplied by
    every generator in one vectorized pass.
    """
    els, p = ctx.elements, ctx.p
    seen = np.zeros(ctx.order, dtype=bool)
    start = ctx.identity_index
    seen[start] = True
    found = [np.array([start])]
    frontier = np.array([start])
    gmats = els[np.asarray(gen_idx, dtype=np.int64)]
    while len(frontier):
        xs = els[frontier]
        nxt = ctx.indices_of(mul_array(xs[:, None, :], gmats[None, :, :], p)).ravel()
        nxt = np.unique(nxt)
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        found.append(nxt)
        frontier = nxt
    return np.concatenate(found)


def closure(gens: Sequence[GroupElement], ctx: GroupContext | None = None) -> Subgroup:
    gens = list(gens)
    if not gens:
        raise DomainError("closure needs at least one generator")
    ctx = ctx or _context_for(gens)
    for g in gens:
        ctx._check(g)
    idx = [ctx.index_of(g) for g in gens]
    return Subgroup(ctx, closure_indices(ctx, idx), gens)


def whole_group(ctx: GroupContext) -> Subgroup:
    return Subgroup(ctx, np.arange(ctx.order), ctx.generators)


def trivial_subgroup(ctx: GroupContext) -> Subgroup:
    return Subgroup(ctx, np.array([ctx.identity_index]))


def intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    if h.ctx.p != k.ctx.p:
        raise UsageError("subgroups of different groups")
    return Subgroup(h.ctx, np.intersect1d(h.indices, k.indices, assume_unique=True))


def intersect_all(groups: Sequence[Subgroup]) -> Subgroup:
    out = groups[0]
    for g in groups[1:]:
        out = intersect(out, g)
    return out


# ------------------------------------------------------------------ recognition


def order_profile(h: Subgroup) -> Counter:
    return Counter(h.ctx.element_orders[h.indices].tolist())


def classify_subgroup(h: Subgroup) -> DicksonType:
    n = h.order
    if n == h.ctx.order:
        return DicksonType("Full", n)
    prof = order_profile(h)
    p = h.ctx.p
    if n in prof:
        return Cyclic(n)
    if n == 4:
        return V4
    if n % 2 == 0 and prof.get(n // 2) and prof.get(2, 0) >= n // 2:
        # a cyclic subgroup of index 2 plus n/2 involutions outside it
        return Dihedral(n // 2)
    if n % p == 0 and prof.get(p) and n > p:
        return Frobenius(p, n // p)
    if n == 12 and prof == Counter({1: 1, 2: 3, 3: 8}):
        return A4
    if n == 24 and prof == Counter({1: 1, 2: 9, 3: 8, 4: 6}):
        return S4
    if n == 60 and prof == Counter({1: 1, 2: 15, 3: 20, 5: 24}):
        return A5
    return DicksonType("Other", n)


def is_abelian(h: Subgroup) -> bool:
    els = h.ctx.elements[h.indices]
    p = h.ctx.p
    ab = mul_array(els[:, None, :], els[None, :, :], p)
    ba = mul_array(els[None, :, :], els[:, None, :], p)
    return bool((ab == ba).all())


def center_size(h: Subgroup) -> int:
    els = h.ctx.elements[h.indices]
    p = h.ctx.p
    ab = mul_array(els[:, None, :], els[None, :, :], p)
    ba = mul_array(els[None, :, :], els[:, None, :], p)
    return int((ab == ba).all(axis=(1, 2)).sum())


# ------------------------------------------------------------------ Dickson catalog


@dataclass(frozen=True)
class CatalogEntry:
    exists: bool
    maximal: bool
    count: int  # number of subgroups of this type that are maximal (0 if not maximal)


@dataclass(frozen=True)
class MaximalCatalog:
    p: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, name) -> CatalogEntry:
        return self.entries[name]

    def maximal_types(self) -> list[str]:
        return [k for k, e in self.entries.items() if e.maximal]

    def total_maximal(self) -> int:
        return sum(e.count for e in self.entries.values())


def dickson_catalog(p) -> MaximalCatalog:
    """Which Dickson types occur, and which are maximal, in PSL(2,p).

    Besides the congruence conditions, the small-prime collapses of the
    classification are applied: D_{p-1} lies in A4/S4/A5 for p = 5, 7, 11 and
    D_{p+1} lies in S4 for p = 7; A4 is maximal in PSL(2,5) = A5.
    """
    P = as_prime(p)
    p = P.p
    order = p * (p - 1) * (p + 1) // 2
    s4 = P.plus_minus_one(8)
    a5 = P.plus_minus_one(10)
    a4_max = p % 40 in (3, 13, 27, 37) or p == 5
    dm_max = p not in (5, 7, 11)
    dp_max = p != 7
    e = {
        "Frobenius": CatalogEntry(True, True, p + 1),
        "D_{p-1}": CatalogEntry(True, dm_max, p * (p + 1) // 2 if dm_max else 0),
        "D_{p+1}": CatalogEntry(True, dp_max, p * (p - 1) // 2 if dp_max else 0),
        "A4": CatalogEntry(True, a4_max, order // 12 if a4_max else 0),
        "S4": CatalogEntry(s4, s4, 2 * order // 24 if s4 else 0),
        "A5": CatalogEntry(a5 and p != 5, a5 and p != 5, 2 * order // 60 if a5 and p != 5 else 0),
    }
    return MaximalCatalog(p, e)


def catalog_key(t: DicksonType, p: int) -> str | None:
    if t.tag == "Frobenius" and t.n * t.k == p * (p - 1) // 2:
        return "Frobenius"
    if p == 5 and t == Dihedral(5):
        return "Frobenius"  # 5:2 is dihedral of order 10
    if t.tag == "Dihedral" and 2 * t.n == p - 1:
        return "D_{p-1}"
    if t.tag == "Dihedral" and 2 * t.n == p + 1:
        return "D_{p+1}"
    if t.tag == "ElemAbelian2sq" and p == 5:
        return "D_{p-1}"
    if t.tag in ("A4", "S4", "A5"):
        return t.tag
    return None


# ------------------------------------------------------------------ maximal subgroups


def normalizer_of_cyclic(ctx: GroupContext, t_idx: int) -> np.ndarray:
    cyc = closure_indices(ctx, [t_idx])
    inside = np.zeros(ctx.order, dtype=bool)
    inside[cyc] = True
    t = ctx.elements[t_idx]
    conj = mul_array(mul_array(ctx.elements, t, ctx.p), ctx.elements[ctx.inverse_perm], ctx.p)
    return np.flatnonzero(inside[ctx.indices_of(conj)])


def _subgroups_through(ctx: GroupContext, y_idx: int, product_order: int, size: int) -> list[np.ndarray]:
    """Subgroups <x, y> of the given size with x an involution and
    order(xy) = product_order (the (2,3,k) triangle-group quotients)."""
    orders = ctx.element_orders
    invs = np.flatnonzero(orders == 2)
    prods = ctx.indices_of(mul_array(ctx.elements[invs], ctx.elements[y_idx], ctx.p))
    cands = invs[orders[prods] == product_order]
    seen, out = set(), []
    for x in cands:
        if int(x) in seen:
            continue
        h = closure_indices(ctx, [int(x), y_idx])
        if len(h) == size:
            key = np.sort(h).tobytes()
            if key not in seen:
                seen.add(key)
                out.append(np.sort(h))
        seen.update(int(i) for i in h if orders[i] == 2)
    return out


def conjugates(ctx: GroupContext, members: np.ndarray) -> list[np.ndarray]:
    """All conjugates of a subgroup, by orbit search under the two
    generators of G."""
    perms = _gen_conj_perms(ctx)
    start = np.sort(members)
    seen = {start.tobytes()}
    out = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for perm in perms:
                img = np.sort(perm[h])
                k = img.tobytes()
                if k not in seen:
                    seen.add(k)
                    out.append(img)
                    nxt.append(img)
        frontier = nxt
    return out


_CONJ_CACHE: dict[int, list[np.ndarray]] = {}


def _gen_conj_perms(ctx: GroupContext) -> list[np.ndarray]:
    if ctx.p not in _CONJ_CACHE:
        _CONJ_CACHE[ctx.p] = [ctx.conj_perm(g) for g in ctx.generators]
    return _CONJ_CACHE[ctx.p]


def representative_subgroups(ctx: GroupContext) -> dict[str, list[np.ndarray]]:
    """Member arrays for one representative of each Dickson type present
    (two for S4/A5 when they split into two classes; conjugation fills in
    the rest)."""
    p, orders = ctx.p, ctx.element_orders
    reps: dict[str, list[np.ndarray]] = {}
    g = primitive_root(p).value
    u = ctx.index_of(canonicalize((1, 1, 0, 1), p))
    dg = ctx.index_of(canonicalize((g, 0, 0, pow(g, -1, p)), p))
    reps["Frobenius"] = [np.sort(closure_indices(ctx, [u, dg]))]
    reps["D_{p-1}"] = [np.sort(normalizer_of_cyclic(ctx, dg))]
    t = int(np.flatnonzero(orders == (p + 1) // 2)[0])
    reps["D_{p+1}"] = [np.sort(normalizer_of_cyclic(ctx, t))]
    y = int(np.flatnonzero(orders == 3)[0])
    for name, k, size in (("A4", 3, 12), ("S4", 4, 24), ("A5", 5, 60)):
        if size == ctx.order:
            continue
        found = _subgroups_through(ctx, y, k, size)
        if found:
            classes = []
            covered = set()
            for h in found:
                if h.tobytes() in covered:
                    continue
                cl = conjugates(ctx, h)
                covered.update(c.tobytes() for c in cl)
                classes.append(h)
            reps[name] = classes
    return reps


class MaximalSubgroups:
    """Every maximal subgroup of PSL(2,p), grouped by Dickson type."""

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self.catalog = dickson_catalog(ctx.p)
        groups: list[Subgroup] = []
        for name, hs in representative_subgroups(ctx).items():
            if not self.catalog[name].maximal:
                continue
            for h in hs:
                groups.extend(Subgroup(ctx, c) for c in conjugates(ctx, h))
        self.subgroups = groups
        self._check_catalog()

    def _check_catalog(self):
        counts = Counter(catalog_key(h.iso_type, self.ctx.p) for h in self.subgroups)
        for name, entry in self.catalog.entries.items():
            if counts.get(name, 0) != entry.count:
                raise AssertionError(
                    f"p={self.ctx.p}: found {counts.get(name, 0)} maximal {name}, catalog says {entry.count}"
                )

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __getitem__(self, i) -> Subgroup:
        return self.subgroups[i]

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean (|G|, n_max) matrix: element i lies in maximal subgroup j."""
        inc = np.zeros((self.ctx.order, len(self.subgroups)), dtype=bool)
        for j, h in enumerate(self.subgroups):
            inc[h.indices, j] = True
        return inc

    @cached_property
    def packed(self) -> np.ndarray:
        """Incidence rows packed into uint64 words, one row per element."""
        return pack_rows(self.incidence)

    @cached_property
    def type_names(self) -> list[str]:
        return [h.iso_type.name for h in self.subgroups]

    def containing(self, idx: Sequence[int]) -> np.ndarray:
        """Indices of maximal subgroups containing all the given elements."""
        inc = self.incidence[np.asarray(idx, dtype=np.int64)]
        return np.flatnonzero(inc.all(axis=0))


def pack_rows(bits: np.ndarray) -> np.ndarray:
    n, m = bits.shape
    words = (m + 63) // 64
    padded = np.zeros((n, words * 64), dtype=bool)
    padded[:, :m] = bits
    b = np.packbits(padded.reshape(n, words, 64)[:, :, ::-1], axis=-1, bitorder="big")
    return b.view(">u8").astype(np.uint64).reshape(n, words)


@lru_cache(maxsize=None)
def maximal_subgroups(p: int) -> MaximalSubgroups:
    return MaximalSubgroups(group_context(int(p)))


def maximal_overgroups(h: Subgroup) -> list[Subgroup]:
    if not h.is_proper():
        raise DomainError("the whole group has no proper overgroups")
    ms = maximal_subgroups(h.ctx.p)
    return [ms[int(j)] for j in ms.containing(h.indices)]


def _is_maximal_by_catalog(h: Subgroup) -> bool:
    key = catalog_key(h.iso_type, h.ctx.p)
    return key is not None and dickson_catalog(h.ctx.p)[key].maximal


def maximal_overgroups_by_extension(h: Subgroup) -> list[Subgroup]:
    """Slow route: grow ``h`` one element at a time, recursing into proper
    closures until the catalog says the subgroup is maximal."""
    if not h.is_proper():
        raise DomainError("the whole group has no proper overgroups")
    ctx = h.ctx
    found: dict[bytes, Subgroup] = {}
    visited: set[bytes] = set()
    stack = [h]
    while stack:
        cur = stack.pop()
        if cur.key in visited:
            continue
        visited.add(cur.key)
        if _is_maximal_by_catalog(cur):
            found[cur.key] = cur
            continue
        gens = _generating_subset(ctx, cur)
        for x in np.flatnonzero(~cur.members):
            ext = closure_indices(ctx, gens + [int(x)])
            if len(ext) < ctx.order:
                stack.append(Subgroup(ctx, ext))
    return sorted(found.values(), key=lambda s: s.key)


def _generating_subset(ctx: GroupContext, h: Subgroup) -> list[int]:
    gens: list[int] = []
    have = np.zeros(ctx.order, dtype=bool)
    have[ctx.identity_index] = True
    for i in h.indices:
        if not have[i]:
            gens.append(int(i))
            have[:] = False
            have[closure_indices(ctx, gens)] = True
    return gens


def in_general_position(subgroups: Sequence[Subgroup]) -> bool:
    """Intersections strictly shrink along every proper inclusion of index sets."""
    n = len(subgroups)
    if n == 0:
        raise DomainError("need at least one subgroup")
    ctx = subgroups[0].ctx
    full = np.ones(ctx.order, dtype=bool)
    inter = {}
    for r in range(n + 1):
        for J in itertools.combinations(range(n), r):
            m = full.copy()
            for j in J:
                m &= subgroups[j].members
            inter[J] = m
    for J, m in inter.items():
        for i in range(n):
            if i in J:
                continue
            bigger = tuple(sorted(J + (i,)))
            if np.array_equal(inter[bigger], m):
                return False
    return True


def lattice_maximal_census(ctx: GroupContext) -> list[Subgroup]:
    """Oracle: maximal subgroups found without the catalog, as the
    inclusion-maximal proper 2-generated subgroups (every Dickson type is
    2-generated).  Only practical for p <= 11."""
    classes = np.unique(ctx.conjugacy_class_ids)
    subs: dict[bytes, np.ndarray] = {}
    for x in classes:
        for y in range(ctx.order):
            h = np.sort(closure_indices(ctx, [int(x), y]))
            if len(h) < ctx.order:
                subs[h.tobytes()] = h
    everything: dict[bytes, np.ndarray] = {}
    for h in subs.values():
        for c in conjugates(ctx, h):
            everything[c.tobytes()] = c
    groups = sorted(everything.values(), key=len, reverse=True)
    maximal: list[np.ndarray] = []
    for h in groups:
        if not any(len(m) > len(h) and np.isin(h, m, assume_unique=True).all() for m in maximal):
            maximal.append(h)
    return [Subgroup(ctx, m) for m in maximal]
