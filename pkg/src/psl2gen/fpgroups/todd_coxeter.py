"""Coset enumeration front end.

``todd_coxeter`` returns ``Finite`` with the index and the closed coset
table, or ``Overflow`` when the live-coset cap (or the definitions budget
that stands in for a time limit) is hit.  Overflow says nothing about
whether the group is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DomainError, VerificationError
from . import _tc_kernel as K
from .presentation import Presentation
from .words import Word

STRATEGIES = ("hlt", "felsch")


@dataclass(frozen=True)
class Finite:
    index: int
    table: np.ndarray = field(repr=False, compare=False)
    strategy: str = "hlt"
    max_live: int = 0

    @property
    def finite(self):
        return True

    def permutations(self) -> list[np.ndarray]:
        """Action of each generator on the cosets."""
        return [self.table[:, 2 * g].copy() for g in range(self.table.shape[1] // 2)]


@dataclass(frozen=True)
class Overflow:
    reason: str  # "cosets" or "definitions"
    max_cosets: int
    live: int
    definitions: int
    strategy: str = "hlt"
    coxeter: object = None  # CoxeterMatrix attached by callers that detect one

    @property
    def finite(self):
        return False


def _flatten(words: Sequence[Word]):
    cols: list[int] = []
    off = [0]
    for w in words:
        cols.extend(w.columns())
        off.append(len(cols))
    return np.asarray(cols, dtype=np.int64), np.asarray(off, dtype=np.int64)


def _cyclic_conjugates(words: Sequence[Word], ncols: int):
    """All cyclic conjugates of the relators and their inverses, bucketed by
    first column (Felsch deductions only scan the ones that start with the
    column just defined)."""
    seen = set()
    buckets: list[list[tuple]] = [[] for _ in range(ncols)]
    for w in words:
        for v in (w, w.inverse()):
            ls = v.letters
            for i in range(len(ls)):
                rot = ls[i:] + ls[:i]
                if rot in seen:
                    continue
                seen.add(rot)
                buckets[Word(rot).columns()[0]].append(rot)
    flat = [Word(r) for b in buckets for r in b]
    start = np.zeros(ncols + 1, dtype=np.int64)
    for x in range(ncols):
        start[x + 1] = start[x] + len(buckets[x])
    conj, coff = _flatten(flat)
    return conj, coff, start


def _prepare(pres: Presentation):
    rels = [w.cyclically_reduced() for w in pres.relators]
    rels = [w for w in rels if len(w)]
    # short relators first fill the table faster under HLT
    rels.sort(key=lambda w: (len(w), w.letters))
    return rels


def todd_coxeter(
    pres: Presentation,
    subgroup_words: Sequence[Word] = (),
    max_cosets: int = 10**6,
    strategy: str = "hlt",
    max_definitions: int | None = None,
    check: bool = True,
):
    """Index of the subgroup generated by ``subgroup_words`` in ``pres``."""
    if max_cosets < 1:
        raise DomainError("max_cosets must be >= 1")
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    ngens = max(pres.generator_count, 1)
    ncols = 2 * ngens
    for w in subgroup_words:
        if w.max_generator() >= pres.generator_count:
            raise DomainError("subgroup word uses an unknown generator")
    rels = _prepare(pres)
    subs = [w.reduced() for w in subgroup_words]
    subs = [w for w in subs if len(w)]
    rel_cols, roff = _flatten(rels)
    sub_cols, soff = _flatten(subs)
    conj, coff, cstart = _cyclic_conjugates(rels, ncols)
    felsch = strategy == "felsch"
    alloc = max_cosets + max_cosets // 4 + 16
    if max_definitions is None:
        max_definitions = 50 * max_cosets
    dcap = max(1024, min(alloc, 1 << 20))
    status, table, st = K.enumerate_cosets(
        ncols, rel_cols, roff, sub_cols, soff, conj, coff, cstart,
        max_cosets, alloc, max_definitions, felsch, dcap,
    )
    if status != K.FINITE:
        reason = "cosets" if status == K.OVERFLOW_COSETS else "definitions"
        return Overflow(reason, max_cosets, int(st[K.ST_LIVE]), int(st[K.ST_DEFS]), strategy)
    n = int(st[K.ST_N])
    tab = np.array(table[:n], dtype=np.int64)
    res = Finite(n, tab, strategy, int(st[K.ST_MAXLIVE]))
    if check:
        verify_coset_table(res, rels, subs)
    return res


def verify_coset_table(res: Finite, relators: Sequence[Word], subgroup_words: Sequence[Word] = ()):
    """Closed, consistent, and every relator is the identity permutation."""
    t = res.table
    n = res.index
    if (t < 0).any() or (t >= n).any():
        raise VerificationError("coset table closed", "undefined or out-of-range entry")
    ar = np.arange(n)
    for g in range(t.shape[1] // 2):
        if not np.array_equal(t[t[:, 2 * g], 2 * g + 1], ar):
            raise VerificationError("coset table consistent", f"column {g} and its inverse disagree")
    for w in relators:
        cur = ar.copy()
        for x in w.columns():
            cur = t[cur, x]
        if not np.array_equal(cur, ar):
            raise VerificationError("relators act trivially", repr(w))
    for w in subgroup_words:
        c = 0
        for x in w.columns():
            c = t[c, x]
        if c != 0:
            raise VerificationError("subgroup fixes coset 0", repr(w))


def group_order(pres: Presentation, max_cosets: int = 10**6, strategy: str = "hlt"):
    """Order as an int, or None on overflow."""
    r = todd_coxeter(pres, (), max_cosets, strategy)
    return r.index if r.finite else None
