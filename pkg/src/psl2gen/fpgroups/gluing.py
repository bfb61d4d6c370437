"""Glued presentations Q on x1..x4 built from S4 relator sets, and the
resumable sweeps over all choices of triples.

R_s depends only on the Aut(S4)-orbit of s, so sweeps run over orbit
classes of involution triples (Q has x_i^2 = 1, so only all-involution
triples of S4 can occur).
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from ..errors import DomainError
from . import s4
from .coxeter import AFFINE_A3, CoxeterMatrix, detect_coxeter_subset
from .presentation import Presentation
from .todd_coxeter import todd_coxeter
from .words import Word

# generator positions (0-based) receiving each R_s, per case
CASE_SLOTS = {
    1: ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
    2: ((0, 1, 3), (0, 2, 3), (1, 2, 3)),
    3: ((0, 2, 3), (1, 2, 3)),
}

# case 3: the two dihedral maximal subgroups meet in Z2 x Z2, which holds g1, g2
CASE3_COMMUTING_PAIR = (0, 1)


def _involutions(n=4):
    return [Word(((i, 1), (i, 1))) for i in range(n)]


def gluing_presentation(case: int, rs_sets: Sequence[Sequence[Word]], extra: Iterable[Word] = ()) -> Presentation:
    """Q = <x1..x4 | x_i^2, R_s on the case's triples, extra>."""
    if case not in CASE_SLOTS:
        raise DomainError(f"case must be 1, 2 or 3, got {case}")
    slots = CASE_SLOTS[case]
    if len(rs_sets) != len(slots):
        raise DomainError(f"case {case} takes {len(slots)} relator sets, got {len(rs_sets)}")
    rels = _involutions()
    for rs, slot in zip(rs_sets, slots):
        for w in rs:
            if w.max_generator() > 2:
                raise DomainError("R_s must use only x1, x2, x3")
            rels.append(w.rename(slot))
    rels.extend(extra)
    seen = set()
    out = []
    for w in rels:
        w = w.cyclically_reduced()
        if len(w) and w.letters not in seen:
            seen.add(w.letters)
            out.append(w)
    return Presentation(4, tuple(out))


def case3_extra(pair=CASE3_COMMUTING_PAIR) -> list[Word]:
    i, j = pair
    return [Word(((i, 1), (j, 1))) ** 2]


# ------------------------------------------------------------------ sweeps


def orbit_representatives() -> list[tuple]:
    return [o[0] for o in s4.orbit_classes(s4.involution_triples())]


def _g123_orders(reps, combo) -> tuple[int, int, int]:
    """Case 2: orders of g1g2, g1g3, g2g3 read off s2, s3, s4."""
    o12 = s4.pair_orders(reps[combo[0]])[(0, 1)]
    o13 = s4.pair_orders(reps[combo[1]])[(0, 1)]
    o23 = s4.pair_orders(reps[combo[2]])[(0, 1)]
    return o12, o13, o23


def case2_allowed(orders: Sequence[int]) -> bool:
    """No two of ord(g1g2), ord(g1g3), ord(g2g3) equal 3, nor two equal 4."""
    return sum(o == 3 for o in orders) < 2 and sum(o == 4 for o in orders) < 2


@dataclass
class SweepRecord:
    case: int
    combo: tuple[int, ...]
    finite: bool
    order: int | None
    coxeter: list | None  # detected matrix (diagonal shown as 2) on overflow
    cap: int

    def to_json(self):
        return {
            "case": self.case,
            "combo": list(self.combo),
            "finite": self.finite,
            "order": self.order,
            "coxeter": self.coxeter,
            "cap": self.cap,
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["case"], tuple(d["combo"]), d["finite"], d["order"], d["coxeter"], d["cap"])


def sweep_combos(case: int, reps=None) -> list[tuple[int, ...]]:
    reps = reps if reps is not None else orbit_representatives()
    k = len(reps)
    combos = list(itertools.product(range(k), repeat=len(CASE_SLOTS[case])))
    if case == 2:
        combos = [c for c in combos if case2_allowed(_g123_orders(reps, c))]
    return combos


def presentation_for(case: int, combo: Sequence[int], reps=None, case3_pair=CASE3_COMMUTING_PAIR) -> Presentation:
    reps = reps if reps is not None else orbit_representatives()
    rs = [s4.rs_relators(reps[i]) for i in combo]
    extra = case3_extra(case3_pair) if case == 3 else ()
    return gluing_presentation(case, rs, extra)


def run_one(case, combo, reps, caps=(20_000, 10**6), strategy="felsch", case3_pair=CASE3_COMMUTING_PAIR) -> SweepRecord:
    """Enumerate with an escalating cap: an overflow is retried at the next
    cap unless it already exhibits a Coxeter subpattern."""
    pres = presentation_for(case, combo, reps, case3_pair)
    cox = detect_coxeter_subset(pres.relators, 4)
    for cap in caps:
        res = todd_coxeter(pres, max_cosets=cap, strategy=strategy)
        if res.finite:
            return SweepRecord(case, tuple(combo), True, res.index, None, cap)
        if cox is not None:
            break
    return SweepRecord(case, tuple(combo), False, None, cox.to_list() if cox else None, cap)


def run_sweep(
    case: int,
    results_path: str | os.PathLike | None = None,
    caps=(20_000, 10**6),
    strategy="felsch",
    progress: Callable[[int, int], None] | None = None,
    limit: int | None = None,
    case3_pair=CASE3_COMMUTING_PAIR,
) -> list[SweepRecord]:
    """Sweep every combination for ``case``; with ``results_path`` records are
    appended as JSON lines and already-present combos are skipped."""
    reps = orbit_representatives()
    combos = sweep_combos(case, reps)
    if limit is not None:
        combos = combos[:limit]
    done: dict[tuple, SweepRecord] = {}
    if results_path is not None and Path(results_path).exists():
        for line in Path(results_path).read_text().splitlines():
            if line.strip():
                rec = SweepRecord.from_json(json.loads(line))
                if rec.case == case:
                    done[rec.combo] = rec
    fh = open(results_path, "a") if results_path is not None else None
    out = []
    try:
        for n, combo in enumerate(combos):
            rec = done.get(tuple(combo))
            if rec is None:
                rec = run_one(case, combo, reps, caps, strategy, case3_pair)
                if fh:
                    fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
                    fh.flush()
            out.append(rec)
            if progress:
                progress(n + 1, len(combos))
    finally:
        if fh:
            fh.close()
    return out


@dataclass
class SweepSummary:
    case: int
    total: int
    finite: int
    overflow: int
    max_order: int | None
    coxeter_patterns: list  # distinct detected matrices among overflows

    def to_json(self):
        return self.__dict__.copy()


def summarize(case: int, records: Sequence[SweepRecord]) -> SweepSummary:
    fin = [r.order for r in records if r.finite]
    pats = sorted({json.dumps(r.coxeter) for r in records if not r.finite})
    return SweepSummary(
        case, len(records), len(fin), len(records) - len(fin), max(fin) if fin else None,
        [json.loads(p) for p in pats],
    )


def is_affine_a3(m) -> bool:
    return m is not None and CoxeterMatrix.from_array(m) == AFFINE_A3
