"""Coxeter matrices, their presentations, and detection inside relator sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError
from .presentation import Presentation
from .words import Word

INFINITY = 0  # off-diagonal marker for "no relation"


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix with m_ii = 1 (x_i^2 = (x_i x_i)^1 = 1 after free
    reduction); displayed with 2 on the diagonal when ``display=True``."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.entries
        n = len(m)
        for i in range(n):
            if len(m[i]) != n:
                raise DomainError("Coxeter matrix must be square")
            if m[i][i] != 1:
                raise DomainError("diagonal entries must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise DomainError("Coxeter matrix must be symmetric")
                if i != j and m[i][j] != INFINITY and m[i][j] < 2:
                    raise DomainError("off-diagonal entries must be >= 2 or infinite")

    @classmethod
    def from_array(cls, a) -> CoxeterMatrix:
        a = np.asarray(a, dtype=int).copy()
        np.fill_diagonal(a, 1)
        return cls(tuple(tuple(int(v) for v in row) for row in a))

    @property
    def rank(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def array(self, display=False) -> np.ndarray:
        a = np.array(self.entries, dtype=int)
        if display:
            np.fill_diagonal(a, 2)
        return a

    def off_diagonal(self):
        n = self.rank
        return {(i, j): self.entries[i][j] for i in range(n) for j in range(i + 1, n)}

    def relabel(self, perm: Sequence[int]) -> CoxeterMatrix:
        """Matrix of the same group with generator i renamed perm[i]."""
        n = self.rank
        out = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[perm[i]][perm[j]] = self.entries[i][j]
        return CoxeterMatrix(tuple(tuple(r) for r in out))

    def edges(self):
        """Diagram edges (i, j, label) for labels >= 3."""
        return [(i, j, k) for (i, j), k in self.off_diagonal().items() if k == INFINITY or k >= 3]

    def to_list(self, display=True):
        return self.array(display).tolist()


# the 4-cycle 1-2-3-4-1 with all labels 3 (affine A3)
AFFINE_A3 = CoxeterMatrix.from_array([[1, 3, 2, 3], [3, 1, 3, 2], [2, 3, 1, 3], [3, 2, 3, 1]])


def four_cycle(labels: Sequence[int]) -> CoxeterMatrix:
    """4-cycle diagram with edge labels for 12, 23, 34, 41; diagonals 2."""
    a, b, c, d = labels
    return CoxeterMatrix.from_array([[1, a, 2, d], [a, 1, b, 2], [2, b, 1, c], [d, 2, c, 1]])


def coxeter_presentation(m: CoxeterMatrix) -> Presentation:
    n = m.rank
    rels = [Word(((i, 1), (i, 1))) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            k = m[i, j]
            if k != INFINITY:
                rels.append(Word(((i, 1), (j, 1))) ** k)
    return Presentation(n, tuple(rels))


def _pair_power(w: Word, involutions: set[int]):
    """(i, j, k) if w is freely equal to (x_i x_j)^k, treating the involutive
    generators as self-inverse; else None."""
    ls = [(g, 1) if g in involutions else (g, e) for g, e in w.letters]
    w = Word(tuple(ls)).cyclically_reduced()
    # x x cancels for involutions
    changed = True
    letters = list(w.letters)
    while changed:
        changed = False
        out = []
        for l in letters:
            if out and out[-1] == l and l[0] in involutions:
                out.pop()
                changed = True
            else:
                out.append(l)
        while len(out) >= 2 and out[0] == out[-1] and out[0][0] in involutions:
            out = out[1:-1]
            changed = True
        letters = out
    n = len(letters)
    if n < 2 or n % 2:
        return None
    i, j = letters[0][0], letters[1][0]
    if i == j:
        return None
    for t in range(n):
        if letters[t][0] != (i if t % 2 == 0 else j):
            return None
    return min(i, j), max(i, j), n // 2


def detect_coxeter_subset(relators: Sequence[Word], n: int | None = None) -> CoxeterMatrix | None:
    """Coxeter matrix formed by pair relators (x_i x_j)^k, minimal k per pair.

    Needs x_i^2 for every generator; returns None if any pair lacks a
    relator of that shape.
    """
    if n is None:
        n = 1 + max((w.max_generator() for w in relators), default=-1)
    involutions = set()
    for w in relators:
        r = w.cyclically_reduced().letters
        if len(r) == 2 and r[0][0] == r[1][0] and r[0][1] == r[1][1]:
            involutions.add(r[0][0])
    if involutions != set(range(n)) or n < 2:
        return None
    best: dict[tuple[int, int], int] = {}
    for w in relators:
        hit = _pair_power(w, involutions)
        if hit is None:
            continue
        i, j, k = hit
        if (i, j) not in best or k < best[(i, j)]:
            best[(i, j)] = k
    a = np.ones((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            k = best.get((i, j))
            if k is None or k < 2:
                # k == 1 means x_i = x_j, not a Coxeter relator
                return None
            a[i, j] = a[j, i] = k
    return CoxeterMatrix.from_array(a)
