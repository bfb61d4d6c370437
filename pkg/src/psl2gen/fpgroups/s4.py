"""S4 as permutations of {0,1,2,3}, its irredundant generating triples, and
finite relator sets read off a multiplication table."""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache
from typing import Callable, Hashable, Sequence

from ..errors import DomainError
from .presentation import Presentation
from .todd_coxeter import todd_coxeter
from .words import Word

Perm = tuple[int, ...]

S4_ORDER = 24
IDENTITY: Perm = (0, 1, 2, 3)


def compose(a: Perm, b: Perm) -> Perm:
    """a then b (left-to-right, matching word evaluation x1 x2 ...)."""
    return tuple(b[a[i]] for i in range(len(a)))


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def perm_order(a: Perm) -> int:
    k, x = 1, a
    while x != IDENTITY[: len(a)]:
        x = compose(x, a)
        k += 1
    return k


def cycle(*points: int, n: int = 4) -> Perm:
    """Permutation from a cycle written with 1-based points, e.g. cycle(2, 3)."""
    out = list(range(n))
    pts = [p - 1 for p in points]
    for i, p in enumerate(pts):
        out[p] = pts[(i + 1) % len(pts)]
    return tuple(out)


def format_perm(a: Perm) -> str:
    seen = set()
    parts = []
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = a[j]
        parts.append("(" + "".join(str(v + 1) for v in c) + ")")
    return "".join(parts) or "()"


ELEMENTS: tuple[Perm, ...] = tuple(itertools.permutations(range(4)))

# the triple ((23),(14),(12))
STANDARD_TRIPLE: tuple[Perm, Perm, Perm] = (cycle(2, 3), cycle(1, 4), cycle(1, 2))


def generated(gens: Sequence[Hashable], mul: Callable, identity=None) -> set:
    """Closure of gens under mul (finite group, so positive words suffice)."""
    start = identity if identity is not None else IDENTITY
    seen = {start}
    q = deque([start])
    while q:
        x = q.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                q.append(y)
    return seen


def _generates(gens) -> bool:
    return len(generated(gens, compose)) == S4_ORDER


@lru_cache(maxsize=None)
def s4_generating_triples() -> tuple[tuple[Perm, Perm, Perm], ...]:
    """All ordered irredundant generating triples of S4 (24^3 brute force)."""
    out = []
    for t in itertools.product(ELEMENTS, repeat=3):
        if not _generates(t):
            continue
        if any(_generates(t[:i] + t[i + 1:]) for i in range(3)):
            continue
        out.append(t)
    return tuple(out)


def involution_triples() -> tuple[tuple[Perm, Perm, Perm], ...]:
    return tuple(t for t in s4_generating_triples() if all(perm_order(g) == 2 for g in t))


def conjugate(t: Sequence[Perm], g: Perm) -> tuple[Perm, ...]:
    gi = perm_inverse(g)
    return tuple(compose(compose(gi, x), g) for x in t)


def orbit_classes(triples: Sequence[tuple[Perm, ...]]) -> list[list[tuple[Perm, ...]]]:
    """Orbits under Aut(S4) = Inn(S4), each sorted, ordered by least member."""
    remaining = set(triples)
    out = []
    for t in sorted(triples):
        if t not in remaining:
            continue
        orb = sorted({conjugate(t, g) for g in ELEMENTS})
        remaining.difference_update(orb)
        out.append(orb)
    return out


def pair_orders(t: Sequence[Perm]) -> dict[tuple[int, int], int]:
    n = len(t)
    return {(i, j): perm_order(compose(t[i], t[j])) for i in range(n) for j in range(i + 1, n)}


# ------------------------------------------------------------------ relators


def shortest_words(gens: Sequence, mul: Callable, identity) -> dict:
    """Breadth-first shortest positive word for every element."""
    words = {identity: ()}
    q = deque([identity])
    while q:
        x = q.popleft()
        for i, g in enumerate(gens):
            y = mul(x, g)
            if y not in words:
                words[y] = words[x] + (i,)
                q.append(y)
    return words


def _identity_of(gens, mul):
    g = gens[0]
    x = g
    while True:
        y = mul(x, g)
        if y == g:
            return x
        x = y


def relators_from_table(
    group_order: int,
    multiply_oracle: Callable,
    gens: Sequence,
    identity=None,
    reduce: bool = True,
    keep: Sequence[Word] = (),
    full_table: bool = False,
) -> list[Word]:
    """Finite relator set defining the group generated by ``gens``.

    Each element gets a shortest word w_i; a product w_i w_j = w_k gives the
    relator w_i w_j w_k^-1.  By default only the products with a single
    generator are used (the Cayley graph edges), which already define the
    group; ``full_table`` emits every product.  ``keep`` relators are added
    first and never dropped by the greedy reduction.
    """
    if not gens:
        raise DomainError("need at least one generator")
    if identity is None:
        identity = _identity_of(gens, multiply_oracle)
    words = shortest_words(gens, multiply_oracle, identity)
    if len(words) != group_order:
        raise DomainError(f"generators span {len(words)} elements, expected {group_order}")
    k = len(gens)
    rels: list[Word] = []
    seen = set()

    def add(w: Word):
        w = w.cyclically_reduced()
        if len(w) and w.letters not in seen and w.inverse().letters not in seen:
            seen.add(w.letters)
            rels.append(w)

    for w in keep:
        add(w)
    protected = len(rels)
    factors = [(g, (i,)) for i, g in enumerate(gens)]
    if full_table:
        factors = [(x, wx) for x, wx in words.items()]
    for x, wx in sorted(words.items(), key=lambda kv: (len(kv[1]), kv[1])):
        for y, wy in factors:
            z = multiply_oracle(x, y)
            add(Word.from_gens(wx) * Word.from_gens(wy) * Word.from_gens(words[z]).inverse())
    pres = Presentation(k, tuple(rels))
    if todd_coxeter(pres, max_cosets=max(1000, 100 * group_order)).index != group_order:
        raise DomainError("table relators failed to enumerate to the group order")
    if not reduce:
        return rels
    return _greedy_reduce(k, rels, protected, group_order)


def _greedy_reduce(k: int, rels: list[Word], protected: int, order: int) -> list[Word]:
    """Drop relators (longest first) while the enumerated order is unchanged."""
    cap = max(1000, 200 * order)
    current = list(rels)
    candidates = sorted(range(protected, len(rels)), key=lambda i: (-len(rels[i]), rels[i].letters))
    for i in candidates:
        trial = [r for r in current if r is not rels[i]]
        res = todd_coxeter(Presentation(k, tuple(trial)), max_cosets=cap, max_definitions=20 * cap)
        if res.finite and res.index == order:
            current = trial
    return current


def coxeter_relators(t: Sequence[Perm]) -> list[Word]:
    """x_i^2 for involutive entries and (x_i x_j)^ord(s_i s_j) for all pairs."""
    out = []
    for i, g in enumerate(t):
        out.append(Word(((i, 1),)) ** perm_order(g))
    for (i, j), o in pair_orders(t).items():
        out.append(Word(((i, 1), (j, 1))) ** o)
    return out


@lru_cache(maxsize=None)
def rs_relators(t: tuple[Perm, Perm, Perm]) -> tuple[Word, ...]:
    """R_s on x1, x2, x3: the Coxeter relators of the triple plus a reduced
    set of multiplication-table relators."""
    return tuple(relators_from_table(S4_ORDER, compose, t, IDENTITY, keep=coxeter_relators(t)))


def standard_rs() -> Presentation:
    """The hand-picked R_s for ((23),(14),(12))."""
    x1, x2, x3 = (Word(((i, 1),)) for i in range(3))
    rels = [x1 ** 2, x2 ** 2, x3 ** 2, (x1 * x2) ** 2, (x2 * x3) ** 3, (x1 * x3) ** 3,
            (x1 * x2 * x3) ** 4, (x1 * x2 * x3 * x2) ** 3]
    return Presentation(3, tuple(rels))
