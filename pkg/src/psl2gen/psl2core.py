"""Elements of PSL(2,p) as sign-canonical 2x2 matrices over F_p.

An element is stored as the row-major tuple (a, b, c, d) of one of its two
SL(2,p) lifts; the lift is chosen so that the first nonzero entry lies in
[1, (p-1)/2].  That makes equality a tuple comparison and lets the whole
group be indexed densely (0..|G|-1) in ascending key order, which the
subgroup and enumeration code relies on for bitset membership.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .fieldcore import Prime, as_prime, divisors, sqrt_mod

DEFAULT_ENUMERATION_BOUND = 97


def _canon_tuple(a, b, c, d, p):
    half = (p - 1) // 2
    for x in (a, b, c, d):
        if x:
            if x > half:
                return ((-a) % p, (-b) % p, (-c) % p, (-d) % p)
            return (a, b, c, d)
    raise AssertionError("zero matrix")


@dataclass(frozen=True, slots=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int
    p: int

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def key(self) -> int:
        p = self.p
        return ((self.a * p + self.b) * p + self.c) * p + self.d

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __pow__(self, n: int) -> GroupElement:
        return power(self, n)

    def inverse(self) -> GroupElement:
        p = self.p
        return GroupElement(*_canon_tuple(self.d, (-self.b) % p, (-self.c) % p, self.a, p), p)

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def matrix(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]_{self.p}"


def canonicalize(matrix, p) -> GroupElement:
    """Project an SL(2,p) matrix (nested 2x2 or flat 4-tuple) into PSL(2,p)."""
    p = int(as_prime(p).p)
    flat = np.asarray(matrix, dtype=object).reshape(-1)
    if flat.size != 4:
        raise DomainError("expected a 2x2 matrix")
    a, b, c, d = (int(x) % p for x in flat)
    if (a * d - b * c) % p != 1:
        raise DomainError(f"determinant {(a * d - b * c) % p} != 1 mod {p}")
    return GroupElement(*_canon_tuple(a, b, c, d, p), p)


def identity(p) -> GroupElement:
    return GroupElement(1, 0, 0, 1, int(p))


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.p != y.p:
        raise UsageError(f"cannot multiply elements of PSL(2,{x.p}) and PSL(2,{y.p})")
    p = x.p
    return GroupElement(
        *_canon_tuple(
            (x.a * y.a + x.b * y.c) % p,
            (x.a * y.b + x.b * y.d) % p,
            (x.c * y.a + x.d * y.c) % p,
            (x.c * y.b + x.d * y.d) % p,
            p,
        ),
        p,
    )


def power(g: GroupElement, n: int) -> GroupElement:
    if n < 0:
        g, n = g.inverse(), -n
    result = identity(g.p)
    while n:
        if n & 1:
            result = multiply(result, g)
        g = multiply(g, g)
        n >>= 1
    return result


def commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    return x.inverse() * y.inverse() * x * y


@lru_cache(maxsize=None)
def _order_candidates(p: int) -> tuple[int, ...]:
    cands = set(divisors((p - 1) // 2)) | set(divisors((p + 1) // 2)) | {p}
    return tuple(sorted(cands))


def element_order(g: GroupElement) -> int:
    for d in _order_candidates(g.p):
        if power(g, d).is_identity():
            return d
    # every element order divides (p-1)/2, (p+1)/2 or equals p; kept as an audit path
    n, h = 1, g
    while not h.is_identity():
        h, n = h * g, n + 1
    return n


class OrderClass(enum.Enum):
    ORDER2 = "Order2"
    ORDER3 = "Order3"
    ORDER4 = "Order4"
    ORDER_P_OR_IDENTITY = "OrderPOrIdentity"
    OTHER = "OtherOrder"


def trace_order_class(g: GroupElement) -> OrderClass:
    p, t = g.p, g.trace
    if t == 0:
        return OrderClass.ORDER2
    if t in (1, p - 1):
        return OrderClass.ORDER3
    if t in (2, p - 2):
        return OrderClass.ORDER_P_OR_IDENTITY
    if t * t % p == 2:
        return OrderClass.ORDER4
    return OrderClass.OTHER


# ---------------------------------------------------------------- vectorized


def canon_array(m: np.ndarray, p: int) -> np.ndarray:
    """Sign-canonicalize an (..., 4) int array of SL(2,p) matrices in place."""
    m %= p
    nz = m != 0
    first = np.argmax(nz, axis=-1)
    lead = np.take_along_axis(m, first[..., None], axis=-1)[..., 0]
    flip = lead > (p - 1) // 2
    m[flip] = (-m[flip]) % p
    return m


def mul_array(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
    out[..., 0] = x[..., 0] * y[..., 0] + x[..., 1] * y[..., 2]
    out[..., 1] = x[..., 0] * y[..., 1] + x[..., 1] * y[..., 3]
    out[..., 2] = x[..., 2] * y[..., 0] + x[..., 3] * y[..., 2]
    out[..., 3] = x[..., 2] * y[..., 1] + x[..., 3] * y[..., 3]
    return canon_array(out, p)


def inv_array(x: np.ndarray, p: int) -> np.ndarray:
    out = np.stack([x[..., 3], -x[..., 1], -x[..., 2], x[..., 0]], axis=-1).astype(np.int64)
    return canon_array(out, p)


def keys_of(m: np.ndarray, p: int) -> np.ndarray:
    return ((m[..., 0] * p + m[..., 1]) * p + m[..., 2]) * p + m[..., 3]


def _all_canonical(p: int) -> np.ndarray:
    r = np.arange(p, dtype=np.int64)
    # a != 0: d = (1 + b c) / a
    a, b, c = np.meshgrid(np.arange(1, p, dtype=np.int64), r, r, indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    inv = np.array([0] + [pow(int(x), -1, p) for x in range(1, p)], dtype=np.int64)
    d = (1 + b * c) % p * inv[a] % p
    part1 = np.stack([a, b, c, d], axis=1)
    # a == 0: b c = -1
    bb, dd = np.meshgrid(np.arange(1, p, dtype=np.int64), r, indexing="ij")
    bb, dd = bb.ravel(), dd.ravel()
    cc = (-inv[bb]) % p
    part2 = np.stack([np.zeros_like(bb), bb, cc, dd], axis=1)
    sl = np.concatenate([part1, part2])
    nz = sl != 0
    lead = np.take_along_axis(sl, np.argmax(nz, axis=1)[:, None], axis=1)[:, 0]
    keep = sl[lead <= (p - 1) // 2]
    return keep[np.argsort(keys_of(keep, p), kind="stable")]


class GroupContext:
    """PSL(2,p) with a lazily built dense element index."""

    def __init__(self, p, bound: int = DEFAULT_ENUMERATION_BOUND):
        self.prime: Prime = as_prime(p)
        self.p: int = self.prime.p
        self.order: int = self.p * (self.p - 1) * (self.p + 1) // 2
        self.bound = bound

    def __repr__(self):
        return f"GroupContext(p={self.p})"

    # -- element index --------------------------------------------------------

    @cached_property
    def elements(self) -> np.ndarray:
        """(|G|, 4) int64 array of canonical entries, sorted by key."""
        if self.p > self.bound:
            raise CapacityError(
                f"enumerating PSL(2,{self.p}) exceeds the enumeration bound p <= {self.bound}",
                budget=self.bound,
            )
        els = _all_canonical(self.p)
        if len(els) != self.order:
            raise AssertionError("enumeration size mismatch")
        els.setflags(write=False)
        return els

    @cached_property
    def keys(self) -> np.ndarray:
        return keys_of(self.elements, self.p)

    @cached_property
    def identity_index(self) -> int:
        return self.index_of(identity(self.p))

    def element(self, i: int) -> GroupElement:
        a, b, c, d = (int(x) for x in self.elements[i])
        return GroupElement(a, b, c, d, self.p)

    def index_of(self, g: GroupElement) -> int:
        self._check(g)
        i = int(np.searchsorted(self.keys, g.key))
        return i

    def indices_of(self, m: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.keys, keys_of(m, self.p))

    def _check(self, g: GroupElement):
        if g.p != self.p:
            raise UsageError(f"element of PSL(2,{g.p}) used in PSL(2,{self.p})")

    # -- permutation representations -------------------------------------------

    def right_mult_perm(self, g: GroupElement) -> np.ndarray:
        """perm[i] = index(x_i * g)."""
        self._check(g)
        return self.indices_of(mul_array(self.elements, np.array(g.entries), self.p))

    def left_mult_perm(self, g: GroupElement) -> np.ndarray:
        self._check(g)
        return self.indices_of(mul_array(np.array(g.entries), self.elements, self.p))

    def conj_perm(self, g: GroupElement, domain: np.ndarray | None = None) -> np.ndarray:
        """perm[i] = index(g x_i g^-1), restricted to ``domain`` indices if given."""
        self._check(g)
        xs = self.elements if domain is None else self.elements[domain]
        gi = np.array(g.inverse().entries)
        prod = mul_array(mul_array(np.array(g.entries), xs, self.p), gi, self.p)
        return self.indices_of(prod)

    @cached_property
    def inverse_perm(self) -> np.ndarray:
        return self.indices_of(inv_array(self.elements, self.p))

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of every element, by vectorized powering against the
        admissible orders (divisors of (p-1)/2, (p+1)/2, and p)."""
        p = self.p
        els = self.elements
        orders = np.zeros(len(els), dtype=np.int64)
        ident = self.identity_index
        for d in _order_candidates(p):
            todo = orders == 0
            if not todo.any():
                break
            pw = _power_array(els[todo], d, p)
            hit = self.indices_of(pw) == ident
            idx = np.flatnonzero(todo)[hit]
            orders[idx] = d
        if (orders == 0).any():
            raise AssertionError("element with unexpected order")
        return orders

    @cached_property
    def generators(self) -> tuple[GroupElement, GroupElement]:
        """A fixed generating pair: the unipotent upper and lower elements."""
        return (canonicalize((1, 1, 0, 1), self.p), canonicalize((1, 0, 1, 1), self.p))

    @cached_property
    def conjugacy_class_ids(self) -> np.ndarray:
        """Class label per element (label = smallest index in the class)."""
        perms = [self.conj_perm(g) for g in self.generators]
        return _orbit_labels(len(self.elements), perms)

    def outer_automorphism_element(self):
        """diag(nu, 1) for the smallest nonsquare nu; conjugation by it
        realizes the outer automorphism of PSL(2,p)."""
        p = self.p
        nu = next(x for x in range(2, p) if sqrt_mod(x, p) is None)
        return nu

    def outer_conj_perm(self, domain: np.ndarray | None = None) -> np.ndarray:
        # diag(nu,1) x diag(nu,1)^-1 = [[a, nu b], [c/nu, d]]
        p = self.p
        nu = self.outer_automorphism_element()
        xs = self.elements if domain is None else self.elements[domain]
        m = xs.copy()
        m[:, 1] = m[:, 1] * nu % p
        m[:, 2] = m[:, 2] * pow(nu, -1, p) % p
        return self.indices_of(canon_array(m, p))


def _power_array(x: np.ndarray, n: int, p: int) -> np.ndarray:
    result = np.tile(np.array([1, 0, 0, 1], dtype=np.int64), (len(x), 1))
    base = x.copy()
    while n:
        if n & 1:
            result = mul_array(result, base, p)
        base = mul_array(base, base, p)
        n >>= 1
    return result


def _orbit_labels(n: int, perms: list[np.ndarray]) -> np.ndarray:
    """Orbit labels of the group generated by ``perms`` acting on range(n)."""
    labels = np.arange(n)
    while True:
        new = labels.copy()
        for perm in perms:
            np.minimum.at(new, perm, new)
            new = np.minimum(new, new[perm])
        if np.array_equal(new, labels):
            break
        labels = new
    # pointer-jump to roots
    while True:
        nxt = labels[labels]
        if np.array_equal(nxt, labels):
            return labels
        labels = nxt


@lru_cache(maxsize=None)
def group_context(p: int) -> GroupContext:
    return GroupContext(int(p))


def enumerate_group(ctx: GroupContext) -> list[GroupElement]:
    return [ctx.element(i) for i in range(len(ctx.elements))]
