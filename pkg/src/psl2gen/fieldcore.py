"""Arithmetic in the prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class Prime:
    p: int
    residue_mod8: int = field(init=False)
    residue_mod10: int = field(init=False)
    residue_mod40: int = field(init=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p < 5 or not is_prime(p):
            raise DomainError(f"expected an odd prime >= 5, got {p!r}")
        object.__setattr__(self, "residue_mod8", p % 8)
        object.__setattr__(self, "residue_mod10", p % 10)
        object.__setattr__(self, "residue_mod40", p % 40)

    def __int__(self):
        return self.p

    def __index__(self):
        return self.p

    def plus_minus_one(self, modulus: int) -> bool:
        """True iff p = +-1 mod ``modulus``."""
        return self.p % modulus in (1, modulus - 1)


def as_prime(p) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


@dataclass(frozen=True, order=True)
class Fp:
    value: int
    context: Prime = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.context.p)

    @property
    def p(self) -> int:
        return self.context.p

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.context.p != self.context.p:
                raise DomainError("field elements from different primes")
            return other.value
        return int(other)

    def __add__(self, other):
        return Fp(self.value + self._coerce(other), self.context)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.value - self._coerce(other), self.context)

    def __rsub__(self, other):
        return Fp(self._coerce(other) - self.value, self.context)

    def __mul__(self, other):
        return Fp(self.value * self._coerce(other), self.context)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.context)

    def __truediv__(self, other):
        return self * fp_inverse(Fp(self._coerce(other), self.context))

    def __rtruediv__(self, other):
        return Fp(self._coerce(other), self.context) * fp_inverse(self)

    def __pow__(self, n: int):
        if n < 0:
            return Fp(pow(fp_inverse(self).value, -n, self.p), self.context)
        return Fp(pow(self.value, n, self.p), self.context)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.value == other.value and self.p == other.p
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value} mod {self.p})"


def _fp(a, p=None) -> Fp:
    if isinstance(a, Fp):
        return a
    if p is None:
        raise DomainError("a bare integer needs an explicit prime")
    return Fp(int(a), as_prime(p))


def fp_inverse(a, p=None) -> Fp:
    a = _fp(a, p)
    if a.value == 0:
        raise DomainError("0 has no multiplicative inverse")
    return Fp(pow(a.value, -1, a.p), a.context)


def _tonelli_shanks(n: int, p: int) -> int:
    # n is a nonzero quadratic residue
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(n, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod(a, p=None) -> tuple[Fp, ...] | None:
    """Square roots of ``a``: ``(z, p - z)`` with z the smaller residue,
    ``(0,)`` for zero, None for a non-residue."""
    a = _fp(a, p)
    n, q = a.value, a.p
    if n == 0:
        return (Fp(0, a.context),)
    if pow(n, (q - 1) // 2, q) != 1:
        return None
    if q < 1000:
        z = next(x for x in range(1, q) if x * x % q == n)
    else:
        z = _tonelli_shanks(n, q)
    z = min(z, q - z)
    return (Fp(z, a.context), Fp(q - z, a.context))


def multiplicative_order(a, p=None) -> int:
    a = _fp(a, p)
    if a.value == 0:
        raise DomainError("0 has no multiplicative order")
    for d in divisors(a.p - 1):
        if pow(a.value, d, a.p) == 1:
            return d
    raise AssertionError("unreachable: Fermat")


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    return next(g for g in range(2, p) if multiplicative_order(g, p) == p - 1)


def primitive_root(p) -> Fp:
    p = as_prime(p)
    return Fp(_primitive_root(p.p), p)


def elements_of_order(n: int, p) -> list[Fp]:
    p = as_prime(p)
    return [Fp(x, p) for x in range(1, p.p) if multiplicative_order(x, p) == n]


def is_square(a, p=None) -> bool:
    return sqrt_mod(a, p) is not None
