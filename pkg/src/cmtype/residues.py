"""Exact residue arithmetic: canonical lifts, multiplicative orders, cyclic subgroups of (Z/m)^x."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotCoprime


@dataclass(frozen=True)
class Modulus:
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"modulus must be a positive integer, got {self.m!r}")

    def __int__(self) -> int:
        return self.m


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Modulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.m:
            raise ValueError(f"{self.value} is not reduced mod {self.modulus.m}")

    @classmethod
    def of(cls, b: int, m: int | Modulus) -> "Residue":
        mod = m if isinstance(m, Modulus) else Modulus(m)
        return cls(b % mod.m, mod)

    def __neg__(self) -> "Residue":
        return Residue((-self.value) % self.modulus.m, self.modulus)


def _as_int(m: int | Modulus) -> int:
    return m.m if isinstance(m, Modulus) else Modulus(m).m


def canonical_lift(b: int | Residue, m: int | Modulus | None = None) -> int:
    """The representative of ``b`` in ``[0, m)``.

    Accepts either a :class:`Residue` or a plain integer together with ``m``.
    """
    if isinstance(b, Residue):
        return b.value
    if m is None:
        raise TypeError("canonical_lift of a plain integer needs a modulus")
    return b % _as_int(m)


def _check_coprime(p: int, m: int) -> None:
    if gcd(p, m) != 1:
        raise NotCoprime(p, m)


def multiplicative_order(p: int, m: int | Modulus) -> int:
    """Smallest h >= 1 with p**h == 1 (mod m)."""
    m = _as_int(m)
    _check_coprime(p, m)
    if m == 1:
        return 1
    r = p % m
    x, h = r, 1
    while x != 1:
        x = x * r % m
        h += 1
    return h


def cyclic_subgroup(p: int, m: int | Modulus) -> list[int]:
    """The powers 1, p, p^2, ... of p mod m, in generation order."""
    m = _as_int(m)
    h = multiplicative_order(p, m)
    out, x = [], 1 % m
    for _ in range(h):
        out.append(x)
        x = x * p % m
    return out


def contains_minus_one(p: int, m: int | Modulus) -> bool:
    m = _as_int(m)
    return (-1) % m in cyclic_subgroup(p, m)


def euler_phi(m: int) -> int:
    # trial division; only used for small moduli
    result, n, d = m, m, 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            result -= result // d
        d += 1
    if n > 1:
        result -= result // n
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
