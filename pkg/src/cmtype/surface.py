"""Frobenius orbits and crystalline invariants of Fermat surfaces.

Frobenius at a prime p not dividing m acts on characters by ``b -> p*b``.  The
surface is supersingular at p exactly when every orbit has tau-average 1, and
then ``disc NS = (-1)^(b2-1) p^(2 sigma_0)`` with sigma_0 the sum of the orbit
contributions computed in :func:`cmtype.crystal.sigma0_orbit`.

Orbit discovery works on a whole :class:`CharacterSet` at once: Frobenius is
a permutation of row indices, and iterating it ``ord(p mod m)`` times gives
each row its orbit minimum (the lexicographically least member, since rows are
sorted).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .characters import (
    DEFAULT_MAX_M,
    CharacterSet,
    FermatCharacter,
    HodgeVector,
    enumerate_characters,
    hodge_numbers,
)
from .crystal import (
    FrobeniusOrbit,
    NewtonPolygon,
    TypeDatum,
    hodge_polygon,
    least_rotation,
    sigma0_orbit,
)
from .errors import NotSupersingular
from .residues import Modulus, _check_coprime, contains_minus_one, multiplicative_order


def _modulus(m) -> int:
    return m.m if isinstance(m, Modulus) else Modulus(m).m


def orbit_of(c: FermatCharacter, p: int) -> FrobeniusOrbit:
    """tau along c, pc, p^2 c, ... until the orbit closes, starting at c itself."""
    _check_coprime(p, c.m)
    seq, d = [], c
    while True:
        seq.append(d.tau())
        d = d.scale(p)
        if d == c:
            break
    return FrobeniusOrbit(tuple(seq), 1, c)


def frobenius_permutation(s: CharacterSet, p: int) -> np.ndarray:
    """Row index of p*c for every row c; s must be stable under multiplication by p."""
    _check_coprime(p, s.m)
    perm = s.indices_of(s.table * p)
    if (perm < 0).any():
        raise ValueError("character set is not stable under Frobenius")
    return perm


def _orbit_minima(perm: np.ndarray, steps: int) -> np.ndarray:
    base = np.arange(len(perm))
    cur = base
    for _ in range(steps - 1):
        cur = perm[cur]
        base = np.minimum(base, cur)
    return base


@dataclass(frozen=True)
class OrbitTable:
    """All Frobenius orbits of a character set, grouped by length.

    ``bases[L]`` holds the base rows of the orbits of length L and
    ``sequences[L]`` the matching ``(count, L)`` array of tau values.
    """

    characters: CharacterSet
    p: int
    bases: dict = field(repr=False)
    sequences: dict = field(repr=False)

    def orbits(self) -> list[FrobeniusOrbit]:
        rows = []
        for L, bases in self.bases.items():
            for b, seq in zip(bases.tolist(), self.sequences[L].tolist()):
                rows.append((b, seq))
        rows.sort()
        cs = self.characters
        return [FrobeniusOrbit(tuple(seq), 1, cs.character(b)) for b, seq in rows]

    def type_counts(self) -> list[tuple[tuple[int, ...], int, int]]:
        """(least-rotation tau type, number of orbits, first base row), sorted by first base."""
        groups: dict = {}
        for L, bases in self.bases.items():
            seqs = self.sequences[L]
            for b, seq in zip(bases.tolist(), seqs.tolist()):
                key = least_rotation(seq)
                if key in groups:
                    groups[key][0] += 1
                    groups[key][1] = min(groups[key][1], b)
                else:
                    groups[key] = [1, b]
        return sorted(((k, n, b) for k, (n, b) in groups.items()), key=lambda r: r[2])

    def __len__(self) -> int:
        return sum(len(b) for b in self.bases.values())


def orbit_table(s: CharacterSet, p: int) -> OrbitTable:
    perm = frobenius_permutation(s, p)
    f = multiplicative_order(p, s.m)
    minima = _orbit_minima(perm, f)
    is_base = minima == np.arange(len(perm))
    lengths = np.bincount(minima, minlength=len(perm))
    bases, seqs = {}, {}
    for L in np.unique(lengths[is_base]).tolist():
        b = np.flatnonzero(is_base & (lengths == L))
        cols, cur = [], b
        for _ in range(L):
            cols.append(s.taus[cur])
            cur = perm[cur]
        bases[L] = b
        seqs[L] = np.stack(cols, axis=1)
    return OrbitTable(s, p, bases, seqs)


def all_orbits(m, p: int, max_m: int = DEFAULT_MAX_M) -> list[FrobeniusOrbit]:
    """Orbits of Frobenius on the characters of H^2, ordered by their least character."""
    m = _modulus(m)
    _check_coprime(p, m)
    return orbit_table(enumerate_characters(m, max_m), p).orbits()


def orbit_slopes(s: CharacterSet, p: int) -> np.ndarray:
    """Orbit tau-sum over f = ord(p) steps for each row; the slope is this over f."""
    perm = frobenius_permutation(s, p)
    f = multiplicative_order(p, s.m)
    total = s.taus.copy()
    cur = np.arange(len(s))
    for _ in range(f - 1):
        cur = perm[cur]
        total += s.taus[cur]
    return total


def set_newton_slopes(s: CharacterSet, p: int) -> NewtonPolygon:
    f = multiplicative_order(p, s.m)
    vals, counts = np.unique(orbit_slopes(s, p), return_counts=True)
    return NewtonPolygon.from_counts({Fraction(int(v), f): int(k) for v, k in zip(vals, counts)})


def newton_slopes(m, p: int, max_m: int = DEFAULT_MAX_M) -> NewtonPolygon:
    m = _modulus(m)
    _check_coprime(p, m)
    return set_newton_slopes(enumerate_characters(m, max_m), p)


@dataclass(frozen=True)
class SupersingularityVerdict:
    supersingular: bool
    reason: str

    def __bool__(self) -> bool:
        return self.supersingular


SHORTCUT_REASON = "-1 lies in the subgroup generated by p"


def _verdict(s: CharacterSet, p: int) -> SupersingularityVerdict:
    if contains_minus_one(p, s.m):
        return SupersingularityVerdict(True, SHORTCUT_REASON)
    if set_newton_slopes(s, p).all_slopes_equal(1):
        return SupersingularityVerdict(True, "every orbit has tau-average 1")
    return SupersingularityVerdict(False, "some orbit has tau-average != 1")


def is_supersingular(m, p: int, max_m: int = DEFAULT_MAX_M) -> SupersingularityVerdict:
    m = _modulus(m)
    _check_coprime(p, m)
    return _verdict(enumerate_characters(m, max_m), p)


def sigma0_of_table(table: OrbitTable) -> int:
    total = 0
    for key, count, _ in table.type_counts():
        total += count * sigma0_orbit(FrobeniusOrbit(key)).contribution
    return total


@dataclass(frozen=True)
class Discriminant:
    sign: int
    prime: int
    exponent: int

    @property
    def value(self) -> int:
        return self.sign * self.prime ** self.exponent

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.prime}^{self.exponent}"


def disc_neron_severi(m, p: int, max_m: int = DEFAULT_MAX_M) -> Discriminant:
    m = _modulus(m)
    _check_coprime(p, m)
    s = enumerate_characters(m, max_m)
    if not _verdict(s, p):
        raise NotSupersingular(f"X_{m} is not supersingular at p={p}; rank NS < b2")
    sigma0 = sigma0_of_table(orbit_table(s, p))
    return Discriminant((-1) ** (len(s) - 1), p, 2 * sigma0)


def fermat_type_datum(m, p: int, max_m: int = DEFAULT_MAX_M) -> TypeDatum:
    """The type of H^2 of the Fermat surface with Frobenius at p (dim = 1 throughout)."""
    m = _modulus(m)
    s = enumerate_characters(m, max_m)
    perm = frobenius_permutation(s, p)
    return TypeDatum(tuple(s), tuple(perm.tolist()), tuple(s.taus.tolist()), (1,) * len(s), 2)


def conjugation_indices(s: CharacterSet) -> list[int]:
    return s.indices_of(-s.table).tolist()


@dataclass
class OrbitType:
    tau_type: tuple[int, ...]
    count: int
    base: FermatCharacter
    sigma0_contribution: int | None

    @property
    def length(self) -> int:
        return len(self.tau_type)

    @property
    def slope(self) -> Fraction:
        return Fraction(sum(self.tau_type), len(self.tau_type))


@dataclass
class CrystalSummary:
    m: int
    p: int
    b2: int
    hodge: HodgeVector
    orbit_types: list[OrbitType]
    newton: NewtonPolygon
    supersingular: bool
    reason: str
    sigma0: int | None
    disc_sign: int | None
    disc_p_exponent: int | None
    newton_above_hodge: bool
    orbits: list[FrobeniusOrbit] | None = None

    @property
    def n_orbits(self) -> int:
        return sum(t.count for t in self.orbit_types)

    @property
    def discriminant(self) -> Discriminant | None:
        if self.disc_p_exponent is None:
            return None
        return Discriminant(self.disc_sign, self.p, self.disc_p_exponent)


def summarize(s: CharacterSet, p: int, keep_orbits: bool = False) -> CrystalSummary:
    """Full crystalline summary of a Frobenius-stable character set."""
    _check_coprime(p, s.m)
    table = orbit_table(s, p)
    verdict = _verdict(s, p)
    hv = hodge_numbers(s)
    newton = set_newton_slopes(s, p)
    types = []
    for key, count, base in table.type_counts():
        contrib = sigma0_orbit(FrobeniusOrbit(key)).contribution if sum(key) == len(key) else None
        types.append(OrbitType(key, count, s.character(base), contrib))
    sigma0 = sign = exponent = None
    if verdict.supersingular:
        sigma0 = sum(t.count * t.sigma0_contribution for t in types)
        sign = (-1) ** (len(s) - 1)
        exponent = 2 * sigma0
    return CrystalSummary(
        m=s.m, p=p, b2=len(s), hodge=hv, orbit_types=types, newton=newton,
        supersingular=verdict.supersingular, reason=verdict.reason,
        sigma0=sigma0, disc_sign=sign, disc_p_exponent=exponent,
        newton_above_hodge=newton.lies_on_or_above(hodge_polygon(hv.as_tuple())),
        orbits=table.orbits() if keep_orbits else None,
    )


def analyze(m, p: int, max_m: int = DEFAULT_MAX_M, keep_orbits: bool = False) -> CrystalSummary:
    m = _modulus(m)
    _check_coprime(p, m)
    return summarize(enumerate_characters(m, max_m), p, keep_orbits)
