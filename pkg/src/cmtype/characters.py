"""Characters of the diagonal group occurring in H^2 of the Fermat surface of degree m.

A character is a 4-tuple ``b`` of residues mod m with ``sum(b) == 0``; the ones
occurring in H^2 have either every component nonzero or every component zero.
The Hodge degree of a nonzero character is ``sum(<b_i>)/m - 1``, so it lies in
{0, 1, 2}; the zero character is the hyperplane class and has degree 1.

Bulk work goes through :class:`CharacterSet`, which keeps the characters as a
lexicographically sorted ``(N, 4)`` integer array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded
from .residues import Modulus

DEFAULT_MAX_M = 200


@dataclass(frozen=True, order=True)
class FermatCharacter:
    m: int
    b: tuple[int, int, int, int]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        b = tuple(int(x) % self.m for x in self.b)
        if len(b) != 4:
            raise ValueError("a character has exactly four components")
        object.__setattr__(self, "b", b)
        if sum(b) % self.m:
            raise ValueError(f"{b} does not sum to 0 mod {self.m}")
        nonzero = [x != 0 for x in b]
        if any(nonzero) and not all(nonzero):
            raise ValueError(f"{b} mixes zero and nonzero components; it does not occur in H^2")

    @classmethod
    def of(cls, *b: int, m: int) -> "FermatCharacter":
        if len(b) == 1:
            b = tuple(b[0])
        return cls(m, tuple(b))

    @property
    def is_zero(self) -> bool:
        return not any(self.b)

    def tau(self) -> int:
        return tau(self)

    def conjugate(self) -> "FermatCharacter":
        return conjugate(self)

    def scale(self, k: int) -> "FermatCharacter":
        return FermatCharacter(self.m, tuple(k * x for x in self.b))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.b)) + ")"


def tau(c: FermatCharacter) -> int:
    if c.is_zero:
        return 1
    return sum(c.b) // c.m - 1


def conjugate(c: FermatCharacter) -> FermatCharacter:
    return c.scale(-1)


def iter_characters(m: int) -> Iterator[FermatCharacter]:
    """Stream the characters of H^2 in lexicographic order, without materialising them."""
    Modulus(m)
    yield FermatCharacter(m, (0, 0, 0, 0))
    for b0 in range(1, m):
        for b1 in range(1, m):
            for b2 in range(1, m):
                b3 = (-(b0 + b1 + b2)) % m
                if b3:
                    yield FermatCharacter(m, (b0, b1, b2, b3))


def _character_table(m: int) -> np.ndarray:
    r = np.arange(1, m, dtype=np.int64)
    b1, b2, b3 = (a.ravel() for a in np.meshgrid(r, r, r, indexing="ij"))
    b0 = (-(b1 + b2 + b3)) % m
    keep = b0 != 0
    nonzero = np.stack([b0[keep], b1[keep], b2[keep], b3[keep]], axis=1)
    table = np.vstack([np.zeros((1, 4), dtype=np.int64), nonzero])
    return _lex_sorted(table)


def _lex_sorted(table: np.ndarray) -> np.ndarray:
    if len(table) == 0:
        return table.reshape(0, 4)
    order = np.lexsort(table[:, ::-1].T)
    return table[order]


@dataclass(frozen=True, eq=False)
class CharacterSet:
    """A lexicographically sorted, duplicate-free set of characters mod m."""

    m: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64).reshape(-1, 4) % self.m
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_characters(cls, m: int, chars: Iterable[FermatCharacter | Sequence[int]]) -> "CharacterSet":
        rows = {tuple(c.b if isinstance(c, FermatCharacter) else FermatCharacter(m, tuple(c)).b) for c in chars}
        return cls(m, _lex_sorted(np.array(sorted(rows), dtype=np.int64).reshape(-1, 4)))

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self) -> Iterator[FermatCharacter]:
        for row in self.table.tolist():
            yield FermatCharacter(self.m, tuple(row))

    def __eq__(self, other) -> bool:
        return isinstance(other, CharacterSet) and self.m == other.m and np.array_equal(self.table, other.table)

    def __contains__(self, c: FermatCharacter) -> bool:
        return c.m == self.m and self.index_of(c) >= 0

    @property
    def characters(self) -> list[FermatCharacter]:
        return list(self)

    @cached_property
    def taus(self) -> np.ndarray:
        sums = self.table.sum(axis=1)
        t = sums // self.m - 1
        t[sums == 0] = 1
        return t

    @cached_property
    def _keys(self) -> np.ndarray:
        # b0 is determined by b1..b3, so three components are a complete key
        m = self.m
        return (self.table[:, 1] * m + self.table[:, 2]) * m + self.table[:, 3]

    @cached_property
    def _lookup(self) -> np.ndarray:
        lut = np.full(self.m ** 3, -1, dtype=np.int64)
        lut[self._keys] = np.arange(len(self))
        return lut

    def index_of(self, c: FermatCharacter | Sequence[int]) -> int:
        b = c.b if isinstance(c, FermatCharacter) else tuple(x % self.m for x in c)
        return int(self._lookup[(b[1] * self.m + b[2]) * self.m + b[3]])

    def indices_of(self, table: np.ndarray) -> np.ndarray:
        """Row indices of the characters in ``table`` (-1 where absent)."""
        t = np.asarray(table) % self.m
        return self._lookup[(t[:, 1] * self.m + t[:, 2]) * self.m + t[:, 3]]

    def character(self, i: int) -> FermatCharacter:
        return FermatCharacter(self.m, tuple(self.table[i].tolist()))

    def subset(self, mask: np.ndarray) -> "CharacterSet":
        return CharacterSet(self.m, self.table[mask])


@dataclass(frozen=True)
class HodgeVector:
    h20: int
    h11: int
    h02: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.h20, self.h11, self.h02)

    @property
    def b2(self) -> int:
        return self.h20 + self.h11 + self.h02


def enumerate_characters(m: int | Modulus, max_m: int = DEFAULT_MAX_M) -> CharacterSet:
    m = m.m if isinstance(m, Modulus) else Modulus(m).m
    if m > max_m:
        raise CapExceeded(f"m={m} exceeds the enumeration cap m <= {max_m} "
                          f"(|T| would be {expected_size(m)})")
    return CharacterSet(m, _character_table(m))


def expected_size(m: int) -> int:
    """Closed form for |T|; valid for m >= 2 (m = 1 gives 1)."""
    if m == 1:
        return 1
    return m ** 3 - 4 * m ** 2 + 6 * m - 2


def hodge_numbers(s: CharacterSet) -> HodgeVector:
    counts = np.bincount(s.taus, minlength=3)
    return HodgeVector(int(counts[0]), int(counts[1]), int(counts[2]))


def geometric_genus(m: int) -> int:
    return (m - 1) * (m - 2) * (m - 3) // 6 if m >= 3 else 0


def parse_subgroup(gens: Iterable[Sequence[int]], m: int) -> list[tuple[int, int, int, int]]:
    out = []
    for g in gens:
        g = tuple(int(x) % m for x in g)
        if len(g) != 4:
            raise ValueError(f"subgroup generator {g} must have four components")
        out.append(g)
    return out


def invariant_characters(s: CharacterSet, subgroup: Iterable[Sequence[int]]) -> CharacterSet:
    """Characters trivial on every generator of a subgroup of the diagonal group.

    A generator ``a`` acts through ``sum(b_i * a_i) mod m``; since every
    character sums to zero this only depends on ``a`` modulo the diagonal.
    """
    gens = parse_subgroup(subgroup, s.m)
    mask = np.ones(len(s), dtype=bool)
    for a in gens:
        mask &= (s.table @ np.array(a, dtype=np.int64)) % s.m == 0
    return s.subset(mask)
