"""Model F-crystals attached to a type, and the invariants read off from them.

A type is a finite set R with a permutation sigma (Frobenius), a Hodge-degree
function tau, a multiplicity function dim and a weight n.  The model crystal is
the free module on R with ``F[r] = p^tau(r) [sigma(r)]``.  Everything here is
combinatorial: slopes are orbit averages of tau, and the sub-crystal on which
F is divisible by p is described by one exponent per basis vector.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InfinityTypeViolation, NotSupersingularOrbit, OracleBoundExceeded

ORACLE_MAX_LENGTH = 10


@dataclass(frozen=True)
class TypeDatum:
    elements: tuple[Hashable, ...]
    sigma: tuple[int, ...]
    tau: tuple[int, ...]
    dim: tuple[int, ...]
    weight: int

    def __post_init__(self):
        n = len(self.elements)
        for name in ("sigma", "tau", "dim"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must be defined on all {n} elements")
        object.__setattr__(self, "elements", tuple(self.elements))
        if sorted(self.sigma) != list(range(n)):
            raise ValueError("sigma is not a permutation of the elements")
        if any(not 0 <= t <= self.weight for t in self.tau):
            raise ValueError(f"tau values must lie in 0..{self.weight}")
        if any(d < 1 for d in self.dim):
            raise ValueError("dim values must be positive")

    @classmethod
    def from_maps(cls, elements: Sequence[Hashable], sigma: Mapping, tau: Mapping,
                  weight: int, dim: Mapping | None = None) -> "TypeDatum":
        elements = tuple(elements)
        pos = {r: i for i, r in enumerate(elements)}
        return cls(
            elements,
            tuple(pos[sigma[r]] for r in elements),
            tuple(tau[r] for r in elements),
            tuple((dim or {}).get(r, 1) for r in elements),
            weight,
        )

    def __len__(self) -> int:
        return len(self.elements)

    def cycles(self) -> list[list[int]]:
        """Cycles of sigma, each starting at its smallest index, in order of that index."""
        seen = [False] * len(self)
        out = []
        for i in range(len(self)):
            if seen[i]:
                continue
            cyc, j = [], i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.sigma[j]
            out.append(cyc)
        return out

    def orbits(self) -> list["FrobeniusOrbit"]:
        out = []
        for cyc in self.cycles():
            dims = {self.dim[j] for j in cyc}
            if len(dims) != 1:
                raise ValueError("dim must be constant along sigma-orbits")
            out.append(FrobeniusOrbit(tuple(self.tau[j] for j in cyc), dims.pop(), self.elements[cyc[0]]))
        return out


def least_rotation(seq: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(seq)
    if not seq:
        return seq
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


@dataclass(frozen=True)
class FrobeniusOrbit:
    """One sigma-orbit, recorded as the cyclic sequence of tau values from ``base``."""

    tau_sequence: tuple[int, ...]
    multiplicity: int = 1
    base: Hashable = None

    def __post_init__(self):
        object.__setattr__(self, "tau_sequence", tuple(int(t) for t in self.tau_sequence))
        if not self.tau_sequence:
            raise ValueError("an orbit has length >= 1")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @classmethod
    def abstract(cls, tau_sequence: Sequence[int], multiplicity: int = 1) -> "FrobeniusOrbit":
        """An orbit with no base character, stored from its least rotation."""
        return cls(least_rotation(tau_sequence), multiplicity)

    def __len__(self) -> int:
        return len(self.tau_sequence)

    @property
    def length(self) -> int:
        return len(self.tau_sequence)

    @property
    def slope(self) -> Fraction:
        return Fraction(sum(self.tau_sequence), len(self.tau_sequence))

    def rotate(self, k: int) -> "FrobeniusOrbit":
        k %= len(self)
        s = self.tau_sequence
        return FrobeniusOrbit(s[k:] + s[:k], self.multiplicity)

    def excess(self, weight: int = 2) -> int:
        """sum(tau - weight/2); zero exactly for orbits of middle slope."""
        return 2 * sum(self.tau_sequence) - weight * len(self)


@dataclass(frozen=True)
class Sigma0Trace:
    tau_sequence: tuple[int, ...]
    partial_sums: tuple[int, ...]
    shift_n: int
    exponents_m: tuple[int, ...]
    multiplicity: int
    contribution: int

    def as_dict(self) -> dict:
        return {
            "tau": list(self.tau_sequence),
            "partial_sums": list(self.partial_sums),
            "n": self.shift_n,
            "m": list(self.exponents_m),
            "multiplicity": self.multiplicity,
            "contribution": self.contribution,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Sigma0Trace":
        return cls(tuple(d["tau"]), tuple(d["partial_sums"]), d["n"], tuple(d["m"]),
                   d["multiplicity"], d["contribution"])


def _require_middle_slope(o: FrobeniusOrbit) -> None:
    if sum(t - 1 for t in o.tau_sequence) != 0:
        raise NotSupersingularOrbit(
            f"sum(tau - 1) over {o.tau_sequence} is {sum(t - 1 for t in o.tau_sequence)}, not 0")


def sigma0_orbit(o: FrobeniusOrbit) -> Sigma0Trace:
    """Contribution of one orbit to sigma_0, with the intermediate data.

    The partial sums ``s_k = sum_{j<=k}(tau_j - 1)`` are shifted by
    ``n = -min(s)`` so the smallest becomes 0; the shifted values are the
    p-exponents of the maximal sub-crystal on which F is divisible by p
    (``exponents_m[k]`` belongs to the basis vector reached after k+1 steps).
    """
    _require_middle_slope(o)
    partial = tuple(itertools.accumulate(t - 1 for t in o.tau_sequence))
    n = -min(partial)
    ms = tuple(n + s for s in partial)
    return Sigma0Trace(o.tau_sequence, partial, n, ms, o.multiplicity, o.multiplicity * sum(ms))


def brute_force_sigma0(o: FrobeniusOrbit, max_length: int = ORACLE_MAX_LENGTH) -> int:
    """Smallest total p-exponent of a lattice sum(p^a_j M_j) stable under F/p.

    Exhaustive depth-first search over integer vectors ``0 <= a_j <= sum(tau)``
    subject to ``a_{j+1} <= a_j + tau_j - 1`` (indices mod h), pruning only
    branches whose partial sum already reaches the best total found.
    Returns the value for a single copy of the orbit.
    """
    _require_middle_slope(o)
    tau = o.tau_sequence
    h = len(tau)
    if h > max_length:
        raise OracleBoundExceeded(f"orbit length {h} exceeds the oracle bound {max_length}")
    bound = sum(tau)
    best = bound * h + 1

    def search(j: int, a: list[int], total: int) -> None:
        nonlocal best
        if total >= best:
            return
        if j == h:
            if a[0] <= a[-1] + tau[-1] - 1:
                best = total
            return
        hi = bound if j == 0 else min(bound, a[-1] + tau[j - 1] - 1)
        for v in range(hi + 1):
            a.append(v)
            search(j + 1, a, total + v)
            a.pop()

    search(0, [], 0)
    if best > bound * h:
        raise AssertionError(f"no F-stable lattice found for {tau}")
    return best


@dataclass(frozen=True)
class NewtonPolygon:
    """A multiset of slopes; the polygon is the graph of their sorted partial sums."""

    slopes: tuple[tuple[Fraction, int], ...]
    weight: int = 2

    @classmethod
    def from_counts(cls, counts: Mapping[Fraction, int] | Iterable[tuple[Fraction, int]], weight: int = 2):
        c: Counter = Counter()
        for s, k in (counts.items() if isinstance(counts, Mapping) else counts):
            if k:
                c[Fraction(s)] += int(k)
        return cls(tuple(sorted(c.items())), weight)

    def as_counter(self) -> Counter:
        return Counter(dict(self.slopes))

    @property
    def rank(self) -> int:
        return sum(k for _, k in self.slopes)

    def ordinates(self) -> list[Fraction]:
        """Polygon heights at x = 0, 1, ..., rank."""
        ys = [Fraction(0)]
        for s, k in self.slopes:
            for _ in range(k):
                ys.append(ys[-1] + s)
        return ys

    def vertices(self) -> list[tuple[int, Fraction]]:
        pts, x, y = [(0, Fraction(0))], 0, Fraction(0)
        for s, k in self.slopes:
            x += k
            y += s * k
            pts.append((x, y))
        return pts

    def is_symmetric(self) -> bool:
        c = self.as_counter()
        return all(c[self.weight - s] == k for s, k in c.items())

    def height(self, x) -> Fraction:
        """Ordinate of the polygon at abscissa 0 <= x <= rank."""
        y, x0 = Fraction(0), 0
        for s, k in self.slopes:
            if x <= x0 + k:
                return y + s * (x - x0)
            x0 += k
            y += s * k
        return y

    def lies_on_or_above(self, other: "NewtonPolygon") -> bool:
        # the difference is piecewise linear, so checking the joint breakpoints suffices
        if self.rank != other.rank or self.vertices()[-1] != other.vertices()[-1]:
            return False
        xs = {x for x, _ in self.vertices()} | {x for x, _ in other.vertices()}
        return all(self.height(x) >= other.height(x) for x in xs)

    def all_slopes_equal(self, value) -> bool:
        return all(s == value for s, _ in self.slopes)

    def as_list(self) -> list[dict]:
        return [{"slope": str(s), "multiplicity": k} for s, k in self.slopes]

    @classmethod
    def from_list(cls, rows: Iterable[Mapping], weight: int = 2) -> "NewtonPolygon":
        return cls.from_counts([(Fraction(r["slope"]), r["multiplicity"]) for r in rows], weight)


def hodge_polygon(hodge_numbers: Sequence[int]) -> NewtonPolygon:
    """Polygon with slope i repeated h^{n-i,i} times."""
    return NewtonPolygon.from_counts({Fraction(i): h for i, h in enumerate(hodge_numbers)},
                                     len(hodge_numbers) - 1)


def type_newton_slopes(t: TypeDatum) -> NewtonPolygon:
    """Slopes from sigma-orbits: each orbit contributes its tau-average, len * dim times."""
    counts: Counter = Counter()
    for o in t.orbits():
        counts[o.slope] += o.length * o.multiplicity
    return NewtonPolygon.from_counts(counts, t.weight)


@dataclass(frozen=True)
class CrystalModel:
    """Free module on a labelled basis with ``F e_i = p^exponents[i] e_{sigma[i]}``.

    Basis elements are the elements of the type repeated ``dim`` times.
    """

    labels: tuple[tuple[Hashable, int], ...]
    sigma: tuple[int, ...]
    exponents: tuple[int, ...]
    weight: int
    unit_root: bool = False

    @property
    def rank(self) -> int:
        return len(self.labels)

    def frobenius(self, i: int) -> tuple[int, int]:
        """Image of basis vector i as (p-exponent, target index)."""
        return self.exponents[i], self.sigma[i]

    def frobenius_power(self, i: int, u: int) -> tuple[int, int]:
        """F^u on basis vector i as (p-exponent, target index)."""
        e = 0
        for _ in range(u):
            de, i = self.frobenius(i)
            e += de
        return e, i

    def renormalised(self) -> "CrystalModel":
        """The unit-root crystal obtained by dividing F by p^tau on each summand."""
        return CrystalModel(self.labels, self.sigma, (0,) * self.rank, self.weight, True)

    def slopes(self) -> NewtonPolygon:
        """Slopes from the valuations of F^u on each cycle of length u."""
        seen, counts = set(), Counter()
        for i in range(self.rank):
            if i in seen:
                continue
            u, j = 0, i
            while True:
                seen.add(j)
                j = self.sigma[j]
                u += 1
                if j == i:
                    break
            t, back = self.frobenius_power(i, u)
            assert back == i
            counts[Fraction(t, u)] += u
        return NewtonPolygon.from_counts(counts, 0 if self.unit_root else self.weight)


def model_crystal(t: TypeDatum, unit_root: bool = False) -> CrystalModel:
    labels, index = [], {}
    for i, r in enumerate(t.elements):
        for copy in range(t.dim[i]):
            index[(i, copy)] = len(labels)
            labels.append((r, copy))
    sigma = tuple(index[(t.sigma[i], c)] for i, _ in enumerate(t.elements) for c in range(t.dim[i]))
    exps = tuple(t.tau[i] for i, _ in enumerate(t.elements) for _ in range(t.dim[i]))
    model = CrystalModel(tuple(labels), sigma, exps, t.weight)
    return model.renormalised() if unit_root else model


@dataclass(frozen=True)
class HeckeAlgebraicPart:
    """Exponent data of lambda -> prod rho(N(lambda))^tau(rho)."""

    exponents: dict = field(hash=False)
    weight: int
    infinity_type_ok: bool


def hecke_algebraic_part(t: TypeDatum, involution: Sequence[int] | Callable[[int], int]) -> HeckeAlgebraicPart:
    """Exponent map of the algebraic part, after checking tau(iota(r)) == n - tau(r).

    ``involution`` is complex conjugation on the elements, given as an index
    permutation or a function on indices.
    """
    iota = involution if callable(involution) else involution.__getitem__
    bad = [t.elements[i] for i in range(len(t)) if t.tau[iota(i)] != t.weight - t.tau[i]]
    if bad:
        raise InfinityTypeViolation(bad)
    return HeckeAlgebraicPart({r: t.tau[i] for i, r in enumerate(t.elements)}, t.weight, True)
