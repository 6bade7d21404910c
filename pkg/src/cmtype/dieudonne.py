"""Presentations of H^2(X, WO) for a single Frobenius orbit of weight 2.

Start from the model crystal of the orbit, ``F e_j = p^tau_j e_{j+1}``.  The
module H^2(X, WO) is its extension of scalars to the Dieudonne ring (power
series in V, ``FV = VF = p``) modulo ``m - V n`` whenever ``F m = p n``.  Every
basis vector with ``tau_j >= 1`` is therefore ``V p^(tau_j - 1) e_{j+1}`` and
can be eliminated; the survivors ``e_j`` with ``tau_j = 0`` generate.

The rewriting runs in four stages (elimination, chaining, absorption,
p-reduction).  Terms are kept as ``V^v p^t F^f g``; p-reduction trades
``p`` for ``VF``, which is legitimate because no scalars other than integers
occur, so F and V commute here.  A relation ``X = V^k F^j X`` with ``k >= 1``
forces ``X = 0`` since ``1 - V^k F^j`` is a unit in the V-adically complete
ring.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

from .crystal import FrobeniusOrbit
from .errors import NonWeightTwo


@dataclass(frozen=True)
class RewriteTerm:
    """The element ``V^v_exp p^p_exp F^f_exp target``."""

    v_exp: int
    p_exp: int
    target: str
    f_exp: int = 0

    def p_reduced(self) -> "RewriteTerm":
        return RewriteTerm(self.v_exp + self.p_exp, 0, self.target, self.f_exp + self.p_exp)

    def render(self) -> str:
        parts = []
        for sym, e in (("V", self.v_exp), ("p", self.p_exp), ("F", self.f_exp)):
            if e == 1:
                parts.append(sym)
            elif e > 1:
                parts.append(f"{sym}^{e}")
        return " ".join(parts + [self.target])


@dataclass(frozen=True)
class Relation:
    """``F^f_power generator = rhs`` (rhs ``None`` means 0)."""

    generator: str
    f_power: int
    rhs: RewriteTerm | None

    def render(self) -> str:
        lhs = "F" if self.f_power == 1 else f"F^{self.f_power}"
        return f"{lhs} {self.generator} = {self.rhs.render() if self.rhs else '0'}"

    def as_dict(self) -> dict:
        d = {"generator": self.generator, "f_power": self.f_power, "rhs": None}
        if self.rhs is not None:
            d["rhs"] = {"v": self.rhs.v_exp, "p": self.rhs.p_exp, "f": self.rhs.f_exp,
                        "target": self.rhs.target}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Relation":
        r = d["rhs"]
        rhs = None if r is None else RewriteTerm(r["v"], r["p"], r["target"], r["f"])
        return cls(d["generator"], d["f_power"], rhs)


@dataclass(frozen=True)
class DieudonnePresentation:
    tau_sequence: tuple[int, ...]
    generators: tuple[str, ...]
    relations: tuple[Relation, ...]
    dimension: int
    truncated: bool = False
    # position in the orbit of each generator
    positions: tuple[int, ...] = field(default=(), compare=False)

    def render(self) -> str:
        if not self.generators:
            return "0 (no generators)"
        return "; ".join(r.render() for r in self.relations)

    def __str__(self) -> str:
        return self.render()

    def mentions_p(self) -> bool:
        return any(r.rhs is not None and r.rhs.p_exp for r in self.relations)

    def as_dict(self) -> dict:
        return {
            "tau": list(self.tau_sequence),
            "generators": list(self.generators),
            "relations": [r.as_dict() for r in self.relations],
            "dimension": self.dimension,
            "truncated": self.truncated,
            "text": self.render(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DieudonnePresentation":
        return cls(tuple(d["tau"]), tuple(d["generators"]),
                   tuple(Relation.from_dict(r) for r in d["relations"]), d["dimension"], d["truncated"])


def _tau_of(o: FrobeniusOrbit | Sequence[int]) -> tuple[int, ...]:
    tau = tuple(o.tau_sequence) if isinstance(o, FrobeniusOrbit) else tuple(int(t) for t in o)
    bad = [t for t in tau if t not in (0, 1, 2)]
    if bad or not tau:
        raise NonWeightTwo(f"tau values must lie in {{0,1,2}}, got {tau}")
    return tau


def _labels(k: int) -> list[str]:
    letters = string.ascii_lowercase
    return [letters[i] if i < 26 else f"g{i}" for i in range(k)]


def truncation_bound(tau: Sequence[int]) -> int:
    return 4 * len(tau) * max(max(tau), 1)


def formal_group_presentation(o: FrobeniusOrbit | Sequence[int]) -> DieudonnePresentation:
    tau = _tau_of(o)
    h = len(tau)
    zeros = [j for j in range(h) if tau[j] == 0]
    if not zeros:
        return DieudonnePresentation(tau, (), (), 0)

    # Stages 1-2: F e_j = e_{j+1} for a generator; walk through eliminated
    # vectors e_k = V p^(tau_k - 1) e_{k+1} until the next generator.
    chained = {}
    for j in zeros:
        k, s, t = (j + 1) % h, 0, 0
        while tau[k] != 0:
            s += 1
            t += tau[k] - 1
            k = (k + 1) % h
        chained[j] = (s, t, k)

    # Stage 3: F g_j = g_k with nothing in between makes g_k = F g_j redundant.
    absorbed_into = {k: j for j, (s, t, k) in chained.items() if s == 0 and t == 0 and k != j}
    if len(absorbed_into) == len(zeros):
        # every generator is F of the previous one; keep the first
        del absorbed_into[zeros[0]]
    head_of, depth = {}, {}
    for j in zeros:
        i, d = j, 0
        while i in absorbed_into:
            i = absorbed_into[i]
            d += 1
        head_of[j], depth[j] = i, d
    heads = [j for j in zeros if head_of[j] == j]
    # F-power of each head's relation: one more than the depth of its chain's tail
    power = {hd: 1 + max(depth[j] for j in zeros if head_of[j] == hd) for hd in heads}
    tails = {hd: max((j for j in zeros if head_of[j] == hd), key=lambda j: depth[j]) for hd in heads}

    # relation per head: F^power g = V^s p^t F^depth(target) head(target)
    rel = {}
    for hd in heads:
        s, t, k = chained[tails[hd]]
        rel[hd] = RewriteTerm(s, t, head_of[k], depth[k])

    # Stage 4: p-reduction with V-adic truncation
    bound = truncation_bound(tau)
    truncated = False
    changed = True
    while changed:
        changed = False
        for hd in heads:
            term = rel[hd]
            if term is None or term.p_exp == 0:
                continue
            new, hit_bound = _reduce(hd, term, rel, power, bound)
            truncated |= hit_bound
            rel[hd] = new
            changed = True

    names = dict(zip(heads, _labels(len(heads))))
    relations = []
    for hd in heads:
        term = rel[hd]
        if term is not None:
            term = RewriteTerm(term.v_exp, term.p_exp, names[term.target], term.f_exp)
        relations.append(Relation(names[hd], power[hd], term))
    return DieudonnePresentation(
        tau, tuple(names[hd] for hd in heads), tuple(relations),
        sum(power.values()), truncated, tuple(heads),
    )


def _reduce(hd: int, term: RewriteTerm, rel: dict, power: dict, bound: int) -> tuple[RewriteTerm | None, bool]:
    """Rewrite ``F^power[hd] g_hd = term`` until it has no p, collapses to 0, or hits the bound."""
    cur = term.p_reduced()
    while True:
        if cur.v_exp >= bound:
            return None, True
        g, f = cur.target, cur.f_exp
        if f < power[g]:
            return cur, False
        if g == hd:
            # V^v F^(f - r) X with X the left-hand side itself, v >= 1
            return None, False
        sub = rel[g]
        if sub is None:
            return None, False
        sub = sub.p_reduced()
        cur = RewriteTerm(cur.v_exp + sub.v_exp, 0, sub.target, f - power[g] + sub.f_exp)


def formal_group_dimension(o: FrobeniusOrbit | Sequence[int]) -> int:
    return sum(1 for t in _tau_of(o) if t == 0)
