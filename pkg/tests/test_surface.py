from fractions import Fraction
from math import gcd

import pytest

from cmtype.characters import FermatCharacter, enumerate_characters, hodge_numbers
from cmtype.crystal import hodge_polygon
from cmtype.errors import NotCoprime, NotSupersingular
from cmtype.residues import contains_minus_one, is_prime, multiplicative_order
from cmtype.surface import (
    SHORTCUT_REASON,
    all_orbits,
    analyze,
    disc_neron_severi,
    is_supersingular,
    newton_slopes,
    orbit_of,
)


def _naive_orbits(m, p):
    """Orbits by repeated scaling of tuples, no index tables."""
    seen, out = set(), []
    for c in enumerate_characters(m):
        if c.b in seen:
            continue
        o = orbit_of(c, p)
        d = c
        for _ in range(o.length):
            seen.add(d.b)
            d = d.scale(p)
        out.append(o)
    return out


def test_orbit_examples():
    assert orbit_of(FermatCharacter(7, (1, 1, 1, 4)), 3).tau_sequence == (0, 1, 0, 2, 1, 2)
    assert orbit_of(FermatCharacter(13, (3, 3, 3, 4)), 5).tau_sequence == (0, 0, 2, 2)
    assert orbit_of(FermatCharacter(9, (0, 0, 0, 0)), 2).tau_sequence == (1,)


def test_orbit_not_coprime():
    with pytest.raises(NotCoprime):
        orbit_of(FermatCharacter(6, (1, 1, 1, 3)), 3)


def test_m5_p2_types():
    orbits = all_orbits(5, 2)
    special = [o for o in orbits if set(o.tau_sequence) != {1}]
    assert len(special) == 4
    for o in special:
        s = o.tau_sequence
        assert any(s[k:] + s[:k] == (0, 1, 2, 1) for k in range(4))


def test_m3_all_flat():
    assert all(set(o.tau_sequence) == {1} for o in all_orbits(3, 2))


def test_m1():
    orbits = all_orbits(1, 7)
    assert [o.tau_sequence for o in orbits] == [(1,)]


@pytest.mark.parametrize("m, p", [(5, 2), (7, 3), (9, 2), (12, 5), (13, 5), (8, 3), (10, 3)])
def test_orbits_partition_and_match_naive(m, p):
    orbits = all_orbits(m, p)
    assert sum(o.length for o in orbits) == len(enumerate_characters(m))
    f = multiplicative_order(p, m)
    assert all(f % o.length == 0 for o in orbits)
    naive = sorted((o.base.b, o.tau_sequence) for o in _naive_orbits(m, p))
    assert sorted((o.base.b, o.tau_sequence) for o in orbits) == naive


def test_ordinary_m5_slopes():
    poly = newton_slopes(5, 11)
    assert poly.as_counter() == {Fraction(0): 4, Fraction(1): 45, Fraction(2): 4}


@pytest.mark.parametrize("m, p, expected", [(5, 2, True), (7, 3, True), (5, 11, False), (5, 3, True)])
def test_supersingular_examples(m, p, expected):
    assert bool(is_supersingular(m, p)) is expected


def test_verdict_reason():
    assert is_supersingular(5, 2).reason == SHORTCUT_REASON


def test_supersingular_without_shortcut_matches_slopes():
    # m=7, p=2: <2> = {1,2,4} does not contain -1 and h20 = 10 > 0
    assert not contains_minus_one(2, 7)
    assert not is_supersingular(7, 2)


@pytest.mark.parametrize("p", [2, 3, 7, 13, 17, 23])
def test_disc_m5_inert(p):
    d = disc_neron_severi(5, p)
    assert (d.sign, d.exponent) == (1, 16)
    assert d.value == p**16


@pytest.mark.parametrize("p", [19, 29, 59])
def test_disc_m5_minus_one(p):
    d = disc_neron_severi(5, p)
    assert (d.sign, d.exponent) == (1, 8)


def test_disc_flat_case():
    # m=3: every tau is 1, so no contribution
    assert disc_neron_severi(3, 2).exponent == 0
    assert disc_neron_severi(3, 2).sign == 1


def test_disc_not_supersingular():
    with pytest.raises(NotSupersingular):
        disc_neron_severi(5, 11)


PRIMES = [q for q in range(2, 60) if is_prime(q)]


@pytest.mark.parametrize("m", list(range(1, 31)))
def test_newton_properties(m):
    hv = hodge_numbers(enumerate_characters(m))
    hp = hodge_polygon(hv.as_tuple())
    g = (m - 1) * (m - 2) * (m - 3) // 6
    assert hv.h20 == hv.h02 == g
    for p in PRIMES:
        if gcd(p, m) != 1:
            continue
        poly = newton_slopes(m, p)
        assert poly.is_symmetric()
        assert poly.lies_on_or_above(hp)
        assert poly.vertices()[-1] == hp.vertices()[-1]


def test_summary_m5():
    s = analyze(5, 2)
    assert s.b2 == 53 and s.hodge.as_tuple() == (4, 45, 4)
    assert s.sigma0 == 8 and s.disc_sign == 1 and s.disc_p_exponent == 16
    types = {t.tau_type: t.count for t in s.orbit_types}
    assert types[(0, 1, 2, 1)] == 4
    assert s.newton_above_hodge


def test_summary_ordinary():
    s = analyze(5, 11)
    assert not s.supersingular and s.sigma0 is None and s.discriminant is None
