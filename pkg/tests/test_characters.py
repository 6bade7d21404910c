import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmtype.characters import (
    CharacterSet,
    FermatCharacter,
    conjugate,
    enumerate_characters,
    expected_size,
    geometric_genus,
    hodge_numbers,
    invariant_characters,
    iter_characters,
    tau,
)
from cmtype.errors import CapExceeded


def test_sizes_against_brute_force(brute):
    for m in range(1, 9):
        assert [c.b for c in enumerate_characters(m)] == brute(m)


def test_small_sizes():
    # 4^3 - #{b1+b2+b3 = 0 with b_i in 1..4} + 1 = 64 - 12 + 1
    assert len(enumerate_characters(5)) == 53
    assert len(enumerate_characters(3)) == 7
    assert [c.b for c in enumerate_characters(1)] == [(0, 0, 0, 0)]


@pytest.mark.parametrize("m", range(2, 31))
def test_closed_form_size(m):
    assert len(enumerate_characters(m)) == expected_size(m) == m**3 - 4 * m**2 + 6 * m - 2


def test_streaming_matches_table():
    for m in (1, 2, 5, 9):
        assert list(iter_characters(m)) == enumerate_characters(m).characters


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_characters(201)
    with pytest.raises(CapExceeded):
        enumerate_characters(12, max_m=10)


def test_tau_examples():
    assert tau(FermatCharacter(5, (1, 1, 1, 2))) == 0
    assert tau(FermatCharacter(5, (0, 0, 0, 0))) == 1
    assert tau(FermatCharacter(5, (4, 4, 4, 3))) == 2


def test_conjugate_examples():
    c = FermatCharacter(5, (1, 1, 1, 2))
    assert conjugate(c) == FermatCharacter(5, (4, 4, 4, 3))
    z = FermatCharacter(5, (0, 0, 0, 0))
    assert conjugate(z) == z


def test_invalid_characters():
    with pytest.raises(ValueError):
        FermatCharacter(5, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        FermatCharacter(5, (0, 1, 2, 2))


@pytest.mark.parametrize("m, expected", [(5, (4, 45, 4)), (3, (0, 7, 0)), (4, (1, 20, 1)), (1, (0, 1, 0))])
def test_hodge_numbers(m, expected):
    assert hodge_numbers(enumerate_characters(m)).as_tuple() == expected


def test_hodge_numbers_brute(brute):
    # count tau directly from the brute-force character list
    for m in range(3, 9):
        counts = [0, 0, 0]
        for b in brute(m):
            counts[1 if not any(b) else sum(b) // m - 1] += 1
        assert hodge_numbers(enumerate_characters(m)).as_tuple() == tuple(counts)
        assert counts[0] == counts[2] == geometric_genus(m)


@pytest.mark.parametrize("m", range(2, 31))
def test_conjugation_symmetry_and_closure(m):
    s = enumerate_characters(m)
    neg = s.indices_of(-s.table)
    assert (neg >= 0).all()
    nonzero = s.table.any(axis=1)
    assert (s.taus[neg][nonzero] == 2 - s.taus[nonzero]).all()


@settings(max_examples=200)
@given(st.integers(2, 40), st.data())
def test_tau_conjugate_property(m, data):
    b = [data.draw(st.integers(1, m - 1)) for _ in range(3)]
    b0 = (-sum(b)) % m
    if b0 == 0:
        return
    c = FermatCharacter(m, (b0, *b))
    assert tau(conjugate(c)) == 2 - tau(c)
    assert conjugate(conjugate(c)) == c
    assert 0 <= tau(c) <= 2


def test_lexicographic_order():
    s = enumerate_characters(7)
    rows = [tuple(r) for r in s.table.tolist()]
    assert rows == sorted(rows)
    assert len(set(rows)) == len(rows)


def test_invariant_trivial_subgroup():
    s = enumerate_characters(5)
    assert invariant_characters(s, []) == s


def test_invariant_full_group():
    s = enumerate_characters(3)
    gens = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    assert [c.b for c in invariant_characters(s, gens)] == [(0, 0, 0, 0)]


def test_invariant_example_m3():
    s = enumerate_characters(3)
    got = [c.b for c in invariant_characters(s, [(1, 2, 0, 0)])]
    # brute force pairing check
    expected = sorted(c.b for c in s if (c.b[0] * 1 + c.b[1] * 2) % 3 == 0)
    assert got == expected == [(0, 0, 0, 0), (1, 1, 2, 2), (2, 2, 1, 1)]


def test_invariant_ignores_diagonal():
    s = enumerate_characters(7)
    a = (1, 3, 0, 5)
    shifted = tuple((x + 2) % 7 for x in a)
    assert invariant_characters(s, [a]) == invariant_characters(s, [shifted])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.lists(st.tuples(*[st.integers(0, 11)] * 4), max_size=3), st.tuples(*[st.integers(0, 11)] * 4))
def test_invariant_monotone_and_idempotent(m, gens, extra):
    s = enumerate_characters(m)
    base = invariant_characters(s, gens)
    assert invariant_characters(s, gens + gens) == base
    smaller = invariant_characters(s, gens + [extra])
    assert set(c.b for c in smaller) <= set(c.b for c in base)


def test_character_set_from_characters_dedupes():
    cs = CharacterSet.from_characters(5, [(1, 1, 1, 2), (1, 1, 1, 2), (0, 0, 0, 0)])
    assert [c.b for c in cs] == [(0, 0, 0, 0), (1, 1, 1, 2)]
    assert FermatCharacter(5, (1, 1, 1, 2)) in cs
    assert FermatCharacter(5, (1, 1, 2, 1)) not in cs
