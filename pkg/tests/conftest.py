import itertools

import pytest


def brute_characters(m):
    """All (b0..b3) in (Z/m)^4 summing to 0 with all-or-none nonzero, by full enumeration."""
    out = []
    for b in itertools.product(range(m), repeat=4):
        if sum(b) % m:
            continue
        if all(b) or not any(b):
            out.append(b)
    return sorted(out)


@pytest.fixture
def brute():
    return brute_characters
