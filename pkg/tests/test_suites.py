import random

import pytest

from ncx.ncomplex_core import check_short_exact, validate
from ncx.suites import ENTRY_BOUND, MAX_WIDTH, SUITES, random_short_exact
from ncx.rings import CyclotomicIntegers


@pytest.mark.parametrize("seed", range(10))
def test_random_short_exact_respects_bounds(seed):
    f, i, p = random_short_exact(random.Random(seed), 3)
    C = i.target
    assert validate(C)["valid"] and check_short_exact(i, p) == []
    assert C.hi - C.lo + 1 <= MAX_WIDTH
    for n in range(C.lo, C.hi):
        assert all(abs(v) <= ENTRY_BOUND for row in C.diff(n).rows for v in row)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_and_repeat(name):
    a = SUITES[name](3, 4)
    assert a["pass"], a
    assert SUITES[name](3, 4) == a


def test_identities_over_eisenstein_integers():
    assert SUITES["identities"](1, 2, ring=CyclotomicIntegers(3))["pass"]
