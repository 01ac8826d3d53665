import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncx.canonical import CanonicalModule
from ncx.errors import OutOfCatalogue, Unclassified
from ncx.exact_linalg import FPModule
from ncx.rings import ZZ
from ncx.torsion_completion import (Q, QZ, adic_completion, completion_table, expand, gamma_divisible,
                                    hom_torsion_check, invariants, llambda_module, local_table, mgm_report,
                                    power_vanishing_check, recognize, replay_injective, rgamma_module,
                                    route_agreement, telescope_completion_table, torsion_submodule)


def mod(free, *factors):
    return FPModule.from_factors(ZZ, free, list(factors))


def fg(free, *factors):
    return CanonicalModule.of(mod(free, *factors).classify())


def nonzero(table):
    return {k: v.render() for k, v in sorted(table.items()) if not v.is_zero()}


def test_torsion_submodule():
    assert torsion_submodule(mod(1, 4, 9), [2])[0].render() == "Z/4"
    assert torsion_submodule(mod(1, 4, 9), [6])[0].render() == "Z/36"
    assert torsion_submodule(mod(1, 4, 9), [4, 6])[0].render() == "Z/4"
    assert torsion_submodule(mod(1), [2])[0].is_zero()


def test_local_cohomology_values():
    assert nonzero(local_table([2], mod(0, 12), 3)) == {(0, 1): "Z/4", (0, 2): "Z/4"}
    assert nonzero(local_table([6], mod(1), 3)) == {(1, 2): "Pruefer(2)^1 + Pruefer(3)^1",
                                                   (2, 1): "Pruefer(2)^1 + Pruefer(3)^1"}
    assert nonzero(local_table([2], mod(1), 4)) == {(n, 4 - n): "Pruefer(2)^1" for n in (1, 2, 3)}
    assert nonzero(local_table([3], mod(0, 2), 3)) == {}


def test_two_element_local_cohomology():
    assert nonzero(local_table([4, 6], mod(0, 8), 3)) == {(0, 1): "Z/8", (0, 2): "Z/8"}
    assert nonzero(local_table([2, 3], mod(1), 3)) == {}


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("d", [0, 1, 4, 7, 9, 25, 12])
def test_replay_matches_local_cohomology(p, d):
    M = mod(1) if d == 0 else mod(0, d)
    got = local_table([p], M, 3)
    want = replay_injective(d, p)
    zero = CanonicalModule.zero()
    assert all(got.get(k, zero) == v for k, v in want.items())


def test_divisible_catalogue():
    assert gamma_divisible(QZ, 3) == CanonicalModule.make(pruefer={3: 1})
    assert gamma_divisible(Q, 3).is_zero()
    assert gamma_divisible(CanonicalModule.make(pruefer={2: 1, 3: 2}), 3) == CanonicalModule.make(pruefer={3: 2})
    with pytest.raises(OutOfCatalogue):
        gamma_divisible(fg(1), 2)


def test_route_agreement_two_elements():
    assert route_agreement([2, 4], mod(1, 8), 3)["agree"]


def test_adic_completion():
    assert adic_completion(mod(1), [2]) == CanonicalModule.make(adic={2: 1})
    assert adic_completion(mod(0, 12), [2]).render() == "Z/4"
    assert adic_completion(mod(1, 9), [6]) == CanonicalModule.make(fg=mod(0, 9).classify(), adic={2: 1, 3: 1})


def test_derived_completion():
    assert nonzero(completion_table([2], mod(1), 3)) == {(0, 1): "Z2-adic^1", (0, 2): "Z2-adic^1"}
    assert nonzero(completion_table([2], mod(0, 12), 3)) == {(0, 1): "Z/4", (0, 2): "Z/4"}
    assert nonzero(completion_table([3], mod(0, 4), 3)) == {}


@pytest.mark.parametrize("x, M", [(2, mod(1)), (3, mod(0, 9)), (6, mod(1, 4)), (2, mod(0, 3))])
def test_telescope_completion_agrees(x, M):
    assert telescope_completion_table(x, M, 3, S=6) == completion_table([x], M, 3, S=6)


def test_recognize_and_expand():
    t = local_table([2], mod(1, 4), 3)
    obj = recognize(t, 3)
    assert set(obj) == {0, -1}
    zero = CanonicalModule.zero()
    exp = expand(obj, 3)
    assert all(exp.get(k, zero) == v for k, v in t.items())
    with pytest.raises(Unclassified):
        recognize({(0, 1): fg(1), (0, 2): fg(0, 2)}, 3)


def test_catalogue_functors():
    assert rgamma_module(fg(0, 8), [2]) == {0: fg(0, 8)}
    assert rgamma_module(fg(0, 3), [2]) == {}
    assert rgamma_module(fg(1), [2]) == {-1: CanonicalModule.make(pruefer={2: 1})}
    assert llambda_module(fg(1), [2]) == {0: CanonicalModule.make(adic={2: 1})}
    assert llambda_module(CanonicalModule.make(pruefer={2: 1}), [2]) == {1: CanonicalModule.make(adic={2: 1})}


@pytest.mark.parametrize("p", [2, 3])
def test_mgm(p):
    for M in (mod(1), mod(0, p ** 3), mod(1, p)):
        rep = mgm_report([p], M, 3)
        assert rep["pass"], rep["checks"]
    with pytest.raises(OutOfCatalogue):
        mgm_report([1], mod(1), 3)


def test_invariants_anchor_and_unit_ideal():
    rep = invariants([2], mod(1), 1, 3)
    assert rep["inf"] == {"rhom": 2, "local": 2, "koszul": 2}
    assert rep["sup"] == {"tensor": 0, "completion": 0, "koszul": 0}
    rep = invariants([2, 3], mod(1), 1, 3)
    assert rep["pass"] and set(rep["inf"].values()) == {"none"} and set(rep["sup"].values()) == {"none"}
    assert invariants([2], mod(0, 8), 1, 3)["inf"]["rhom"] == 0


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([[2], [3], [6], [2, 4]]), st.integers(0, 1), st.lists(st.sampled_from([2, 3, 4, 9]),
                                                                            max_size=2))
def test_torsion_checks(elements, free, factors):
    M = mod(free or (0 if factors else 1), *factors)
    assert hom_torsion_check(elements, M, 3)["pass"]
    assert power_vanishing_check(elements, M, 3, smax=3)["pass"]
