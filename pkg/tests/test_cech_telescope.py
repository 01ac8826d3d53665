import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncx.canonical import CanonicalModule
from ncx.cech_telescope import (cech_closed_form_d1, cech_cohomology, cech_ring, cech_stage_system, cech_table,
                                kill_torsion, proregular_probe, telescope, telescope_colimit_table,
                                telescope_comparison, telescope_inclusion, telescope_invariance, telescope_seq,
                                telescope_to_cech)
from ncx.errors import NonPrimitiveQ, RingError, Unclassified
from ncx.exact_linalg import FPModule
from ncx.ncomplex_core import cohomology, validate
from ncx.qcalc import default_context
from ncx.rings import ZZ, CyclotomicIntegers, PrimeField

CECH_XY_N3 = {
    0: (["R"], [["iota_x"], ["iota_y"]]),
    1: (["R_x", "R_y"], [["1", "0"], ["iota_y", "0"], ["0", "1"]]),
    2: (["R_x", "R_xy", "R_y"], [["iota_y", "0", "-iota_x"], ["0", "1", "-iota_x"]]),
    3: (["R_xy", "R_xy"], [["1", "-1"]]),
    4: (["R_xy"], None),
}

CECH_XY_N4 = {
    0: (["R"], [["iota_x"], ["iota_y"]]),
    1: (["R_x", "R_y"], [["1", "0"], ["iota_y", "0"], ["0", "1"]]),
    2: (["R_x", "R_xy", "R_y"], [["1", "0", "0"], ["iota_y", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]),
    3: (["R_x", "R_xy", "R_xy", "R_y"],
        [["iota_y", "0", "0", "-iota_x"], ["0", "1", "0", "-iota_x"], ["0", "0", "1", "-iota_x"]]),
    4: (["R_xy", "R_xy", "R_xy"], [["1", "0", "-1"], ["0", "1", "-1"]]),
    5: (["R_xy", "R_xy"], [["1", "-1"]]),
    6: (["R_xy"], None),
}


def mod(free, *factors):
    return FPModule.from_factors(ZZ, free, list(factors))


def pruefer(*ps):
    return CanonicalModule.make(pruefer={p: 1 for p in ps})


@pytest.mark.parametrize("N, golden", [(3, CECH_XY_N3), (4, CECH_XY_N4)])
def test_two_element_cech_displays(N, golden):
    C = cech_ring([2, 3], N)
    assert C.degrees == sorted(golden)
    for n, (labels, disp) in golden.items():
        assert [C.label(a) for a in C.labels[n]] == labels
        if disp is not None:
            assert C.display(n) == disp
    assert validate(C.localized())["valid"]


@pytest.mark.parametrize("N", [3, 4, 5])
def test_one_element_cech_display(N):
    C = cech_ring([5], N)
    assert [[C.label(a) for a in C.labels[n]] for n in C.degrees] == [["R"]] + [["R_x"]] * (N - 1)
    assert C.display(0) == [["iota_x"]]
    assert all(C.display(n) == [["1"]] for n in range(1, N - 1))


def test_cech_ring_arguments():
    with pytest.raises(RingError):
        cech_ring([], 3)
    with pytest.raises(RingError):
        cech_ring([2], 3, ring=PrimeField(5))
    with pytest.raises(RingError):
        cech_ring([0, 2], 3).localized()


def test_stages_are_chain_maps():
    stages, maps = cech_stage_system([2, 3], mod(1, 4), 3, S=4)
    assert all(validate(X)["valid"] for X in stages)
    assert all(f.is_valid() for f in maps)


def test_cech_examples():
    t = cech_table([2], mod(0, 12), 3)
    assert t[(0, 1)].render() == "Z/4" and t[(0, 2)].render() == "Z/4"
    assert all(v.is_zero() for k, v in t.items() if k[0] > 0)
    t = cech_table([3], mod(1), 3)
    assert t[(1, 2)] == pruefer(3) and t[(2, 1)] == pruefer(3)
    assert all(cech_table([2], mod(0, 3), 3)[k].is_zero() for k in t)


def test_two_element_cech():
    t = cech_table([2, 3], mod(1), 3)
    nonzero = {k: v for k, v in t.items() if not v.is_zero()}
    assert nonzero == {}
    t = cech_table([2, 2], mod(0, 8), 3)
    assert t[(0, 1)].render() == "Z/8"


def test_cech_limited_to_two_elements():
    with pytest.raises(Unclassified):
        cech_cohomology([2, 3, 5], mod(1), 0, 1, 3, S=3)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3, 4, 6, 0]), st.integers(0, 1), st.lists(st.sampled_from([2, 3, 4, 8, 9]), max_size=2),
       st.sampled_from([3, 4]))
def test_closed_form_for_one_element(x, free, factors, N):
    if free == 0 and not factors:
        free = 1
    M = mod(free, *factors)
    assert cech_table([x], M, N) == cech_closed_form_d1(x, M, N)


def test_kill_torsion():
    assert kill_torsion(mod(1, 4, 9), 2).classify().render() == "Z^1 + Z/9"


@pytest.mark.parametrize("x", [2, 3, -5])
@pytest.mark.parametrize("N", [3, 4])
def test_telescope_structure(x, N):
    for s in (1, 2, 4):
        T = telescope(x, N, s)
        assert validate(T)["valid"]
        assert telescope_inclusion(x, N, s).is_valid()
        assert telescope_to_cech(x, N, s).is_valid()
    with pytest.raises(RingError):
        telescope(x, N, 0)


def test_telescope_cohomology_grows_with_stage():
    T = telescope(2, 3, 4)
    assert cohomology(T, 1, 2).render() == "Z/16" and cohomology(T, 2, 1).render() == "Z/16"


def test_telescope_comparison_is_stable():
    rep = telescope_comparison(2, 3, S=6)
    assert rep.verdict == "quasi-isomorphism" and rep.stable_from == 1
    assert rep.to_json()["stable_from"] == 1


def test_telescope_limits():
    table = telescope_colimit_table(6, 3)
    assert table[(1, 2)] == pruefer(2, 3)
    assert telescope_invariance(2, 4, 3)["pass"]
    assert telescope_invariance(6, 12, 4)["pass"]
    assert not telescope_invariance(2, 3, 3)["pass"]


def test_telescope_products_need_a_root():
    with pytest.raises(NonPrimitiveQ):
        telescope_seq([2, 3], 3, 2)
    R = CyclotomicIntegers(3)
    T = telescope_seq([2, 3], 3, 2, ring=R, ctx=default_context(R, 3))
    assert validate(T)["valid"]


@pytest.mark.parametrize("elements", [[2], [4, 6], [2, 3], [0]])
def test_proregular_probe_on_integers(elements):
    rep = proregular_probe(elements, 3, S=4)
    assert rep.verdict == "pro-zero"
    assert rep.to_json()["verdict"] == "pro-zero"


def test_proregular_probe_needs_three_stages():
    assert proregular_probe([2], 3, S=2).verdict == "inconclusive"
