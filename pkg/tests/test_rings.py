import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncx.errors import RingError
from ncx.rings import (ZZ, CyclotomicIntegers, IntegersMod, LocalizedIntegers, PrimeField, factorize, is_prime,
                       prime_factors, ring_from_json)

RINGS = [ZZ, IntegersMod(12), IntegersMod(8), PrimeField(7), CyclotomicIntegers(3), CyclotomicIntegers(4),
         LocalizedIntegers([2])]


def element(R):
    if isinstance(R, CyclotomicIntegers):
        return st.tuples(*[st.integers(-6, 6)] * R.deg).map(R.canon)
    return st.integers(-30, 30).map(R.from_int)


@pytest.mark.parametrize("R", RINGS, ids=lambda R: R.name())
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_xgcd_contract(R, data):
    a, b = data.draw(element(R)), data.draw(element(R))
    g, s, t, u, v = R.xgcd(a, b)
    assert R.eq(R.add(R.mul(s, a), R.mul(t, b)), g)
    assert R.is_zero(R.add(R.mul(u, a), R.mul(v, b)))
    assert R.is_unit(R.sub(R.mul(s, v), R.mul(t, u)))


@pytest.mark.parametrize("R", RINGS, ids=lambda R: R.name())
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ring_axioms(R, data):
    a, b, c = (data.draw(element(R)) for _ in range(3))
    assert R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
    assert R.eq(R.mul(a, b), R.mul(b, a))
    assert R.is_zero(R.add(a, R.neg(a)))
    if not R.is_zero(b):
        q = R.exact_div(R.mul(a, b), b)
        assert q is not None and R.eq(R.mul(q, b), R.mul(a, b))


def test_cyclotomic_root():
    R = CyclotomicIntegers(3)
    z = R.zeta()
    assert R.eq(R.power(z, 3), R.one) and not R.eq(z, R.one)
    with pytest.raises(RingError):
        CyclotomicIntegers(5)


def test_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(360) == [2, 3, 5]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    with pytest.raises(RingError):
        PrimeField(9)


def test_localized_units():
    R = LocalizedIntegers([6])
    assert R.is_unit(R.from_int(12)) and not R.is_unit(R.from_int(10))


@pytest.mark.parametrize("doc", [{"kind": "Z"}, {"kind": "Zmod", "m": 12}, {"kind": "F", "p": 7},
                                  {"kind": "cyclotomic", "N": 3}, {"kind": "localized", "inverted": [2]}])
def test_ring_json_round_trip(doc):
    R = ring_from_json(doc)
    assert ring_from_json(R.to_json()).key() == R.key()


def test_unknown_ring():
    with pytest.raises(RingError):
        ring_from_json({"kind": "Q"})
