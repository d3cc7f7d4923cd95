import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import primerange

from heckegor.galois2 import (
    BadReduction,
    CurveModel,
    RamifiedPrime,
    ap,
    frob_profile,
    mod2_irreducible_and_s3,
    mod2_traces,
    same_mod2_rep,
    splits_completely_at_two,
    two_division_cubic,
)

E1 = CurveModel.from_list([1, 0, 0, 0, -1], "431a1")
E2 = CurveModel.from_list([1, -1, 1, -9, -8], "431b1")


def brute_ap(E, p):
    a1, a2, a3, a4, a6 = E.coeffs
    n = 1 + sum(1 for x in range(p) for y in range(p)
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0)
    return p + 1 - n


def test_invariants():
    assert E1.disc == -431 and E2.disc == -431
    assert CurveModel.from_list([0, 0, 1, -1, 0]).disc == 37
    with pytest.raises(ValueError):
        CurveModel(0, 0, 0, 0, 0)


def test_ap_values():
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    assert [ap(E1, p) for p in primes] == [-1, 1, 1, -2, -5, -2, -2, 5]
    assert [ap(E2, p) for p in primes] == [-1, 3, -3, 2, 1, -2, 6, 7]
    with pytest.raises(BadReduction):
        ap(E1, 431)


@pytest.mark.parametrize("E", [E1, E2])
def test_431_screen(E):
    assert mod2_irreducible_and_s3(E) == (True, True)
    assert splits_completely_at_two(E)
    f3 = frob_profile(E, 3)
    assert (f3.order, f3.trace) == (3, 1)


def test_same_mod2_rep():
    assert same_mod2_rep(E1, E2, bound=300)
    E37 = CurveModel.from_list([0, 0, 1, -1, 0])
    assert not same_mod2_rep(E1, E37, bound=300)


def test_controls():
    E37 = CurveModel.from_list([0, 0, 1, -1, 0])
    assert ap(E37, 2) == -2
    assert not splits_completely_at_two(E37)
    # y^2 = x^3 - x has full rational 2-torsion
    assert mod2_irreducible_and_s3(CurveModel.from_list([0, 0, 0, -1, 0])) == (False, False)
    with pytest.raises(RamifiedPrime):
        frob_profile(E1, 2)


def test_two_division_cubic():
    assert two_division_cubic(E1) == [E1.b6, 2 * E1.b4, E1.b2, 4]


def test_mod2_traces_skip_bad_primes():
    tr = mod2_traces(E1, [2, 3, 431])
    assert tr == {2: 1, 3: 1}


coef = st.integers(-30, 30)
bit = st.integers(0, 1)


@settings(max_examples=80, deadline=None)
@given(bit, st.integers(-1, 1), bit, coef, coef, st.sampled_from(list(primerange(3, 60))))
def test_parity_law(a1, a2, a3, a4, a6, p):
    """tr rho(Frob_p) = a_p mod 2, with a_p counted independently."""
    try:
        E = CurveModel(a1, a2, a3, a4, a6)
    except ValueError:
        assume(False)
    assume(E.disc % p != 0)
    a = ap(E, p)
    assert a == brute_ap(E, p)
    assert frob_profile(E, p, check=False).trace == a % 2
    assert abs(a) <= 2 * p ** 0.5
