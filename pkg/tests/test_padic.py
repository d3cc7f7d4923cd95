import pytest
from hypothesis import given, settings, strategies as st

from heckegor.padic import (
    NotSquarefree,
    PrecisionLoss,
    factor_over_q2,
    hensel_split,
    is_square_q2,
    newton_polygon,
    poly_mul,
    product_mod,
    square_class,
    v2,
    z2_roots,
)


def sig(f, k=64):
    return sorted((F.e, F.f, F.degree) for F in factor_over_q2(f, k))


def test_valuation():
    assert v2(1) == 0 and v2(12) == 2 and v2(-8) == 3
    with pytest.raises(ValueError):
        v2(0)


def test_squares():
    assert is_square_q2(17) and is_square_q2(-7) and is_square_q2(4)
    assert not is_square_q2(2) and not is_square_q2(5) and not is_square_q2(3)
    assert is_square_q2(10) is False
    assert square_class(10) == 10 and square_class(-15) == 1 and square_class(40) == 10
    assert square_class(3) == -5 and square_class(6) == -10


@pytest.mark.parametrize("f, expected", [
    ([0, -1, 1], [(1, 1, 1), (1, 1, 1)]),          # x^2 - x
    ([-10, 0, 1], [(2, 1, 2)]),                    # Q2(sqrt 10)
    ([1, 1, 1], [(1, 2, 2)]),                      # unramified quadratic
    ([-5, 0, 1], [(1, 2, 2)]),
    ([-17, 0, 1], [(1, 1, 1), (1, 1, 1)]),         # 17 is a 2-adic square
    ([-2, 0, 0, 1], [(3, 1, 3)]),                  # x^3 - 2, Eisenstein
    ([-3, 0, 1], [(2, 1, 2)]),
])
def test_factor_examples(f, expected):
    assert sig(f) == expected


def test_clustered_roots():
    # (x-1)(x-3)(x-5)(x-73): roots agree to several 2-adic digits
    f = [1]
    for r in (1, 3, 5, 73):
        f = poly_mul(f, [-r, 1])
    facs = factor_over_q2(f, 64)
    assert [F.degree for F in facs] == [1, 1, 1, 1]
    roots = sorted((-F.poly[0]) % (1 << 16) for F in facs)
    assert roots == [1, 3, 5, 73]


def test_not_squarefree_and_not_monic():
    with pytest.raises(NotSquarefree):
        factor_over_q2([1, 2, 1])
    with pytest.raises(ValueError):
        factor_over_q2([1, 2])


def test_precision_runs_out():
    # roots 1 and 1 + 2^40 cannot be separated at 32 bits
    f = poly_mul([-1, 1], [-(1 + 2 ** 40), 1])
    with pytest.raises(PrecisionLoss):
        factor_over_q2(f, 32)


def test_slope_split():
    # roots of x^2 + 1 and x^2 + 3 near -1 have valuations 1/2 and 1
    f = poly_mul(poly_mul([0, 1], [1, 0, 1]), [3, 0, 1])
    assert sig(f) == [(1, 1, 1), (1, 2, 2), (2, 1, 2)]
    f = poly_mul([-2, 0, 1], [-8, 0, 1])
    assert sig(f) == [(2, 1, 2), (2, 1, 2)]


def test_equal_fractional_slopes_are_declined():
    # two ramified quadratics whose roots all have valuation 1/2 after the shift
    with pytest.raises(NotImplementedError):
        factor_over_q2(poly_mul([1, 0, 1], [-3, 0, 1]), 64)


def test_newton_polygon():
    assert newton_polygon([2, 0, 1], 20) == [(0, 1), (2, 0)]
    assert newton_polygon([0, 1], 20) is None


def test_z2_roots_simple():
    roots = z2_roots(poly_mul([-3, 1], [-6, 1]), 20)
    assert sorted(r for r, _ in roots) == [3, 6]


def test_hensel_split():
    f = poly_mul(poly_mul([-1, 1], [-3, 1]), [1, 1, 1])
    # mod 2: (x + 1)^2 (x^2 + x + 1)
    g, h = hensel_split(f, [1, 0, 1], [1, 1, 1], 30)
    assert [c % (1 << 30) for c in poly_mul(g, h)] == [c % (1 << 30) for c in f]


small = st.integers(-50, 50)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=3, unique=True), st.lists(st.tuples(small, small), max_size=2))
def test_factorization_multiplies_back(roots, quads):
    f = [1]
    for r in roots:
        f = poly_mul(f, [-r, 1])
    for b, c in quads:
        f = poly_mul(f, [c, b, 1])
    try:
        facs = factor_over_q2(f, 80)
    except (NotSquarefree, PrecisionLoss, NotImplementedError):
        # declining is allowed; a wrong answer is not
        return
    prec = min(F.precision for F in facs)
    assert sum(F.degree for F in facs) == len(f) - 1
    assert product_mod(facs, prec) == [c % (1 << prec) for c in f]
    for F in facs:
        assert F.e * F.f == F.degree
    # independent prediction of (e, f) from each quadratic's discriminant
    expected = [(1, 1, 1)] * len(roots)
    for b, c in quads:
        D = b * b - 4 * c
        if is_square_q2(D):
            expected += [(1, 1, 1)] * 2
        elif v2(D) % 2 == 0 and (D >> v2(D)) % 8 == 5:
            expected.append((1, 2, 2))
        else:
            expected.append((2, 1, 2))
    assert sorted((F.e, F.f, F.degree) for F in facs) == sorted(expected)
