from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckegor.linalg import (
    IntLattice,
    charpoly,
    det,
    hnf,
    identity,
    kernel_and_saturate,
    lattice_intersection,
    matmul,
    poly_eval_matrix,
    rank_mod_p,
    saturate,
    smith_invariants,
    snf,
    solve_rational,
)

ints = st.integers(-20, 20)


def square(n):
    return st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def matrices(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return draw(square(n))


@st.composite
def rect(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return draw(st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r))


def test_hnf_examples():
    assert hnf(identity(3)) == (identity(3), identity(3))
    H, U = hnf([[1, 2], [3, 4]])
    assert H == [[1, 0], [0, 2]]
    H, _ = hnf([[2, 2], [2, 2]])
    assert [r for r in H if any(r)] == [[2, 2]]


def test_snf_examples():
    assert snf([[2, 0], [0, 3]])[0] == [[1, 0], [0, 6]]
    assert snf([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]
    assert snf([[2, 4], [6, 8]])[0] == [[2, 0], [0, 4]]


def test_charpoly_examples():
    assert charpoly(identity(2)) == [1, -2, 1]
    assert charpoly([[0, 1], [1, 0]]) == [-1, 0, 1]


def test_charpoly_rejects_rectangular():
    with pytest.raises(ValueError):
        charpoly([[1, 2, 3], [4, 5, 6]])


@settings(max_examples=60, deadline=None)
@given(rect())
def test_hnf_is_unimodular_transform(M):
    H, U = hnf(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    # pivots positive, entries above pivots reduced
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        j = nz[0]
        assert row[j] > 0
        for k in range(i):
            assert 0 <= H[k][j] < row[j]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_hnf_and_snf_preserve_determinant(M):
    H, _ = hnf(M)
    D, U, V = snf(M)
    assert abs(det(H)) == abs(det(M))
    assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(len(D))]
    assert all(d >= 0 for d in diag)
    prod = 1
    for d in diag:
        prod *= d
    assert prod == abs(det(M))
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0


@settings(max_examples=60, deadline=None)
@given(matrices(max_n=6))
def test_cayley_hamilton(M):
    cp = charpoly(M)
    n = len(M)
    assert len(cp) == n + 1 and cp[-1] == 1
    assert cp[0] == (-1) ** n * det(M)
    assert poly_eval_matrix(cp, M) == [[0] * n for _ in range(n)]


def test_charpoly_large_entries():
    M = [[10 ** 30, 1], [1, -(10 ** 30)]]
    assert charpoly(M) == [-(10 ** 60) - 1, 0, 1]


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=4))
def test_solve_rational_roundtrip(M):
    if rank_mod_p(M) < len(M) or det(M) == 0:
        return
    targets = [[1] * len(M), list(range(len(M)))]
    X = solve_rational(M, targets)
    for x, t in zip(X, targets):
        assert [sum(Fraction(x[i]) * M[i][j] for i in range(len(M))) for j in range(len(M))] == t


@settings(max_examples=40, deadline=None)
@given(rect())
def test_saturation_contains_and_is_primitive(M):
    sat = saturate(M)
    L = IntLattice.from_generators(sat, len(M[0])) if sat else None
    for row in M:
        if any(row):
            assert row in L
    if sat:
        # a saturated lattice has trivial elementary divisors
        assert all(d == 1 for d in smith_invariants(sat))


def test_lattice_intersection_and_kernel():
    assert lattice_intersection([[2, 0], [0, 1]], [[1, 0], [0, 3]]) == [[2, 0], [0, 3]]
    K = kernel_and_saturate([[1, 1], [1, 1], [2, 2]])
    for v in K.hnf:
        assert all(sum(v[i] * r[j] for i, r in enumerate([[1, 1], [1, 1], [2, 2]])) == 0 for j in range(2))
    assert K.rank == 2


def test_lattice_equality_is_by_hnf():
    A = IntLattice.from_generators([[2, 0], [0, 2]])
    B = IntLattice.from_generators([[2, 2], [0, 2]])
    assert A == B
    assert [1, 1] not in A
    assert A.index_in(IntLattice.from_generators(identity(2))) == 4
