"""Exact integer and rational linear algebra.

Matrices are plain lists of lists of Python ints (row-major).  Nothing in here
ever touches floating point; numpy is only used as a fast container for
int64 arithmetic modulo word-sized primes and for overflow-checked products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb, gcd, isqrt

import numpy as np
from sympy import prevprime

IntMatrix = list[list[int]]

_INT64_SAFE = 2**62


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def transpose(M: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*M)]


def shape(M) -> tuple[int, int]:
    r = len(M)
    return r, (len(M[0]) if r else 0)


def max_abs(M) -> int:
    return max((abs(int(x)) for row in M for x in row), default=0)


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Exact product A*B.

    Uses an int64 numpy product when the entry bounds guarantee no overflow,
    otherwise falls back to object arrays of Python ints.
    """
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError(f"cannot multiply {n}x{k} by {k2}x{m}")
    if n == 0 or m == 0:
        return zeros(n, m)
    if k == 0:
        return zeros(n, m)
    if max_abs(A) * max_abs(B) * k < _INT64_SAFE:
        P = np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)
    else:
        P = np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object))
    return [[int(x) for x in row] for row in P]


def vecmat(v: list[int], M: IntMatrix) -> list[int]:
    return matmul([v], M)[0]


def mat_add(A: IntMatrix, B: IntMatrix, b: int = 1) -> IntMatrix:
    """A + b*B."""
    return [[x + b * y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: IntMatrix, c: int) -> IntMatrix:
    return [[c * x for x in row] for row in A]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# --------------------------------------------------------------------------
# Hermite and Smith normal forms
# --------------------------------------------------------------------------

def _row_axpy(dst: list[int], src: list[int], q: int, start: int = 0) -> None:
    """dst -= q*src, in place."""
    if q:
        for j in range(start, len(dst)):
            s = src[j]
            if s:
                dst[j] -= q * s


def hnf(M: IntMatrix, transform: bool = True) -> tuple[IntMatrix, IntMatrix | None]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*M, U unimodular.  Pivots are positive, entries
    above a pivot lie in [0, pivot), and zero rows are collected at the bottom.
    """
    H = [list(map(int, row)) for row in M]
    nrows, ncols = shape(H)
    U = identity(nrows) if transform else None
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if H[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                if U is not None:
                    U[r], U[piv] = U[piv], U[r]
            p = H[r][c]
            done = True
            for i in range(r + 1, nrows):
                if not H[i][c]:
                    continue
                q = H[i][c] // p
                _row_axpy(H[i], H[r], q, c)
                if U is not None:
                    _row_axpy(U[i], U[r], q)
                if H[i][c]:
                    done = False
            if done:
                break
        if not any(H[i][c] for i in range(r, nrows)):
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                _row_axpy(H[i], H[r], q, c)
                if U is not None:
                    _row_axpy(U[i], U[r], q)
        r += 1
    return H, U


def hnf_basis(M: IntMatrix) -> IntMatrix:
    """Nonzero rows of the HNF of M (a canonical basis of its row lattice)."""
    H, _ = hnf(M, transform=False)
    return [row for row in H if any(row)]


def pivots(H: IntMatrix) -> list[int]:
    out = []
    for row in H:
        for j, x in enumerate(row):
            if x:
                out.append(j)
                break
    return out


def snf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form by iterated gcd elimination.

    Returns (D, U, V) with D = U*M*V diagonal, d1 | d2 | ..., all d_i >= 0.
    """
    D = [list(map(int, row)) for row in M]
    n, m = shape(D)
    U = identity(n)
    V = identity(m)

    def swap_cols(A, a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]

    def col_axpy(A, dst, src, q):
        for row in A:
            row[dst] -= q * row[src]

    t = 0
    while t < min(n, m):
        nz = [(abs(D[i][j]), i, j) for i in range(t, n) for j in range(t, m) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        D[t], D[i0] = D[i0], D[t]
        U[t], U[i0] = U[i0], U[t]
        swap_cols(D, t, j0)
        swap_cols(V, t, j0)
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, n):
                if D[i][t]:
                    q = D[i][t] // p
                    _row_axpy(D[i], D[t], q)
                    _row_axpy(U[i], U[t], q)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, m):
                if D[t][j]:
                    q = D[t][j] // p
                    col_axpy(D, j, t, q)
                    col_axpy(V, j, t, q)
                    if D[t][j]:
                        clean = False
            if not clean:
                nz = [(abs(D[i][t]), i, t) for i in range(t, n) if D[i][t]]
                nz += [(abs(D[t][j]), t, j) for j in range(t, m) if D[t][j]]
                _, i0, j0 = min(nz)
                if i0 != t:
                    D[t], D[i0] = D[i0], D[t]
                    U[t], U[i0] = U[i0], U[t]
                if j0 != t:
                    swap_cols(D, t, j0)
                    swap_cols(V, t, j0)
                continue
            # divisibility: the pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if D[i][j] % p), None)
            if bad is None:
                break
            i, _ = bad
            D[t] = [a + b for a, b in zip(D[t], D[i])]
            U[t] = [a + b for a, b in zip(U[t], U[i])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def smith_invariants(M: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(shape(D))) if D[i][i]]


def det(M: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n, m = shape(M)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


# --------------------------------------------------------------------------
# Characteristic polynomials
# --------------------------------------------------------------------------

def _word_primes(count: int, start: int = 2**31) -> list[int]:
    out, p = [], start
    for _ in range(count):
        p = prevprime(p)
        out.append(p)
    return out


_PRIMES = _word_primes(8)


def _primes(count: int) -> list[int]:
    global _PRIMES
    if count > len(_PRIMES):
        _PRIMES = _PRIMES + _word_primes(count - len(_PRIMES), _PRIMES[-1])
    return _PRIMES[:count]


def _charpoly_mod_p(M: IntMatrix, p: int) -> list[int]:
    """Charpoly mod p via reduction to upper Hessenberg form.

    Coefficients in increasing degree, monic.
    """
    n = len(M)
    A = np.array([[x % p for x in row] for row in M], dtype=np.int64)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if A[i, m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            A[[m, piv], :] = A[[piv, m], :]
            A[:, [m, piv]] = A[:, [piv, m]]
        inv = pow(int(A[m, m - 1]), -1, p)
        for i in range(m + 1, n):
            u = int(A[i, m - 1]) * inv % p
            if u:
                A[i, :] = (A[i, :] - u * A[m, :]) % p
                A[:, m] = (A[:, m] + u * A[:, i]) % p
    H = [[int(x) for x in row] for row in A]
    # p_k(x) = charpoly of leading k x k block
    polys = [[1]]
    for k in range(1, n + 1):
        # p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{i,k} * prod_{j=i+1}^{k-1} h_{j,j-1} * p_{i-1}
        prev = polys[k - 1]
        new = [0] + prev
        hkk = H[k - 1][k - 1]
        for d, c in enumerate(prev):
            new[d] = (new[d] - hkk * c) % p
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * H[i][i - 1] % p
            if not t:
                break
            coef = t * H[i - 1][k - 1] % p
            if coef:
                for d, c in enumerate(polys[i - 1]):
                    new[d] = (new[d] - coef * c) % p
        polys.append(new)
    return polys[n]


def _charpoly_bound(M: IntMatrix) -> int:
    n = len(M)
    norms = sorted((sum(x * x for x in row) for row in M), reverse=True)
    best = 1
    for k in range(1, n + 1):
        prod_norm_sq = reduce(lambda a, b: a * b, norms[:k], 1)
        best = max(best, comb(n, k) * (isqrt(prod_norm_sq) + 1))
    return best


def crt_symmetric(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = (r - x) * pow(m, -1, q) % q
        x += m * t
        m *= q
    return x - m if x > m // 2 else x


def charpoly(M: IntMatrix) -> list[int]:
    """Exact characteristic polynomial det(x*I - M).

    Returned as integer coefficients in increasing degree order (monic).
    Computed modulo enough word-sized primes to exceed a Hadamard bound on
    the coefficients, then reconstructed by CRT, so the result is exact.
    """
    n, m = shape(M)
    if n != m:
        raise ValueError("charpoly of a non-square matrix")
    if n == 0:
        return [1]
    bound = 2 * _charpoly_bound(M) + 1
    primes, prod = [], 1
    k = 1
    while prod <= bound:
        k *= 2
        primes = _primes(k)
        prod = reduce(lambda a, b: a * b, primes, 1)
    count = 0
    prod = 1
    for q in primes:
        count += 1
        prod *= q
        if prod > bound:
            break
    primes = primes[:count]
    images = [_charpoly_mod_p(M, q) for q in primes]
    return [crt_symmetric([img[d] for img in images], primes) for d in range(n + 1)]


def poly_eval_matrix(coeffs: list[int], M: IntMatrix) -> IntMatrix:
    """Evaluate an integer polynomial (increasing degree) at a square matrix."""
    n = len(M)
    R = zeros(n, n)
    for c in reversed(coeffs):
        R = matmul(R, M)
        for i in range(n):
            R[i][i] += c
    return R


# --------------------------------------------------------------------------
# Rational and modular elimination
# --------------------------------------------------------------------------

def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p (p < 2**31)."""
    A = np.array(M, dtype=object)
    A = np.array([[int(x) % p for x in row] for row in A], dtype=np.int64) if len(M) else np.zeros((0, 0), np.int64)
    nrows, ncols = A.shape
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i], :] = A[[i, r], :]
        inv = pow(int(A[r, c]), -1, p)
        A[r, :] = (A[r, :] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows, :] = (A[rows, :] - np.outer(col[rows], A[r, :]) % p) % p
        piv_cols.append(c)
        r += 1
    return A[:r], piv_cols


def rank_mod_p(M, p: int = 2147483647) -> int:
    if not len(M):
        return 0
    return len(rref_mod_p(M, p)[1])


def rref_rational(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (small matrices)."""
    A = [[Fraction(x) for x in row] for row in M]
    nrows, ncols = shape(A)
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((i for i in range(r, nrows) if A[i][c]), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i2 in range(nrows):
            if i2 != r and A[i2][c]:
                f = A[i2][c]
                A[i2] = [x - f * y for x, y in zip(A[i2], A[r])]
        piv_cols.append(c)
        r += 1
    return A[:r], piv_cols


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def primitive_row(v) -> list[int]:
    """Scale a rational vector to a primitive integer vector (same sign)."""
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in v), 1)
    w = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, w, 0)
    return [x // g for x in w] if g else w


def rref_rational_mm(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q by multimodular reconstruction.

    The candidate is accepted only after an exact check that every input row
    lies in its span; since the rank over Q is at least the rank modulo any
    prime, this certifies that both row spaces agree.
    """
    n, m = shape(M)
    if n == 0 or m == 0:
        return [], []
    if n * m <= 400:
        return rref_rational(M)
    rows = [[int(x) for x in row] for row in M]
    moduli: list[int] = []
    residues: list = []
    piv_ref = None
    tries = 0
    for q in _primes(64):
        R, piv = rref_mod_p(rows, q)
        if piv_ref is None or len(piv) > len(piv_ref):
            piv_ref, moduli, residues = piv, [], []
        elif piv != piv_ref:
            continue
        moduli.append(q)
        residues.append(R)
        if len(moduli) & (len(moduli) - 1):
            continue  # reconstruct after 1, 2, 4, 8, ... primes
        tries += 1
        cand = _reconstruct_rows(residues, moduli)
        if cand is not None and _rows_in_rref_span(rows, cand, piv_ref):
            return cand, piv_ref
    raise ArithmeticError("multimodular echelon form did not stabilise")


def _reconstruct_rows(residues, moduli) -> list[list[Fraction]] | None:
    mod = reduce(lambda a, b: a * b, moduli, 1)
    out = []
    stack = np.stack(residues)  # (primes, rows, cols)
    for i in range(stack.shape[1]):
        row = []
        for j in range(stack.shape[2]):
            vals = [int(x) for x in stack[:, i, j]]
            if not any(vals):
                row.append(Fraction(0))
                continue
            if len(moduli) == 1:
                a = vals[0]
            else:
                a = crt_symmetric(vals, moduli) % mod
            fr = _rational_reconstruct(a, mod)
            if fr is None:
                return None
            row.append(fr)
        out.append(row)
    return out


def _rows_in_rref_span(rows, R, piv) -> bool:
    for row in rows:
        res = [Fraction(x) for x in row]
        for Ri, pc in zip(R, piv):
            c = res[pc]
            if c:
                for j, y in enumerate(Ri):
                    if y:
                        res[j] -= c * y
        if any(res):
            return False
    return True


def left_kernel_rational(M: IntMatrix) -> IntMatrix:
    """Basis (primitive integer rows) of the rational left kernel {v : v*M = 0}."""
    n, m = shape(M)
    if n == 0:
        return []
    if m == 0:
        return identity(n)
    R, piv = rref_rational_mm(transpose(M))
    return _kernel_from_rref(R, piv, n)


def _kernel_from_rref(R, piv: list[int], n: int) -> IntMatrix:
    free = [j for j in range(n) if j not in set(piv)]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -Fraction(R[i][f])
        out.append(primitive_row(v))
    return out


def solve_rational(B: IntMatrix, targets: IntMatrix) -> list[list[Fraction]]:
    """Coordinates X with X*B = targets, B of full row rank.  Raises if none."""
    r = len(B)
    if not targets:
        return []
    if r == 0:
        if any(any(t) for t in targets):
            raise ValueError("vector not in row space")
        return [[] for _ in targets]
    aug = [list(col) for col in zip(*B)]  # columns of B as rows
    # Solve B^T x^T = t^T through rref of [B^T | targets^T]
    n = len(aug)
    rows = [aug[j] + [t[j] for t in targets] for j in range(n)]
    R, piv = rref_rational(rows)
    if any(pc >= r for pc in piv):
        raise ValueError("vector not in row space")
    if len(piv) != r:
        raise ValueError("basis is not of full row rank")
    X = [[Fraction(0)] * r for _ in targets]
    for i, pc in enumerate(piv):
        for t in range(len(targets)):
            X[t][pc] = R[i][r + t]
    return X


# --------------------------------------------------------------------------
# Lattices
# --------------------------------------------------------------------------

@dataclass(eq=False)
class IntLattice:
    """A sublattice of Z^n given by independent integer generator rows."""

    ambient_dim: int
    basis: IntMatrix
    _hnf: IntMatrix | None = field(default=None, repr=False)

    @classmethod
    def from_generators(cls, gens: IntMatrix, ambient_dim: int | None = None) -> "IntLattice":
        if ambient_dim is None:
            ambient_dim = len(gens[0])
        H = hnf_basis(gens) if gens else []
        return cls(ambient_dim, H, H)

    @property
    def hnf(self) -> IntMatrix:
        if self._hnf is None:
            self._hnf = hnf_basis(self.basis) if self.basis else []
        return self._hnf

    @property
    def rank(self) -> int:
        return len(self.hnf)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntLattice):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.hnf == other.hnf

    def __hash__(self):
        return hash((self.ambient_dim, tuple(map(tuple, self.hnf))))

    def coordinates(self, v: list[int]) -> list[int]:
        """Integer coordinates of v in the HNF basis; ValueError if v is not in the lattice."""
        H = self.hnf
        v = list(v)
        coords = []
        for row, pc in zip(H, pivots(H)):
            q, r = divmod(v[pc], row[pc])
            if r:
                raise ValueError("vector not in lattice")
            coords.append(q)
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        if any(v):
            raise ValueError("vector not in lattice")
        return coords

    def __contains__(self, v) -> bool:
        try:
            self.coordinates(v)
        except ValueError:
            return False
        return True

    def saturation(self) -> "IntLattice":
        return IntLattice.from_generators(saturate(self.hnf), self.ambient_dim) if self.hnf else self

    def index_in(self, other: "IntLattice") -> int:
        """Index [other : self] for a full-rank sublattice of other."""
        C = [other.coordinates(v) for v in self.hnf]
        if len(C) != other.rank:
            raise ValueError("sublattice is not of full rank")
        return abs(det(C))

    def __add__(self, other: "IntLattice") -> "IntLattice":
        return IntLattice.from_generators(self.hnf + other.hnf, self.ambient_dim)


def saturate(B: IntMatrix) -> IntMatrix:
    """Basis of (Q-span of rows of B) intersected with Z^n, in HNF."""
    B = hnf_basis(B)
    r = len(B)
    if r == 0:
        return []
    # Column reduce: U * B^T = [L^T; 0] so that B * U^T = [L, 0].
    H, U = hnf(transpose(B))
    L = transpose(H[:r])
    # x*B integral  <=>  x*L integral; saturated basis = L^{-1} B.
    Linv_rows = solve_rational(L, identity(r))
    sat = []
    for row in Linv_rows:
        v = [sum(row[i] * B[i][j] for i in range(r)) for j in range(len(B[0]))]
        if any(Fraction(x).denominator != 1 for x in v):
            raise ArithmeticError("saturation produced a non-integral vector")
        sat.append([int(x) for x in v])
    return hnf_basis(sat)


def kernel_and_saturate(M: IntMatrix) -> IntLattice:
    """Saturated integer lattice {v in Z^n : v*M = 0}."""
    n, m = shape(M)
    if n == 0:
        return IntLattice(0, [], [])
    if m == 0 or not any(any(row) for row in M):
        return IntLattice(n, identity(n), identity(n))
    H, U = hnf(M)
    K = [U[i] for i in range(n) if not any(H[i])]
    if not K:
        return IntLattice(n, [], [])
    return IntLattice.from_generators(K, n)


def lattice_intersection(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """HNF basis of the intersection of two lattices given by generator rows."""
    A = hnf_basis(A)
    B = hnf_basis(B)
    if not A or not B:
        return []
    # x*A = y*B  <=>  (x, -y) in left kernel of [A; B]
    K = kernel_and_saturate(A + B).hnf
    gens = [vecmat(k[:len(A)], A) for k in K]
    return hnf_basis(gens) if gens else []
