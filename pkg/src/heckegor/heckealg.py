"""The Hecke algebra T_N as an integer lattice of operators, its maximal
ideals above 2, and completions at those ideals modulo 2^k.

Elements of T_N are handled through their coordinates in a fixed Z-basis
(the Hermite basis of the span of T_1, ..., T_B) together with integer
structure constants, so everything downstream is plain integer arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from math import gcd

import numpy as np
from sympy import isprime, primerange

from .linalg import (
    IntMatrix,
    charpoly,
    hnf,
    matmul,
    pivots,
    rank_mod_p,
    rref_mod_p,
    saturate,
    solve_rational,
)
from .padic import PrecisionLoss
from .modsym import ModSymSpace, gamma0_index, genus_x0, hecke_matrix, star_plus_subspace

log = logging.getLogger(__name__)


class ClosureFailure(ArithmeticError):
    """A product of basis elements fell outside the integer span."""


class NoMatch(LookupError):
    pass


class Ambiguous(LookupError):
    pass


def sturm_bound(N: int) -> int:
    """Weight-2 Sturm bound floor([SL2(Z) : Gamma_0(N)] / 6)."""
    return gamma0_index(N) // 6


# --------------------------------------------------------------------------
# Integral Hecke algebra
# --------------------------------------------------------------------------

def _combine(coeffs: list[int], mats: np.ndarray) -> np.ndarray:
    """Exact sum_i coeffs[i] * mats[i]."""
    cmax = max((abs(int(c)) for c in coeffs), default=0)
    mmax = int(np.abs(mats).max()) if mats.size else 0
    if cmax * mmax * max(len(coeffs), 1) < 2**62 and mats.dtype != object:
        return np.tensordot(np.array(coeffs, dtype=np.int64), mats, axes=1)
    return np.tensordot(np.array([int(c) for c in coeffs], dtype=object), mats.astype(object), axes=1)


def _as_array(M):
    arr = np.array(M, dtype=object)
    try:
        if max((abs(int(x)) for x in arr.flat), default=0) < 2**31:
            return arr.astype(np.int64)
    except OverflowError:
        pass
    return arr


@dataclass(eq=False)
class HeckeLattice:
    level: int
    sturm: int
    ops: dict[int, IntMatrix]            # n -> T_n on the integral cuspidal basis
    basis: np.ndarray                    # (g, 2g, 2g) operator matrices
    mult: np.ndarray                     # (g, g, g): b_i b_j = sum_l mult[i,j,l] b_l
    one: list[int]
    proj_cols: list[int]                 # flattened positions used as coordinates
    proj_hnf: IntMatrix                  # projections of the basis, upper echelon
    mult_closed: bool = False
    space: ModSymSpace | None = field(default=None, repr=False)
    _coords: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.one)

    def coords_of_projection(self, proj: list[int]) -> list[int]:
        """Integer coordinates from the projection of an element."""
        H = self.proj_hnf
        piv = pivots(H)
        v = list(proj)
        x = []
        for row, pc in zip(H, piv):
            q, r = divmod(v[pc], row[pc])
            if r:
                raise ClosureFailure("element is not in the integral span")
            x.append(q)
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        if any(v):
            raise ClosureFailure("element is not in the rational span")
        return x

    def coords(self, M: IntMatrix) -> list[int]:
        """Coordinates of an operator matrix, verified by exact reconstruction."""
        flat = [x for row in M for x in row]
        x = self.coords_of_projection([flat[c] for c in self.proj_cols])
        if self.matrix(x) != [list(map(int, row)) for row in M]:
            raise ClosureFailure("operator is not in the Hecke algebra span")
        return x

    def hecke_coords(self, n: int) -> list[int]:
        if n not in self._coords:
            if n not in self.ops:
                if self.space is None:
                    raise KeyError(n)
                self.ops[n] = hecke_matrix(self.space, n).matrix
            self._coords[n] = self.coords(self.ops[n])
        return self._coords[n]

    def matrix(self, x) -> IntMatrix:
        return [[int(v) for v in row] for row in _combine(x, self.basis)]

    def mul(self, x, y) -> list[int]:
        C = self.mult.astype(object)
        My = np.tensordot(np.array(y, dtype=object), C, axes=([0], [1]))  # (i, l)
        return [int(v) for v in np.array(x, dtype=object) @ My]


def build_algebra(S: ModSymSpace, bound: int | None = None, hecke=None) -> HeckeLattice:
    """Integer span of T_1..T_B with verified rank and ring closure.

    hecke(n) may supply T_n (e.g. from a cache); it defaults to computing it.
    """
    N = S.level
    if S.cuspidal_dim == 0:
        raise ValueError(f"no cusp forms of weight 2 at level {N}")
    B = sturm_bound(N) if bound is None else bound
    if hecke is None:
        hecke = lambda n: hecke_matrix(S, n).matrix
    ops = {n: hecke(n) for n in range(1, B + 1)}
    d = S.cuspidal_dim
    flat = [[x for row in ops[n] for x in row] for n in range(1, B + 1)]
    # choose coordinate positions on which the span projects injectively
    _, cols = rref_mod_p(flat, 2147483629)
    P = [[row[c] for c in cols] for row in flat]
    H, _ = hnf(P, transform=False)
    Hn = [row for row in H if any(row)]
    r = len(Hn)
    if r != len(cols):
        raise ClosureFailure("projection is not injective on the Hecke span")
    if N > 1 and isprime(N) and r != genus_x0(N):
        raise ClosureFailure(f"Hecke algebra has rank {r}, expected {genus_x0(N)}")
    # express each Hermite basis element through independent T_n's
    chosen, sel = [], []
    for i, row in enumerate(P):
        if rank_mod_p(sel + [row]) > len(sel):
            sel.append(row)
            chosen.append(i)
        if len(sel) == r:
            break
    X = solve_rational(sel, Hn)
    Tsel = _as_array([ops[i + 1] for i in chosen])
    basis = []
    for coeffs in X:
        den = 1
        for v in coeffs:
            den = den * v.denominator // gcd(den, v.denominator)
        M = _combine([int(v * den) for v in coeffs], Tsel)
        if any(int(v) % den for v in M.flat):
            raise ClosureFailure("Hermite basis element is not integral")
        basis.append([[int(v) // den for v in row] for row in M])
    basis_arr = _as_array(basis).reshape(r, d, d)
    one = None
    T = HeckeLattice(N, B, ops, basis_arr, np.zeros((r, r, r), dtype=np.int64),
                     [0] * r, list(cols), Hn, space=S)
    # every T_n must be an exact integer combination of the basis
    for n in range(1, B + 1):
        T._coords[n] = T.coords(ops[n])
    one = T._coords[1]
    # structure constants from projected products
    Bobj = basis_arr.astype(object)
    prods = np.empty((r, r, r), dtype=object)
    for k, c in enumerate(cols):
        i0, j0 = divmod(c, d)
        prods[:, :, k] = Bobj[:, i0, :].dot(Bobj[:, :, j0].T)
    mult = np.empty((r, r, r), dtype=object)
    for i in range(r):
        for j in range(i, r):
            x = T.coords_of_projection(list(prods[i, j, :]))
            mult[i, j, :] = x
            mult[j, i, :] = x
    T.mult = _as_array(mult)
    T.one = one
    T.mult_closed = True
    return T


def hecke_charpoly_on_forms(S: ModSymSpace, n: int) -> list[int]:
    """Characteristic polynomial of T_n on S_2(Gamma_0(N)) (the star-plus half)."""
    W = saturate(star_plus_subspace(S))
    Tn = hecke_matrix(S, n).matrix
    img = matmul(W, Tn)
    X = solve_rational(W, img)
    den = 1
    for row in X:
        for v in row:
            den = den * v.denominator // np.gcd(den, v.denominator)
    if den != 1:
        raise ArithmeticError("plus subspace basis is not Hecke-integral")
    return charpoly([[int(v) for v in row] for row in X])


# --------------------------------------------------------------------------
# Maximal ideals above 2
# --------------------------------------------------------------------------

def f2_left_kernel(M: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : x M = 0} over F_2."""
    A = (np.array(M, dtype=np.int64) % 2).T.copy()
    nrows, ncols = A.shape
    piv = []
    r = 0
    for c in range(ncols):
        nz = [i for i in range(r, nrows) if A[i, c]]
        if not nz:
            continue
        A[[r, nz[0]]] = A[[nz[0], r]]
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        piv.append(c)
        r += 1
    free = [j for j in range(ncols) if j not in piv]
    out = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = A[i, f]
        out.append(v)
    return out


def f2_rank(M) -> int:
    M = np.array(M, dtype=np.int64) % 2
    if M.size == 0:
        return 0
    return len(rref_mod_p(M.tolist(), 2)[1])


class F2Algebra:
    def __init__(self, mult: np.ndarray):
        self.c = np.array(mult, dtype=np.int64) % 2
        self.g = self.c.shape[0]

    def mul(self, x, y) -> np.ndarray:
        My = np.tensordot(np.asarray(y, dtype=np.int64), self.c, axes=([0], [1]))
        return (np.asarray(x, dtype=np.int64) @ My) % 2

    def mul_matrix(self, y) -> np.ndarray:
        """Rows: b_i * y."""
        return np.tensordot(np.asarray(y, dtype=np.int64), self.c, axes=([0], [1])) % 2

    def frobenius(self) -> np.ndarray:
        return np.array([self.c[i, i, :] for i in range(self.g)], dtype=np.int64) % 2

    def stable_power(self) -> np.ndarray:
        """Matrix of x -> x^(2^m) with 2^m >= dim (kills the radical)."""
        F = self.frobenius()
        P = np.eye(self.g, dtype=np.int64)
        m = 1
        while m < self.g + 1:
            P = (P @ F) % 2
            m *= 2
        return P

    def primitive_idempotents(self, one) -> list[np.ndarray]:
        F = self.frobenius()
        E = f2_left_kernel((F - np.eye(self.g, dtype=np.int64)) % 2)
        parts = [np.asarray(one, dtype=np.int64) % 2]
        for e in E:
            new = []
            for u in parts:
                a = self.mul(u, e)
                b = (u + a) % 2
                for w in (a, b):
                    if w.any():
                        new.append(w)
            parts = new
        return parts


@dataclass(frozen=True)
class MaxIdealSpec:
    index: int
    residue_char: int
    residue_degree: int
    local_dim: int
    idempotent: tuple[int, ...]
    trace_data: dict = field(hash=False, compare=False)
    eisenstein: bool = False


def _residue_minpoly(alg: F2Algebra, z: np.ndarray, e: np.ndarray) -> tuple[int, ...]:
    """Minimal polynomial over F_2 of z in the residue field e*A^(2^m)."""
    powers = [e % 2]
    cur = e % 2
    while True:
        cur = alg.mul(cur, z)
        vecs = powers + [cur]
        K = f2_left_kernel(np.array(vecs).T.T)
        if K:
            rel = K[0]
            deg = max(i for i in range(len(rel)) if rel[i])
            return tuple(int(x) for x in rel[:deg + 1])
        powers.append(cur)


def mod2_maximal_ideals(T: HeckeLattice) -> list[MaxIdealSpec]:
    """Maximal ideals of T (x) F_2 via the primitive idempotents."""
    if not T.mult_closed:
        raise ClosureFailure("algebra closure not verified")
    alg = F2Algebra(T.mult)
    P = alg.stable_power()
    primes = [p for p in primerange(2, T.sturm + 1)]
    specs = []
    for e in alg.primitive_idempotents(T.one):
        E = alg.mul_matrix(e)
        local_dim = f2_rank(E)
        f = f2_rank((E @ P) % 2)
        traces = {}
        for p in primes:
            z = (alg.mul(np.array(T.hecke_coords(p)) % 2, e) @ P) % 2
            if f == 1:
                traces[p] = 0 if not z.any() else 1
            else:
                traces[p] = _residue_minpoly(alg, z, e)
        eis = f == 1 and all(traces[p] == (1 + p) % 2 for p in primes if T.level % p)
        specs.append((f, tuple(traces[p] for p in primes), e, local_dim, traces, eis))
    specs.sort(key=lambda s: (s[0], s[1]))
    return [MaxIdealSpec(i, 2, f, ld, tuple(int(x) for x in e), tr, eis)
            for i, (f, _, e, ld, tr, eis) in enumerate(specs)]


def ideal_from_curve_traces(T: HeckeLattice, traces: dict[int, int],
                            irreducible: bool | None = None) -> MaxIdealSpec:
    """The residue-degree-1 maximal ideal whose T_p values match the given traces."""
    ideals = mod2_maximal_ideals(T)
    good = [p for p in traces if p <= T.sturm and T.level % p and isprime(p)]
    matches = [m for m in ideals if m.residue_degree == 1
               and all(m.trace_data[p] == traces[p] % 2 for p in good)]
    if not matches:
        raise NoMatch("no maximal ideal matches the supplied traces")
    if len(matches) > 1:
        raise Ambiguous(f"{len(matches)} maximal ideals match the supplied traces")
    m = matches[0]
    if irreducible is not None:
        m = replace(m, eisenstein=not irreducible)
    return m


# --------------------------------------------------------------------------
# Completion modulo 2^k
# --------------------------------------------------------------------------

def _lift_idempotent(T: HeckeLattice, e0, k: int) -> list[int]:
    mod = 1 << k
    e = [int(x) for x in e0]
    for _ in range(2 * k.bit_length() + 4):
        e2 = [x % mod for x in T.mul(e, e)]
        if e2 == [x % mod for x in e]:
            return [x % mod for x in e]
        e3 = T.mul(e2, e)
        e = [(3 * a - 2 * b) % mod for a, b in zip(e2, e3)]
    e2 = [x % mod for x in T.mul(e, e)]
    if e2 != [x % mod for x in e]:
        raise PrecisionLoss("idempotent lifting did not converge")
    return e


class TorsionDetected(ArithmeticError):
    pass


def _odd_pivot_echelon(rows: list[list[int]], k: int):
    """Reduced echelon form over Z/2^k using odd pivots only.

    Returns (basis rows, pivot columns).  Raises if the span is not a free
    direct summand (some leftover row has only even entries).
    """
    mod = 1 << k
    A = [[x % mod for x in row] for row in rows]
    piv = []
    basis = []
    ncols = len(A[0]) if A else 0
    remaining = A
    for c in range(ncols):
        i = next((i for i, row in enumerate(remaining) if row[c] & 1), None)
        if i is None:
            continue
        row = remaining.pop(i)
        inv = pow(row[c], -1, mod)
        row = [x * inv % mod for x in row]
        for other in remaining:
            f = other[c]
            if f:
                for j in range(ncols):
                    other[j] = (other[j] - f * row[j]) % mod
        for other in basis:
            f = other[c]
            if f:
                for j in range(ncols):
                    other[j] = (other[j] - f * row[j]) % mod
        basis.append(row)
        piv.append(c)
    if any(any(row) for row in remaining):
        raise TorsionDetected("module is not free: 2-torsion in the quotient")
    return basis, piv


@dataclass(eq=False)
class LocalAlgebra:
    """e * (T (x) Z/2^k) with its own basis and structure constants."""

    level: int
    precision: int
    ideal: MaxIdealSpec
    idempotent: list[int]          # lifted e in T-coordinates
    basis: list[list[int]]         # local basis in T-coordinates (mod 2^k)
    pivot_cols: list[int]
    mult: list                     # rank x rank x rank, entries mod 2^k
    one: list[int]
    hecke: HeckeLattice = field(repr=False)

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    @property
    def rank(self) -> int:
        return len(self.basis)

    def mul(self, x, y) -> list[int]:
        mod = self.modulus
        r = self.rank
        out = [0] * r
        for i in range(r):
            if not x[i]:
                continue
            for j in range(r):
                if y[j]:
                    c = x[i] * y[j]
                    row = self.mult[i][j]
                    for l in range(r):
                        if row[l]:
                            out[l] += c * row[l]
        return [v % mod for v in out]

    def mul_matrix(self, x) -> list[list[int]]:
        """Rows: v_i * x (matrix of multiplication by x on row vectors)."""
        r = self.rank
        return [self.mul([int(i == j) for j in range(r)], x) for i in range(r)]

    def from_hecke(self, t) -> list[int]:
        """Image of a T-element (coordinates) in local coordinates."""
        et = self.hecke.mul(self.idempotent, t)
        return [et[c] % self.modulus for c in self.pivot_cols]

    def hecke_image(self, n: int) -> list[int]:
        return self.from_hecke(self.hecke.hecke_coords(n))

    def residue(self, x) -> int:
        """Image of x in the residue field F_2 (residue degree 1 only)."""
        alg = F2Algebra(np.array(self.mult, dtype=object) % 2)
        P = alg.stable_power()
        z = np.array([int(v) % 2 for v in x], dtype=np.int64) @ P % 2
        return 0 if not z.any() else 1

    def max_ideal_generators(self) -> list[list[int]]:
        """Z/2^k-module generators of the maximal ideal (residue degree 1)."""
        r = self.rank
        gens = [[2 * v % self.modulus for v in self.one]]
        for i in range(r):
            v = [int(i == j) for j in range(r)]
            if self.residue(v):
                v = [(a - b) % self.modulus for a, b in zip(v, self.one)]
            gens.append(v)
        return gens


def complete_at(T: HeckeLattice, m: MaxIdealSpec, k: int = 64) -> LocalAlgebra:
    """Completion of T at m, computed modulo 2^k."""
    if k < 8:
        raise ValueError("precision must be at least 8")
    mod = 1 << k
    e = _lift_idempotent(T, m.idempotent, k)
    g = T.rank
    rows = [T.mul([int(i == j) for j in range(g)], e) for i in range(g)]
    basis, piv = _odd_pivot_echelon(rows, k)
    r = len(basis)
    if r != m.local_dim:
        raise PrecisionLoss(f"local rank {r} differs from the F_2-dimension {m.local_dim}")
    mult = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            prod = T.mul(basis[i], basis[j])
            x = [prod[c] % mod for c in piv]
            mult[i][j] = x
            mult[j][i] = x
    one = [e[c] % mod for c in piv]
    A = LocalAlgebra(T.level, k, m, e, basis, piv, mult, one, T)
    # the basis is in reduced echelon form, so coordinates are read off at pivots;
    # confirm this reproduces every product exactly.
    for i in range(r):
        prod = T.mul(basis[i], basis[i])
        recon = [sum(x * b[c] for x, b in zip(mult[i][i], basis)) % mod for c in range(g)]
        if recon != [v % mod for v in prod]:
            raise PrecisionLoss("local basis does not reproduce products")
    return A


def lifted_idempotents(T: HeckeLattice, k: int = 64) -> list[list[int]]:
    return [_lift_idempotent(T, m.idempotent, k) for m in mod2_maximal_ideals(T)]
