"""Weight-2 modular symbols for Gamma_0(N).

The ambient space is the quotient of the free module on P^1(Z/N) (Manin
symbols (c:d)) by the relations x + xS = 0 and x + xT + xT^2 = 0, with
S = [0,-1;1,0] and T = [0,-1;1,-1].  A Manin symbol (c:d) stands for the
modular symbol g{0, oo} where g = [a,b;c,d] is any lift to SL_2(Z).

Hecke operators act on row vectors from the right, so matrices built here
multiply as ``v @ T``.  All linear algebra is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import factorint, isprime

from .linalg import (
    IntLattice,
    IntMatrix,
    hnf_basis,
    identity,
    kernel_and_saturate,
    left_kernel_rational,
    mat_add,
    matmul,
    pivots,
    rank_mod_p,
    rref_rational_mm,
    solve_rational,
    transpose,
    xgcd,
)

PRESENTATION_VERSION = 1


# --------------------------------------------------------------------------
# P^1(Z/N)
# --------------------------------------------------------------------------

class P1List:
    """Normalized representatives of P^1(Z/N), sorted by (c, d).

    Normal form: the lexicographically smallest pair (u*c mod N, u*d mod N)
    over units u.  For prime N this is (0, 1) or (1, d/c).
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("level must be positive")
        self.N = N
        self._prime = isprime(N)
        self._units = [u for u in range(1, N) if gcd(u, N) == 1] if N > 1 else [0]
        reps = set()
        for c in range(N):
            for d in range(N):
                if gcd(gcd(c, d), N) == 1:
                    reps.add(self.normalize(c, d))
        if N == 1:
            reps = {(0, 0)}
        self.elements: list[tuple[int, int]] = sorted(reps)
        self._index = {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> tuple[int, int]:
        return self.elements[i]

    def normalize(self, c: int, d: int) -> tuple[int, int]:
        N = self.N
        if N == 1:
            return (0, 0)
        c %= N
        d %= N
        if self._prime:
            if c == 0:
                return (0, 1)
            return (1, d * pow(c, -1, N) % N)
        return _normalize_composite(N, c, d)

    def index(self, c: int, d: int) -> int:
        """Index of the class of (c, d); KeyError if gcd(c, d, N) != 1."""
        N = self.N
        if N == 1:
            return 0
        if self._prime:
            c %= N
            if c == 0:
                if d % N == 0:
                    raise KeyError((c, d))
                return 0
            return 1 + d * pow(c, -1, N) % N
        return self._index[_normalize_composite(N, c % N, d % N)]


@lru_cache(maxsize=None)
def _units(N: int) -> tuple[int, ...]:
    return tuple(u for u in range(1, N) if gcd(u, N) == 1)


def _normalize_composite(N: int, c: int, d: int) -> tuple[int, int]:
    return min((u * c % N, u * d % N) for u in _units(N))


def p1_list(N: int) -> list[tuple[int, int]]:
    """Normalized representatives of P^1(Z/N)."""
    return P1List(N).elements


def lift_to_sl2z(c: int, d: int, N: int) -> tuple[int, int, int, int]:
    """Integers (a, b, c', d') with a*d' - b*c' = 1 and (c', d') = (c, d) mod N."""
    if N == 1:
        return (1, 0, 0, 1)
    c %= N
    d %= N
    if c == 0:
        c = N
    t = d
    while gcd(c, t) != 1:
        t += N
    g, x, y = xgcd(c, t)
    # x*c + y*t = 1  ->  a = y, b = -x
    return (y, -x, c, t)


# --------------------------------------------------------------------------
# Cusps
# --------------------------------------------------------------------------

def _reduce_cusp(a: int, c: int) -> tuple[int, int]:
    if c == 0:
        return (1, 0)
    g = gcd(a, c)
    a, c = a // g, c // g
    if c < 0:
        a, c = -a, -c
    return (a, c)


def cusps_equivalent(x: tuple[int, int], y: tuple[int, int], N: int) -> bool:
    """Gamma_0(N)-equivalence of cusps a/c given as reduced pairs (a, c).

    a1/c1 ~ a2/c2 iff c2 = s*c1 (mod N) and a1 = s*a2 (mod gcd(c1, N))
    for some unit s mod N.
    """
    (a1, c1), (a2, c2) = x, y
    if N == 1:
        return True
    g = gcd(c1, N)
    for s in _units(N):
        if (c2 - s * c1) % N == 0 and (a1 - s * a2) % g == 0:
            return True
    return False


class CuspClassifier:
    def __init__(self, N: int):
        self.N = N
        self.reps: list[tuple[int, int]] = []
        self._memo: dict = {}
        self._prime = isprime(N)

    def classify(self, a: int, c: int) -> int:
        a, c = _reduce_cusp(a, c)
        N = self.N
        if self._prime:
            # two cusps: infinity (N | c) and 0
            key = ("inf",) if c % N == 0 else ("zero",)
        else:
            g = gcd(c, N)
            key = (c % N, a % g)
        if key in self._memo:
            return self._memo[key]
        for i, r in enumerate(self.reps):
            if cusps_equivalent((a, c), r, N):
                self._memo[key] = i
                return i
        self.reps.append((a, c))
        self._memo[key] = len(self.reps) - 1
        return len(self.reps) - 1


def cusp_count(N: int) -> int:
    from sympy import divisors, totient
    return int(sum(totient(gcd(d, N // d)) for d in divisors(N)))


# --------------------------------------------------------------------------
# Genus oracle
# --------------------------------------------------------------------------

def gamma0_index(N: int) -> int:
    mu = N
    for p in factorint(N):
        mu = mu * (p + 1) // p
    return mu


def _nu2(N: int) -> int:
    if N % 4 == 0:
        return 0
    out = 1
    for p in factorint(N):
        if p == 2:
            continue
        out *= 1 + (-1 if p % 4 == 3 else 1)
    return out


def _nu3(N: int) -> int:
    if N % 9 == 0:
        return 0
    out = 1
    for p in factorint(N):
        if p == 3:
            continue
        out *= 1 + (1 if p % 3 == 1 else -1)
    return out


def genus_x0(N: int) -> int:
    """Genus of X_0(N) from the Riemann-Hurwitz formula."""
    mu = gamma0_index(N)
    twelve_g = 12 + mu - 3 * _nu2(N) - 4 * _nu3(N) - 6 * cusp_count(N)
    assert twelve_g % 12 == 0
    return twelve_g // 12


# --------------------------------------------------------------------------
# Heilbronn matrices
# --------------------------------------------------------------------------

def _round_half_away(a: int, b: int) -> int:
    s = -1 if (a < 0) != (b < 0) else 1
    return s * ((2 * abs(a) + abs(b)) // (2 * abs(b)))


@lru_cache(maxsize=None)
def heilbronn_cremona(p: int) -> tuple[tuple[int, int, int, int], ...]:
    """Cremona's Heilbronn matrices of determinant p (p prime), as (a, b, c, d)."""
    L = [(1, 0, 0, p)]
    if p == 2:
        return tuple(L + [(2, 0, 0, 1), (2, 1, 0, 1), (1, 0, 1, 2)])
    half = (p - 1) // 2
    for r in range(-half, half + 1):
        x1, x2, y1, y2 = p, -r, 0, 1
        a, b = -p, r
        L.append((x1, x2, y1, y2))
        while b:
            q = _round_half_away(a, b)
            c = a - b * q
            a, b = -b, c
            x1, x2 = x2, q * x2 - x1
            y1, y2 = y2, q * y2 - y1
            L.append((x1, x2, y1, y2))
    return tuple(L)


# --------------------------------------------------------------------------
# The space
# --------------------------------------------------------------------------

@dataclass
class HeckeOp:
    n: int
    matrix: IntMatrix


@dataclass(eq=False)
class ModSymSpace:
    level: int
    p1: P1List
    ambient_dim: int
    basis_symbols: list[int]        # p1 indices of the free generators
    images: np.ndarray              # (len(p1), ambient_dim) int64: symbol -> ambient coords
    boundary: IntMatrix             # ambient_dim x cusp_count
    cusps: list[tuple[int, int]]
    integral_H: IntLattice          # saturated cuspidal lattice in ambient coords
    _hecke_ambient: dict = field(default_factory=dict, repr=False)
    _hecke: dict = field(default_factory=dict, repr=False)
    _Hpiv: list[int] | None = field(default=None, repr=False)

    @property
    def cusp_count(self) -> int:
        return len(self.cusps)

    @property
    def cuspidal(self) -> IntMatrix:
        return self.integral_H.hnf

    @property
    def cuspidal_dim(self) -> int:
        return self.integral_H.rank

    # ---- symbol evaluation -------------------------------------------------

    def symbol_vector(self, c: int, d: int) -> np.ndarray:
        return self.images[self.p1.index(c, d)]

    def modular_symbol(self, alpha: tuple[int, int], beta: tuple[int, int]) -> np.ndarray:
        """Ambient vector of {alpha, beta}; cusps given as (num, den), (1, 0) = oo."""
        return self._zero_to(beta) - self._zero_to(alpha)

    def _zero_to(self, r: tuple[int, int]) -> np.ndarray:
        # {0, r} = {0, oo} + sum over convergents of {p_{k-1}/q_{k-1}, p_k/q_k}
        v = self.symbol_vector(0, 1).copy()
        a, b = r
        if b == 0:
            return v
        if b < 0:
            a, b = -a, -b
        p2, q2, p1, q1 = 0, 1, 1, 0
        k = 0
        while b:
            t, rem = divmod(a, b)
            p2, q2, p1, q1 = p1, q1, t * p1 + p2, t * q1 + q2
            sgn = -1 if k % 2 == 0 else 1  # (-1)^(k-1)
            v += self.symbol_vector(sgn * q1, q2)
            a, b = b, rem
            k += 1
        return v

    # ---- Hecke operators on the ambient space -----------------------------

    def _heilbronn_ambient(self, mats) -> np.ndarray:
        N = self.level
        n = len(self.p1)
        counts = np.zeros((self.ambient_dim, n), dtype=np.int64)
        index = self.p1.index
        for i, s in enumerate(self.basis_symbols):
            c, d = self.p1[s]
            row = counts[i]
            for (a, b, cc, dd) in mats:
                u, v = c * a + d * cc, c * b + d * dd
                if N > 1 and gcd(gcd(u, v), N) != 1:
                    continue
                row[index(u, v)] += 1
        return counts @ self.images

    def _upper_triangular_ambient(self, reps) -> np.ndarray:
        """Action of sum_h h{alpha, beta} for upper triangular h = (x, y, w)."""
        N = self.level
        out = np.zeros((self.ambient_dim, self.ambient_dim), dtype=np.int64)
        for i, s in enumerate(self.basis_symbols):
            c, d = self.p1[s]
            a, b, c1, d1 = lift_to_sl2z(c, d, N)
            alpha, beta = (b, d1), (a, c1)  # g(0), g(oo)
            for (x, y, w) in reps:
                ha = (x * alpha[0] + y * alpha[1], w * alpha[1]) if alpha[1] else (1, 0)
                hb = (x * beta[0] + y * beta[1], w * beta[1]) if beta[1] else (1, 0)
                out[i] += self.modular_symbol(ha, hb)
        return out

    def hecke_ambient(self, p: int, method: str = "heilbronn") -> IntMatrix:
        """Matrix of T_p (or U_p when p | N) on the ambient space, p prime."""
        key = (p, method)
        if key not in self._hecke_ambient:
            if method == "heilbronn" and self.level % p:
                M = self._heilbronn_ambient(heilbronn_cremona(p))
            else:
                reps = [(1, j, p) for j in range(p)]
                if self.level % p:
                    reps.append((p, 0, 1))
                M = self._upper_triangular_ambient(reps)
            self._hecke_ambient[key] = [[int(x) for x in row] for row in M]
        return self._hecke_ambient[key]

    def star_ambient(self) -> IntMatrix:
        out = []
        for s in self.basis_symbols:
            c, d = self.p1[s]
            out.append([int(x) for x in self.symbol_vector(-c, d)])
        return out

    # ---- restriction to the integral cuspidal lattice ---------------------

    def to_cuspidal(self, M_amb: IntMatrix) -> IntMatrix:
        """Matrix of an ambient operator on the integral_H basis."""
        H = self.cuspidal
        return self.cuspidal_coordinates(matmul(H, M_amb))

    def cuspidal_coordinates(self, vectors: IntMatrix) -> IntMatrix:
        """Integer coordinates of ambient vectors w.r.t. the integral_H basis."""
        H = self.cuspidal
        if self._Hpiv is None:
            self._Hpiv = pivots(H)
        piv = self._Hpiv
        r = len(H)
        out = []
        for v in vectors:
            v = list(v)
            x = [0] * r
            for i in range(r):
                q, rem = divmod(v[piv[i]], H[i][piv[i]])
                if rem:
                    raise ArithmeticError("operator does not preserve the integral lattice")
                x[i] = q
                if q:
                    Hi = H[i]
                    for j in range(piv[i], len(v)):
                        if Hi[j]:
                            v[j] -= q * Hi[j]
            if any(v):
                raise ArithmeticError("vector is not in the cuspidal lattice")
            out.append(x)
        return out


def _solve_relations(p1: P1List):
    """Quotient by the 2- and 3-term relations.

    Returns (basis_symbols, images) with images a Fraction-valued list of
    rows giving every symbol in terms of the free generators.
    """
    n = len(p1)
    idx = p1.index
    # 2-term: x = -xS
    rep = [None] * n        # (variable, sign) or None for zero symbols
    for i, (c, d) in enumerate(p1.elements):
        if rep[i] is not None:
            continue
        j = idx(d, -c)
        if j == i:
            rep[i] = (None, 0)
            continue
        lo, hi = min(i, j), max(i, j)
        rep[lo] = (lo, 1)
        rep[hi] = (lo, -1)
    var_syms = sorted({r[0] for r in rep if r[0] is not None})
    var_index = {s: k for k, s in enumerate(var_syms)}
    nv = len(var_syms)
    # 3-term: x + xT + xT^2 = 0
    seen = [False] * n
    rels = []
    for i, (c, d) in enumerate(p1.elements):
        if seen[i]:
            continue
        orbit = [i, idx(d, -c - d), idx(-c - d, c)]
        rel: dict[int, int] = {}
        for j in orbit:
            seen[j] = True
            v, s = rep[j]
            if v is None:
                continue
            k = var_index[v]
            rel[k] = rel.get(k, 0) + s
        rel = {k: x for k, x in rel.items() if x}
        if rel:
            rels.append(rel)
    # Pivot on the latest variables so that the free generators are the
    # earliest symbols in sorted order.
    order = list(range(nv - 1, -1, -1))
    dense = [[r.get(k, 0) for k in order] for r in rels]
    R, piv = rref_rational_mm(dense) if dense else ([], [])
    piv_vars = [order[pc] for pc in piv]
    free_vars = sorted(set(range(nv)) - set(piv_vars))
    dim = len(free_vars)
    free_pos = {v: k for k, v in enumerate(free_vars)}
    var_img: list[list[Fraction]] = [None] * nv
    for v in free_vars:
        row = [Fraction(0)] * dim
        row[free_pos[v]] = Fraction(1)
        var_img[v] = row
    col_of = {order[j]: j for j in range(nv)}
    for Ri, pv in zip(R, piv_vars):
        row = [Fraction(0)] * dim
        for v in free_vars:
            x = Ri[col_of[v]]
            if x:
                row[free_pos[v]] = -x
        var_img[pv] = row
    zero = [Fraction(0)] * dim
    images = []
    for i in range(n):
        v, s = rep[i]
        if v is None:
            images.append(zero)
        elif s == 1:
            images.append(var_img[var_index[v]])
        else:
            images.append([-x for x in var_img[var_index[v]]])
    basis_symbols = [var_syms[v] for v in free_vars]
    return basis_symbols, images


def _integral_images(images: list[list[Fraction]], dim: int):
    """Rewrite images in a Z-basis of the lattice spanned by all symbols."""
    if all(x.denominator == 1 for row in images for x in row):
        return np.array([[int(x) for x in row] for row in images], dtype=np.int64).reshape(len(images), dim), None
    from math import lcm
    den = 1
    for row in images:
        for x in row:
            den = lcm(den, x.denominator)
    frac_rows = {tuple(row) for row in images if any(x.denominator != 1 for x in row)}
    gens = [[den * int(i == j) for j in range(dim)] for i in range(dim)]
    gens += [[int(x * den) for x in row] for row in frac_rows]
    L = hnf_basis(gens)  # basis of den * lattice
    lat = IntLattice(dim, L, L)
    coords = [lat.coordinates([int(x * den) for x in row]) for row in images]
    return np.array(coords, dtype=np.int64), L


def build_space(N: int) -> ModSymSpace:
    """Ambient weight-2 modular symbols for Gamma_0(N) with integral cuspidal lattice."""
    if N < 1:
        raise ValueError("level must be positive")
    p1 = P1List(N)
    basis_symbols, frac_images = _solve_relations(p1)
    dim = len(basis_symbols)
    images, _ = _integral_images(frac_images, dim)
    # boundary map on the integral ambient basis
    cls = CuspClassifier(N)
    bvals = []
    # when each basis symbol maps to its own unit vector, ambient basis vector i
    # is the symbol basis_symbols[i] and boundaries can be read off directly
    if all(images[s, k] == int(k == i) for i, s in enumerate(basis_symbols) for k in range(dim)):
        for s in basis_symbols:
            c, d = p1[s]
            a, b, c1, d1 = lift_to_sl2z(c, d, N)
            bvals.append((cls.classify(a, c1), cls.classify(b, d1)))
        ncusp = len(cls.reps)
        boundary = [[0] * ncusp for _ in range(dim)]
        for i, (ci, cj) in enumerate(bvals):
            boundary[i][ci] += 1
            boundary[i][cj] -= 1
    else:
        boundary = _boundary_general(p1, images, cls, N, dim)
        ncusp = len(cls.reps)
        boundary = [row + [0] * (ncusp - len(row)) for row in boundary]
    H = kernel_and_saturate(boundary) if dim else IntLattice(0, [], [])
    return ModSymSpace(N, p1, dim, basis_symbols, images, boundary, list(cls.reps), H)


def _boundary_general(p1, images, cls, N, dim):
    """Boundary map when the ambient Z-basis is not a set of symbols."""
    syms = []
    for s in range(len(p1)):
        c, d = p1[s]
        a, b, c1, d1 = lift_to_sl2z(c, d, N)
        syms.append((cls.classify(a, c1), cls.classify(b, d1)))
    ncusp = len(cls.reps)
    sym_bd = [[0] * ncusp for _ in syms]
    for k, (ci, cj) in enumerate(syms):
        sym_bd[k][ci] += 1
        sym_bd[k][cj] -= 1
    # Solve images * B = sym_bd for B (dim x ncusp); images has full column rank.
    img = [[int(x) for x in row] for row in images]
    # pick dim independent symbol rows
    chosen, basis = [], []
    for k, row in enumerate(img):
        if rank_mod_p(basis + [row]) > len(basis):
            basis.append(row)
            chosen.append(k)
        if len(basis) == dim:
            break
    X = solve_rational(transpose(basis), transpose([sym_bd[k] for k in chosen]))
    B = transpose(X)
    out = [[int(x) for x in row] for row in B]
    return out


# --------------------------------------------------------------------------
# Hecke operators on the cuspidal lattice
# --------------------------------------------------------------------------

def hecke_matrix(S: ModSymSpace, n: int) -> HeckeOp:
    """T_n (U_p-parts for p | N) on the integral cuspidal basis."""
    if n < 1:
        raise ValueError("Hecke index must be positive")
    if n in S._hecke:
        return HeckeOp(n, S._hecke[n])
    g = S.cuspidal_dim
    if n == 1 or g == 0:
        M = identity(g)
    else:
        fac = factorint(n)
        if len(fac) > 1:
            M = None
            for p, e in fac.items():
                T = hecke_matrix(S, p**e).matrix
                M = T if M is None else matmul(M, T)
        else:
            (p, e), = fac.items()
            if e == 1:
                M = S.to_cuspidal(S.hecke_ambient(p))
            elif S.level % p == 0:
                M = matmul(hecke_matrix(S, p ** (e - 1)).matrix, hecke_matrix(S, p).matrix)
            else:
                Tp = hecke_matrix(S, p).matrix
                M = mat_add(matmul(Tp, hecke_matrix(S, p ** (e - 1)).matrix),
                            hecke_matrix(S, p ** (e - 2)).matrix, -p)
    S._hecke[n] = M
    return HeckeOp(n, M)


def star_matrix(S: ModSymSpace) -> IntMatrix:
    return S.to_cuspidal(S.star_ambient())


def star_plus_subspace(S: ModSymSpace) -> IntMatrix:
    """Basis (cuspidal coordinates) of the +1 eigenspace of the star involution."""
    St = star_matrix(S)
    return left_kernel_rational(mat_add(St, identity(len(St)), -1))
