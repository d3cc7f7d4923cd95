"""Gorenstein tests for completed Hecke algebras.

Two independent routes decide the same question:

* the socle of A/2A: a one-dimensional Cohen-Macaulay local ring is
  Gorenstein exactly when the Artinian ring A/2A has a one-dimensional socle;
* explicit reducible parameter ideals i = i1 /\\ i2, verified as lattices.

The etale presentation writes A inside the product of the rings of
integers of the components of A (x) Q_2, which is how generator lists for
these algebras are usually quoted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product

import numpy as np

from .heckealg import F2Algebra, LocalAlgebra, TorsionDetected, f2_left_kernel, f2_rank
from .linalg import IntLattice, charpoly, det, hnf_basis, lattice_intersection, solve_rational
from .padic import PrecisionLoss, Q2Factor, factor_over_q2, is_square_q2, taylor_shift, v2


class ElementOutsideAlgebra(ValueError):
    pass


class NoPrimitiveElement(LookupError):
    pass


# --------------------------------------------------------------------------
# Artinian reduction and socle
# --------------------------------------------------------------------------

@dataclass(eq=False)
class ArtinianF2Algebra:
    dim: int
    mult: np.ndarray               # dim x dim x dim over F_2
    one: np.ndarray
    radical: list[np.ndarray]

    @property
    def residue_degree(self) -> int:
        return self.dim - len(self.radical)

    def mul(self, x, y) -> np.ndarray:
        return F2Algebra(self.mult).mul(x, y)


def artinian_from_table(mult, one) -> ArtinianF2Algebra:
    alg = F2Algebra(np.array(mult, dtype=np.int64) % 2)
    rad = f2_left_kernel(alg.stable_power())
    return ArtinianF2Algebra(alg.g, alg.c, np.array([int(v) % 2 for v in one], dtype=np.int64), rad)


def reduce_mod2(A: LocalAlgebra) -> ArtinianF2Algebra:
    """A / 2A with its induced multiplication."""
    if f2_rank(np.array(A.basis, dtype=object) % 2) != A.rank:
        raise TorsionDetected("multiplication by 2 is not injective on the local factor")
    B = artinian_from_table(np.array(A.mult, dtype=object) % 2, A.one)
    if len(f2_left_kernel(F2Algebra(B.mult).stable_power())) != len(B.radical):
        raise AssertionError("radical is not stable")
    return B


def socle(B: ArtinianF2Algebra) -> list[np.ndarray]:
    """F_2-basis of the annihilator of the radical."""
    if not B.radical:
        return [np.eye(B.dim, dtype=np.int64)[i] for i in range(B.dim)]
    alg = F2Algebra(B.mult)
    M = np.concatenate([alg.mul_matrix(r) for r in B.radical], axis=1)
    return f2_left_kernel(M)


def socle_dim(B: ArtinianF2Algebra) -> int:
    """Dimension of the socle over the residue field."""
    return len(socle(B)) // B.residue_degree


def is_gorenstein(A: LocalAlgebra) -> bool:
    return socle_dim(reduce_mod2(A)) == 1


# --------------------------------------------------------------------------
# Parameter-ideal witnesses
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealWitness:
    """Generators (in local-algebra coordinates) of i, i1, i2, and t with m^t in i."""

    ideal: tuple
    ideal1: tuple
    ideal2: tuple
    power: int = 2
    precision: int | None = None


def ideal_lattice(A: LocalAlgebra, gens, k: int) -> list[list[int]]:
    """HNF of the preimage in Z^r of the ideal generated by gens, mod 2^k."""
    mod = 1 << k
    r = A.rank
    rows = [[(v % mod) for v in A.mul(g, [int(i == j) for j in range(r)])]
            for g in gens for i in range(r)]
    rows += [[mod * int(i == j) for j in range(r)] for i in range(r)]
    return hnf_basis(rows)


def _check_element(A: LocalAlgebra, x):
    if len(x) != A.rank or any(int(v) != v for v in x):
        raise ElementOutsideAlgebra(x)
    return [int(v) for v in x]


def witness_checks(A: LocalAlgebra, w: IdealWitness) -> dict[str, bool]:
    gens = [[_check_element(A, x) for x in part] for part in (w.ideal, w.ideal1, w.ideal2)]
    k = min(A.precision, w.precision or A.precision)
    if k <= w.power:
        raise PrecisionLoss("working precision does not exceed the witness power")
    I, I1, I2 = (ideal_lattice(A, g, k) for g in gens)
    LI = IntLattice.from_generators(I)
    # products of t module generators of m span m^t
    mgens = A.max_ideal_generators()
    contains_power = True
    for combo in combinations_with_replacement(range(len(mgens)), w.power):
        x = A.one
        for i in combo:
            x = A.mul(x, mgens[i])
        if [v % (1 << k) for v in x] not in LI:
            contains_power = False
            break
    meet = lattice_intersection(I1, I2)
    return {
        "contains_power_of_m": contains_power,
        "is_intersection": meet == I,
        "strict_in_i1": I != I1,
        "strict_in_i2": I != I2,
    }


def verify_witness(A: LocalAlgebra, w: IdealWitness) -> bool:
    """True certifies a reducible parameter ideal, hence non-Gorenstein."""
    return all(witness_checks(A, w).values())


# --------------------------------------------------------------------------
# Etale presentation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaleComponent:
    """One factor of A (x) Q_2, generated by theta = image of the generator.

    Coordinates in this component are taken in the basis 1, eta, eta^2, ...
    of its ring of integers, where theta = shift + unit * 2^scale * eta.
    """

    e: int
    f: int
    minpoly: tuple[int, ...]       # of theta, mod 2^precision
    eta_poly: tuple[int, ...]      # of eta
    shift: int = 0
    scale: int = 0
    unit: int = 1

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def in_eta(self, theta_coeffs, mod):
        """Reduce a polynomial in theta to coordinates in 1, eta, ..."""
        sub = taylor_shift(list(theta_coeffs), self.shift)
        step = self.unit << self.scale
        sub = [Fraction(a) * step ** i for i, a in enumerate(sub)]
        return [_fraction_mod(a, mod) for a in _poly_rem(sub, list(self.eta_poly))]

    def rebased(self, eps: int, s: int, mod: int) -> "EtaleComponent":
        """Same component with eta replaced by eps * eta + s (degree 2 only)."""
        c, b, _ = self.eta_poly
        eta = ((s * s - b * eps * s + c) % mod, (b * eps - 2 * s) % mod, 1)
        shift = self.shift - self.unit * eps * s * (1 << self.scale)
        return EtaleComponent(self.e, self.f, self.minpoly, eta, shift, self.scale, self.unit * eps)

    def mul(self, x, y, mod):
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] += a * b
        h = self.eta_poly
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d + 1):
                    prod[i - d + j] -= c * h[j]
        return [c % mod for c in prod[:d]]


@dataclass(eq=False)
class EtalePresentation:
    precision: int
    generator: list[int]
    components: list[EtaleComponent]
    embedding: list[list[int]]         # row i: image of basis element i
    lattice_basis: list[list[int]] = field(default_factory=list)

    @property
    def signature(self) -> list[tuple[int, int]]:
        return [(c.e, c.f) for c in self.components]

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    @property
    def maximal_order_index(self) -> int:
        """Index of the image lattice in the product of the rings of integers."""
        out = 1
        for i, row in enumerate(self.lattice_basis):
            out *= row[i]
        return out

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for c in self.components:
            out.append(pos)
            pos += c.degree
        return out

    def to_components(self, x) -> list[int]:
        mod = self.modulus
        r = len(self.embedding)
        return [sum(x[i] * self.embedding[i][j] for i in range(r)) % mod for j in range(r)]

    def to_algebra(self, vec) -> list[int]:
        """Local-algebra coordinates of a component vector; must lie in the lattice."""
        sol = solve_rational(self.embedding, [list(vec)])[0]
        if any(v2(Fraction(c).denominator) for c in sol if c):
            raise ElementOutsideAlgebra(vec)
        mod = self.modulus
        return [Fraction(c).numerator * pow(Fraction(c).denominator, -1, mod) % mod for c in sol]

    def from_theta(self, blocks) -> list[int]:
        """Component vector from per-component coefficient lists in powers of theta.

        theta is the image of the generator in each component; this is the
        natural way to write elements such as (0, 0, theta + 1).
        """
        out = []
        for c, coeffs in zip(self.components, blocks):
            coeffs = list(coeffs) + [0] * (c.degree - len(coeffs))
            out.extend(c.in_eta(coeffs, self.modulus))
        return out

    def component_mul(self, x, y) -> list[int]:
        out = []
        for c, o in zip(self.components, self.offsets()):
            d = c.degree
            out.extend(c.mul(x[o:o + d], y[o:o + d], self.modulus))
        return out

    def square_in_component(self, idx: int, a) -> bool:
        """Whether the rational a is a square in component idx (degree <= 2)."""
        c = self.components[idx]
        if c.degree == 1:
            return is_square_q2(a)
        if c.degree != 2:
            raise NotImplementedError("square classes only for degree <= 2 components")
        c0, b, _ = c.minpoly
        D = b * b - 4 * c0
        D %= self.modulus
        if D >= self.modulus // 2:
            D -= self.modulus
        return is_square_q2(a) or is_square_q2(Fraction(a) * D)


def _krylov(A: LocalAlgebra, x) -> list[list[int]]:
    rows = [list(A.one)]
    for _ in range(A.rank - 1):
        rows.append(A.mul(rows[-1], x))
    return rows


def _candidates(A: LocalAlgebra, seed: int, tries: int):
    r = A.rank
    unit = [[int(i == j) for j in range(r)] for i in range(r)]
    yield from unit
    for i, j in combinations(range(r), 2):
        yield [a + b for a, b in zip(unit[i], unit[j])]
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        yield [int(c) for c in rng.integers(-3, 4, size=r)]


def _krylov_valuation(A, x) -> int | None:
    D = det(_krylov(A, x)) % A.modulus
    return v2(D) if D else None


def _primitive_candidates(A: LocalAlgebra, seed: int = 0, tries: int = 200):
    for x in _candidates(A, seed, tries):
        v = _krylov_valuation(A, x)
        if v is not None and v < A.precision // 4:
            yield [c % A.modulus for c in x]


def find_primitive(A: LocalAlgebra, seed: int = 0, tries: int = 200) -> list[int]:
    """First candidate whose powers span A (x) Q_2, to working precision."""
    for x in _primitive_candidates(A, seed, tries):
        return x
    raise NoPrimitiveElement(f"no primitive element among {tries} random candidates")


def _integral_generator(g: Q2Factor) -> tuple[int, int, tuple[int, ...]]:
    """(shift, scale, minpoly of eta) with Z_2[eta] the maximal order."""
    poly = list(g.poly)
    d = g.degree
    if d == 1 or g.e == 1 or g.e == d and _eisenstein_after_shift(poly) is not None:
        return 0, 0, tuple(poly)
    if d != 2:
        raise NotImplementedError("integral basis only for degree <= 2 or monogenic components")
    shift, scale = 0, 0
    mod = 1 << g.precision
    while True:
        for t in (0, 1):
            h = taylor_shift(poly, t)
            h = [c << i for i, c in enumerate(h)]
            if all(c % 4 == 0 for c in h[:2]):
                poly = [h[0] // 4, h[1] // 4, 1]
                shift += t << scale
                scale += 1
                mod >>= 2
                break
        else:
            return shift, scale, tuple(c % mod for c in poly)


def _eisenstein_after_shift(poly):
    for c in (0, 1):
        h = taylor_shift(poly, c)
        if all(x % 2 == 0 for x in h[:-1]) and h[0] % 4 != 0:
            return c
    return None


def _fraction_mod(a, mod):
    a = Fraction(a)
    if a.denominator % 2 == 0:
        raise PrecisionLoss("non-integral component coordinate")
    return a.numerator * pow(a.denominator, -1, mod) % mod


def _poly_rem(P, g):
    P = list(P)
    d = len(g) - 1
    for i in range(len(P) - 1, d - 1, -1):
        c = P[i]
        if c:
            for j in range(d + 1):
                P[i - d + j] -= c * g[j]
    return P[:d] + [0] * max(0, d - len(P))


def etale_presentation(A: LocalAlgebra, generator=None, seed: int = 0,
                       attempts: int = 8) -> EtalePresentation:
    """Embed A into the product of rings of integers of the components of A (x) Q_2.

    Without an explicit generator, primitive elements are tried in a fixed
    order until the 2-adic factorization of one of their charpolys succeeds.
    """
    if generator is not None:
        return _presentation_for(A, list(generator))
    last = None
    for i, x in enumerate(_primitive_candidates(A, seed)):
        if i == attempts:
            break
        try:
            return _presentation_for(A, x)
        except NotImplementedError as exc:
            last = exc
    if last is None:
        raise NoPrimitiveElement("no primitive element found")
    raise last


def _presentation_for(A: LocalAlgebra, x) -> EtalePresentation:
    r, k, mod = A.rank, A.precision, A.modulus
    vK = _krylov_valuation(A, x)
    if vK is None or vK >= k // 4:
        raise NoPrimitiveElement("supplied generator does not span A (x) Q_2")
    cp = charpoly(A.mul_matrix(x))
    cp = [c % mod for c in cp]
    factors = factor_over_q2(cp, k, check_squarefree=False)
    comps = []
    for g in factors:
        shift, scale, eta = _integral_generator(g)
        comps.append((g, EtaleComponent(g.e, g.f, g.poly, eta, shift, scale)))
    cut = min(16, min(g.precision for g, _ in comps))
    comps.sort(key=lambda gc: (gc[1].e, gc[1].f, [c % (1 << cut) for c in gc[1].minpoly]))
    prec = min(g.precision for g, _ in comps) - 2 * vK - 2 * max(c.scale * c.degree for _, c in comps)
    if prec < 8:
        raise PrecisionLoss(f"etale coordinates only known to {prec} bits")
    pmod = 1 << prec
    K = _krylov(A, x)
    P = solve_rational(K, [[int(i == j) for j in range(r)] for i in range(r)])
    embedding = []
    for row in P:
        img = []
        for g, c in comps:
            img.extend(c.in_eta(_poly_rem(row, list(g.poly)), pmod))
        embedding.append(img)
    pres = EtalePresentation(prec, [c % mod for c in x], [c for _, c in comps], embedding)
    _check_homomorphism(A, pres)
    pres = _canonical_order(pres)
    pres.lattice_basis = lattice_from_generators(pres.embedding, prec)
    return pres


MAX_ORDERINGS = 5040


def _congruence_depths(pres: EtalePresentation) -> list[int]:
    """For each degree-1 component, the largest t such that it agrees with some
    other degree-1 component modulo 2^t on the whole lattice (0 otherwise)."""
    offs = pres.offsets()
    split = [i for i, c in enumerate(pres.components) if c.degree == 1]
    depth = [0] * len(pres.components)
    for i in split:
        for j in split:
            if i == j:
                continue
            diffs = [(row[offs[i]] - row[offs[j]]) % pres.modulus for row in pres.embedding]
            t = min((v2(d) for d in diffs if d), default=pres.precision)
            depth[i] = max(depth[i], t)
    return depth


def _canonical_order(pres: EtalePresentation) -> EtalePresentation:
    """Canonical component order: by (e, f), then by congruence depth (weakest
    first), then the permutation giving the lexicographically least lattice HNF.

    Quadratic components also have their integral basis 1, eta normalized
    (eta -> +-eta + s) as part of the same minimization.  Unlike choices read
    off the generator's minimal polynomials, the result does not depend on
    which primitive element was used.
    """
    comps = pres.components
    depth = _congruence_depths(pres)
    groups: dict[tuple[int, int, int], list[int]] = {}
    for i, c in enumerate(comps):
        groups.setdefault((c.e, c.f, depth[i]), []).append(i)
    keys = sorted(groups)
    count = 1
    for g in groups.values():
        for n in range(2, len(g) + 1):
            count *= n
    if count > MAX_ORDERINGS:
        keys_only = [i for key in keys for i in groups[key]]
        return _permuted(pres, keys_only)
    bases = _basis_choices(pres)
    best = None
    for choice in product(*(permutations(groups[key]) for key in keys)):
        order = [i for block in choice for i in block]
        for rebase in bases:
            cand = _permuted(_rebased(pres, rebase), order)
            hnf_key = lattice_from_generators(cand.embedding, pres.precision)
            if best is None or hnf_key < best[0]:
                best = (hnf_key, cand)
    return best[1]


def _basis_period(pres: EtalePresentation, idx: int) -> int:
    """Least 2^j with 2^j times the unit of component idx in the lattice; the
    lattice is unchanged under eta -> eta + 2^j there."""
    L = lattice_from_generators(pres.embedding, pres.precision)
    o = pres.offsets()[idx]
    for j in range(pres.precision + 1):
        v = [0] * len(L)
        v[o] = 1 << j
        if _in_hnf(L, v):
            return 1 << j
    return pres.modulus


def _in_hnf(H, v) -> bool:
    v = list(v)
    for row in H:
        piv = next(i for i, x in enumerate(row) if x)
        if v[piv] % row[piv]:
            return False
        q = v[piv] // row[piv]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def _basis_choices(pres: EtalePresentation) -> list[dict[int, tuple[int, int]]]:
    quad = [i for i, c in enumerate(pres.components) if c.degree == 2]
    opts = []
    for i in quad:
        P = _basis_period(pres, i)
        opts.append([(i, (eps, s)) for eps in (1, -1) for s in range(P)])
    total = 1
    for o in opts:
        total *= len(o)
    if total > MAX_ORDERINGS:
        return [{}]
    return [dict(c) for c in product(*opts)]


def _rebased(pres: EtalePresentation, rebase: dict[int, tuple[int, int]]) -> EtalePresentation:
    if not rebase:
        return pres
    mod = pres.modulus
    offs = pres.offsets()
    comps = list(pres.components)
    emb = [list(row) for row in pres.embedding]
    for i, (eps, s) in rebase.items():
        comps[i] = comps[i].rebased(eps, s, mod)
        o = offs[i]
        for row in emb:
            a, b = row[o], row[o + 1]
            # a + b eta = (a - eps b s) + eps b eta'
            row[o], row[o + 1] = (a - eps * b * s) % mod, eps * b % mod
    return EtalePresentation(pres.precision, pres.generator, comps, emb)


def _permuted(pres: EtalePresentation, order: list[int]) -> EtalePresentation:
    offs = pres.offsets()
    comps = pres.components
    cols = [j for i in order for j in range(offs[i], offs[i] + comps[i].degree)]
    emb = [[row[j] for j in cols] for row in pres.embedding]
    return EtalePresentation(pres.precision, pres.generator, [comps[i] for i in order], emb)


def _check_homomorphism(A: LocalAlgebra, pres: EtalePresentation):
    pmod = pres.modulus
    r = A.rank
    one = pres.to_components(A.one)
    expect = []
    for c in pres.components:
        expect.extend([1] + [0] * (c.degree - 1))
    if one != [v % pmod for v in expect]:
        raise PrecisionLoss("embedding does not preserve the identity")
    for i in range(r):
        for j in range(i, r):
            lhs = pres.to_components(A.mult[i][j])
            rhs = pres.component_mul(pres.embedding[i], pres.embedding[j])
            if lhs != rhs:
                raise PrecisionLoss("embedding is not multiplicative to working precision")


def lattice_from_generators(gens, prec: int) -> list[list[int]]:
    """HNF of the Z_2-span of component vectors, mod 2^prec."""
    mod = 1 << prec
    r = len(gens[0])
    rows = [[v % mod for v in g] for g in gens] + [[mod * int(i == j) for j in range(r)] for i in range(r)]
    return hnf_basis(rows)


def nilpotency_index(B: ArtinianF2Algebra) -> int:
    """Least t with rad^t = 0 (1 for a field)."""
    alg = F2Algebra(B.mult)
    cur = [np.asarray(r) for r in B.radical]
    t = 1
    while cur:
        nxt = [alg.mul(a, b) for a in cur for b in B.radical]
        nxt = [v for v in nxt if v.any()]
        if not nxt:
            return t + 1
        cur = _f2_row_basis(nxt)
        t += 1
        if t > B.dim + 1:
            raise AssertionError("radical is not nilpotent")
    return t


def _f2_row_basis(rows):
    out = []
    for r in rows:
        cand = out + [r]
        if f2_rank(np.array(cand)) == len(cand):
            out.append(r)
    return out


def socle_witness(A: LocalAlgebra) -> IdealWitness | None:
    """Reducible parameter ideal 2A = (2, s1) /\\ (2, s2) from two socle elements of A/2A.

    Returns None when the socle is one-dimensional (Gorenstein case).
    """
    B = reduce_mod2(A)
    soc = socle(B)
    if len(soc) // B.residue_degree < 2:
        return None
    s1, s2 = (list(map(int, v)) for v in soc[:2])
    two = [2 * v % A.modulus for v in A.one]
    return IdealWitness((two,), (two, s1), (two, s2), power=nilpotency_index(B))


def witness_from_components(pres: EtalePresentation, ideal, ideal1, ideal2,
                            power: int = 2, theta: bool = False) -> IdealWitness:
    """Build a witness from generators written in the etale presentation.

    Generators are component vectors, or with theta=True per-component
    coefficient lists in powers of the generator's image.  Raises
    ElementOutsideAlgebra if a generator is not in the completion.
    """
    def conv(v):
        return pres.to_algebra(pres.from_theta(v) if theta else v)

    parts = [tuple(conv(v) for v in part) for part in (ideal, ideal1, ideal2)]
    return IdealWitness(*parts, power=power, precision=pres.precision)
