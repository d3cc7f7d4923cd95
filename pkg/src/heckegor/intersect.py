"""Intersections of optimal elliptic quotients inside J_0(N), from homology.

For abelian subvarieties A, B of J with finite intersection, the map
A x B -> A + B has kernel A /\\ B, and on first homology this is the
inclusion of Lambda_A + Lambda_B into the saturated lattice
H /\\ (V_A + V_B).  So A /\\ B is the (finite) quotient of the latter by the
former, read off from a Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm
from string import ascii_lowercase

from sympy import primerange

from .linalg import (
    IntLattice,
    identity,
    left_kernel_rational,
    rank_mod_p,
    saturate,
    smith_invariants,
    solve_rational,
)
from .modsym import ModSymSpace, hecke_matrix


class OverlappingEigenspaces(ValueError):
    pass


def homology_lattice(S: ModSymSpace) -> IntLattice:
    """H_1(X_0(N), Z) in its own coordinates (the basis Hecke matrices act on)."""
    g2 = S.cuspidal_dim
    return IntLattice(g2, identity(g2), identity(g2))


FAILS = "multiplicity one FAILS"
INCONCLUSIVE = "inconclusive by this method"


@dataclass(eq=False)
class EigenLattice:
    """Lambda = H /\\ V for a rational newform, in homology coordinates."""

    label: str
    V: list[list[int]]                       # saturated integral basis rows
    lattice: IntLattice
    eigenvalues: dict[int, int] = field(default_factory=dict)

    def fingerprint(self, count: int = 8) -> list[int]:
        return [self.eigenvalues[p] for p in sorted(self.eigenvalues)[:count]]


def _restrict(W: list[list[int]], M) -> list[list[Fraction]]:
    """Matrix of M on the row space of W (W M = C W)."""
    images = [[sum(w[i] * M[i][j] for i in range(len(w)) if w[i]) for j in range(len(M[0]))] for w in W]
    return solve_rational(W, images)


def _integer_eigenspaces(W, M, p: int):
    """Split the row space of W by integer eigenvalues a of M, |a| <= 2 sqrt(p)."""
    C = _restrict(W, M)
    d = len(W)
    den = lcm(*(Fraction(c).denominator for row in C for c in row))
    Ci = [[int(Fraction(c) * den) for c in row] for row in C]
    bound = isqrt(4 * p)
    out = []
    for a in range(-bound, bound + 1):
        shifted = [[Ci[i][j] - a * den * (i == j) for j in range(d)] for i in range(d)]
        if rank_mod_p(shifted) == d:
            continue
        K = left_kernel_rational(shifted)
        if len(K) >= 2:
            sub = [[sum(k[i] * W[i][j] for i in range(d)) for j in range(len(W[0]))] for k in K]
            out.append((a, saturate(sub)))
    return out


def rational_eigen_lattices(S: ModSymSpace, T=None, verify_bound: int | None = None,
                            split_bound: int = 200, hecke=None) -> list[EigenLattice]:
    """One saturated rank-2 lattice per rational newform of level N.

    Candidate subspaces are split by integer eigenvalues of T_2, T_3, ...
    until each has dimension 2; survivors are checked to be common
    eigenspaces for all primes up to verify_bound (default: the Sturm bound).
    T (a HeckeLattice) is optional and only used for its Sturm bound;
    hecke(p) may supply T_p matrices.
    """
    dim = S.cuspidal_dim
    if verify_bound is None:
        verify_bound = T.sturm if T is not None else max(50, S.level // 6)
    mats = {}

    def Tp(p):
        if p not in mats:
            mats[p] = hecke(p) if hecke is not None else hecke_matrix(S, p).matrix
        return mats[p]

    pending = [([], identity(dim))]
    done = []
    for p in primerange(2, split_bound):
        if not pending:
            break
        nxt = []
        for evs, W in pending:
            if S.level % p == 0:
                nxt.append((evs, W))
                continue
            for a, sub in _integer_eigenspaces(W, Tp(p), p):
                if len(sub) == 2:
                    done.append((evs + [(p, a)], sub))
                else:
                    nxt.append((evs + [(p, a)], sub))
        pending = nxt
    if pending:
        raise ArithmeticError("eigenspace splitting did not finish within the prime bound")
    out = []
    for evs, V in done:
        eig = dict(evs)
        for p in primerange(2, verify_bound + 1):
            C = _restrict(V, Tp(p))
            a = C[0][0]
            if C != [[a, 0], [0, a]] or Fraction(a).denominator != 1:
                break
            eig[p] = int(a)
        else:
            out.append((eig, V))
    out.sort(key=lambda ev: [ev[0][p] for p in sorted(ev[0])])
    return [EigenLattice(ascii_lowercase[i], V, IntLattice.from_generators(V, dim), eig)
            for i, (eig, V) in enumerate(out)]


def _coords_in(H: IntLattice, rows):
    """Rational coordinates of rows with respect to H's HNF basis."""
    return solve_rational(H.hnf, rows)


def intersection_group(H: IntLattice, A: EigenLattice, B: EigenLattice) -> list[int]:
    """Invariants d1 | d2 | ... (all > 1) of A /\\ B, given both inside H."""
    LA = [[int(c) for c in row] for row in _coords_in(H, A.lattice.hnf)]
    LB = [[int(c) for c in row] for row in _coords_in(H, B.lattice.hnf)]
    gens = LA + LB
    if rank_mod_p(gens) < len(gens):
        raise OverlappingEigenspaces(f"{A.label} and {B.label} share a rational direction")
    L = saturate(gens)
    C = solve_rational(L, gens)
    if any(Fraction(c).denominator != 1 for row in C for c in row):
        raise AssertionError("sum of lattices not contained in its saturation")
    inv = smith_invariants([[int(c) for c in row] for row in C])
    return [d for d in inv if d > 1]


def multiplicity_one_verdict(invariants: list[int], congruent: bool) -> str:
    """Congruent curves meeting trivially certify failure of mod-2 multiplicity one."""
    if congruent and not invariants:
        return FAILS
    return INCONCLUSIVE


def format_group(invariants: list[int]) -> str:
    if not invariants:
        return "0"
    return " x ".join(f"Z/{d}" for d in invariants)
