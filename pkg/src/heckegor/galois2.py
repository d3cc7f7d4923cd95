"""Mod-2 Galois representations of elliptic curves over Q.

The 2-torsion field K = Q(E[2]) is the splitting field of the 2-division
cubic, and rho(Frob_p) in GL_2(F_2) = S_3 is read off from how that cubic
factors mod p: three roots, one root or none give Frobenius of order 1, 2
or 3, and only the 3-cycles have trace 1.  Nothing here builds K itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
import sympy as sp

from .padic import factor_over_q2, is_square_q2

_X = sp.symbols("x")


class BadReduction(ValueError):
    pass


class RamifiedPrime(ValueError):
    pass


@dataclass(frozen=True)
class CurveModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str | None = field(default=None, compare=False)

    @classmethod
    def from_list(cls, coeffs, label=None) -> "CurveModel":
        a1, a2, a3, a4, a6 = (int(c) for c in coeffs)
        return cls(a1, a2, a3, a4, a6, label)

    def __post_init__(self):
        if self.disc == 0:
            raise ValueError("singular Weierstrass equation")
        if 4 * self.b8 != self.b2 * self.b6 - self.b4 ** 2:
            raise AssertionError("b-invariant identity failed")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.a1, self.a2, self.a3, self.a4, self.a6

    @property
    def b2(self) -> int:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.coeffs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


@dataclass(frozen=True)
class FrobProfile:
    p: int
    order: int
    trace: int


def ap(E: CurveModel, p: int) -> int:
    """p + 1 - #E(F_p) by enumerating x (and y when p = 2)."""
    if E.disc % p == 0:
        raise BadReduction(f"p = {p} divides the discriminant")
    a1, a2, a3, a4, a6 = (c % p for c in E.coeffs)
    if p == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    count += 1
        return p + 1 - count
    x = np.arange(p, dtype=object)
    # y^2 + (a1 x + a3) y = f(x)  <=>  (2y + a1 x + a3)^2 = (a1 x + a3)^2 + 4 f(x)
    d = ((a1 * x + a3) ** 2 + 4 * (x ** 3 + a2 * x * x + a4 * x + a6)) % p
    sq = np.zeros(p, dtype=np.int64)
    sq[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
    d = d.astype(np.int64)
    roots = np.where(d == 0, 1, np.where(sq[d] == 1, 2, 0))
    return p + 1 - (1 + int(roots.sum()))


def two_division_cubic(E: CurveModel) -> list[int]:
    """4x^3 + b2 x^2 + 2 b4 x + b6, increasing degree."""
    return [E.b6, 2 * E.b4, E.b2, 4]


def _cubic_poly(E: CurveModel) -> sp.Poly:
    return sp.Poly(list(reversed(two_division_cubic(E))), _X)


def mod2_irreducible_and_s3(E: CurveModel) -> tuple[bool, bool]:
    """(no rational 2-torsion, Q(E[2]) has degree 6)."""
    irreducible = not any(g.degree() == 1 for g, _ in _cubic_poly(E).factor_list()[1])
    D = E.disc
    square = D > 0 and isqrt(D) ** 2 == D
    return irreducible, irreducible and not square


def frob_profile(E: CurveModel, p: int, check: bool = True) -> FrobProfile:
    if p == 2 or E.disc % p == 0:
        raise RamifiedPrime(f"p = {p} is 2 or divides the discriminant")
    c = [x % p for x in two_division_cubic(E)]
    nroots = sum(1 for x in range(p) if (c[0] + x * (c[1] + x * (c[2] + x * c[3]))) % p == 0)
    order = {0: 3, 1: 2, 3: 1}[nroots]
    prof = FrobProfile(p, order, 1 if order == 3 else 0)
    if check and prof.trace != ap(E, p) % 2:
        raise AssertionError(f"Frobenius trace disagrees with a_p mod 2 at p = {p}")
    return prof


def monic_two_division_cubic(E: CurveModel) -> list[int]:
    """16 * cubic(X / 4) / 4: X^3 + b2 X^2 + 8 b4 X + 16 b6, same splitting field."""
    return [16 * E.b6, 8 * E.b4, E.b2, 1]


def splits_completely_at_two(E: CurveModel, k: int = 64) -> bool:
    """Frob_2 trivial on K: the cubic splits over Q_2 and disc(E) is a 2-adic square."""
    facs = factor_over_q2(monic_two_division_cubic(E), k)
    return all(F.degree == 1 for F in facs) and is_square_q2(E.disc)


def same_mod2_rep(E: CurveModel, F: CurveModel, bound: int = 1000) -> bool:
    """Screen for isomorphic irreducible mod-2 representations.

    Sound for rejection only: agreement of discriminant square class and of
    Frobenius orders up to the bound does not prove isomorphism.
    """
    if not (mod2_irreducible_and_s3(E)[0] and mod2_irreducible_and_s3(F)[0]):
        return False
    D = E.disc * F.disc
    if D < 0 or isqrt(D) ** 2 != D:
        return False
    bad = 2 * E.disc * F.disc
    for p in sp.primerange(3, bound + 1):
        if bad % p == 0:
            continue
        if frob_profile(E, p, check=False).order != frob_profile(F, p, check=False).order:
            return False
    return True


def mod2_traces(E: CurveModel, primes) -> dict[int, int]:
    """a_p mod 2 at good primes (tr rho(Frob_p))."""
    return {p: ap(E, p) % 2 for p in primes if E.disc % p}
