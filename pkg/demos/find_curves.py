"""
Recover curve equations for the rational newforms of a prime level
====================================================================

Searches small Weierstrass models with discriminant +-N^k, keeps those whose
a_p agree with one of the eigen-lattices in homology, and prints table lines
in the usual allcurves layout.  Torsion is the gcd of #E(F_p); the rank
column is the analytic rank read off the first nonvanishing derivative of a
truncated L-series at s = 1.

    python3 demos/find_curves.py 503
    python3 demos/find_curves.py 2089 --a4 400 --a6 3000     (several minutes)
"""

import argparse
import itertools
from math import gcd

import mpmath
import numpy as np
from sympy import factorint, primerange

from heckegor.galois2 import CurveModel, ap
from heckegor.intersect import _restrict, rational_eigen_lattices
from heckegor.modsym import build_space, hecke_matrix

parser = argparse.ArgumentParser()
parser.add_argument("level", type=int)
parser.add_argument("--a4", type=int, default=250)
parser.add_argument("--a6", type=int, default=2000)
args = parser.parse_args()
N = args.level

S = build_space(N)
classes = rational_eigen_lattices(S)
primes = [p for p in primerange(2, 30) if p != N]
print(f"# {len(classes)} rational newforms at level {N}")
for L in classes:
    print("#  ", L.label, [L.eigenvalues[p] for p in primes])

# vectorised discriminant over a4 for every (a1, a2, a3, a6)
powers = {s * N ** k for k in range(1, 13) for s in (1, -1)}
a4 = np.arange(-args.a4, args.a4 + 1, dtype=object)
hits = {}
for a1, a2, a3 in itertools.product((0, 1), (-1, 0, 1), (0, 1)):
    for a6 in range(-args.a6, args.a6 + 1):
        b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        D = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        for i in np.nonzero([d in powers for d in D])[0]:
            E = CurveModel(a1, a2, a3, int(a4[i]), a6)
            aps = [ap(E, p) for p in primes]
            for L in classes:
                if aps == [L.eigenvalues[p] for p in primes]:
                    # any model in the isogeny class will do; keep the smallest |disc|
                    key = (abs(E.disc), E.coeffs)
                    if L.label not in hits or key < hits[L.label][0]:
                        hits[L.label] = (key, E)


def an_table(E, aN, count):
    """a_1..a_count from a_p by multiplicativity and the Hecke recursion."""
    a = [0] * (count + 1)
    a[1] = 1
    for p in primerange(2, count + 1):
        app = aN if p == N else ap(E, p)
        pk, prev, cur = p, 1, app
        while pk <= count:
            for m in range(1, count // pk + 1):
                if m % p:
                    a[pk * m] = cur * a[m]
            eps = 0 if p == N else p
            prev, cur = cur, app * cur - eps * prev
            pk *= p
    return a


def analytic_rank(E, aN):
    """Order of vanishing of L(E, s) at 1 from the truncated Mellin series."""
    sign = aN  # root number at a prime of multiplicative reduction
    x = 2 * mpmath.pi / mpmath.sqrt(N)
    count = int(40 / float(x)) + 10
    a = an_table(E, aN, count)
    for r in range(0 if sign == 1 else 1, 6, 2):
        # L^(r)(1) = 2 r! sum a_n/n G_r(2 pi n / sqrt N), G_r from the incomplete gamma
        val = sum(a[n] / mpmath.mpf(n) * _G(r, x * n) for n in range(1, count + 1) if a[n])
        if abs(val) > 1e-8:
            return r
    return None


def _G(r, t):
    if r == 0:
        return mpmath.e ** (-t)
    return mpmath.quad(lambda u: mpmath.e ** (-t * u) * mpmath.log(u) ** (r - 1) / u, [1, mpmath.inf]) / mpmath.factorial(r - 1)


def torsion_bound(E):
    g = 0
    for p in primerange(3, 200):
        if E.disc % p:
            g = gcd(g, p + 1 - ap(E, p))
    return g


for L in classes:
    if L.label not in hits:
        print(f"# {L.label}: no model found in the search box")
        continue
    E = hits[L.label][1]
    # split multiplicative reduction gives a_N = +1; read it off the eigen-lattice
    aN = L.eigenvalues.get(N)
    if aN is None:
        aN = int(_restrict(L.V, hecke_matrix(S, N).matrix)[0][0])
    coeffs = ",".join(str(c) for c in E.coeffs)
    print(f"{N} {L.label} 1 [{coeffs}] {analytic_rank(E, aN)} {torsion_bound(E)}"
          f"   # disc {E.disc} = {factorint(E.disc)}")
