"""
Level 431: a non-Gorenstein Hecke algebra at 2
===============================================

Walks through the whole computation at N = 431 and prints what each stage
finds: the two elliptic curves, their mod-2 screen, the maximal ideal they
cut out, the completed local algebra, its etale presentation, the socle of
A/2A, an explicit reducible parameter ideal, and the intersection of the
two optimal quotients inside J_0(431).

    python3 demos/level431.py
"""

import time

from sympy import Poly, primerange, symbols

from heckegor import gorenstein as gor
from heckegor.cli import bundled_curves, screen_curve
from heckegor.galois2 import mod2_traces
from heckegor.heckealg import (build_algebra, complete_at, hecke_charpoly_on_forms,
                               ideal_from_curve_traces, mod2_maximal_ideals)
from heckegor.intersect import format_group, homology_lattice, intersection_group, rational_eigen_lattices
from heckegor.modsym import build_space, genus_x0

N = 431
t0 = time.perf_counter()

S = build_space(N)
print(f"cuspidal modular symbols: dimension {S.cuspidal_dim}, genus {genus_x0(N)}")

x = symbols("X")
cp = hecke_charpoly_on_forms(S, 3)
fac = Poly(list(reversed(cp)), x, modulus=2).factor_list()[1]
print("charpoly(T3) mod 2 factors with multiplicities:",
      ", ".join(f"({f.as_expr()})^{e}" if e > 1 else f"({f.as_expr()})" for f, e in fac))

print("\nthe two curves of conductor 431:")
curves = [r.curve() for r in bundled_curves(N)]
for E in curves:
    s = screen_curve(E)
    print(f"  {E.label} {list(E.coeffs)}: irreducible {s['irreducible']}, S3 {s['s3']}, "
          f"2 splits {s['splits_at_2']}, a2 = {s['a2']}, Frob3 order {s['frob3']['order']}")

T = build_algebra(S)
ideals = mod2_maximal_ideals(T)
print(f"\nHecke algebra of rank {T.rank} (Sturm bound {T.sturm}); maximal ideals above 2:")
for m in ideals:
    print(f"  m{m.index}: residue degree {m.residue_degree}, local dimension {m.local_dim}")

m = ideal_from_curve_traces(T, mod2_traces(curves[0], primerange(2, T.sturm + 1)))
A = complete_at(T, m, 64)
print(f"\nboth curves reduce to m{m.index}; the completion has rank {A.rank}")

pres = gor.etale_presentation(A, generator=A.hecke_image(3))
print("etale components (e, f):", pres.signature)
q = [i for i, c in enumerate(pres.components) if c.degree == 2][0]
print("10 is a square in the quadratic component:", pres.square_in_component(q, 10))
print("image lattice (HNF; the quadratic component in the basis 1, eta of its integers):")
for row in pres.lattice_basis:
    print("   ", row)
print("index in the maximal order:", pres.maximal_order_index)

B = gor.reduce_mod2(A)
print(f"\nA/2A: socle dimension {gor.socle_dim(B)}, nilpotency index {gor.nilpotency_index(B)}"
      f" -> Gorenstein: {gor.is_gorenstein(A)}")
w = gor.socle_witness(A)
print("a reducible parameter ideal built from the socle:", gor.witness_checks(A, w))

L = rational_eigen_lattices(S, T)
g = intersection_group(homology_lattice(S), *L)
print(f"\nintersection of the two optimal curves inside J_0({N}): {format_group(g)}")
print(f"done in {time.perf_counter() - t0:.1f}s")
