"""
Level 503: matching a quoted lattice and ideal decomposition
=============================================================

At N = 503 the completion at the relevant ideal splits into four copies of
Z_2 after tensoring with Q_2.  Its image in Z_2^4 is compared with the
span of (1,1,1,1), (0,2,0,0), (0,0,2,2), (0,0,0,4), and the parameter
ideal ((2,2,2,2)) is checked to be the intersection of ((0,2,2,2),(2,0,0,0))
and ((2,0,2,2),(0,2,0,0)).  The three rational newforms are congruent mod 2
and their optimal curves meet trivially, which by itself rules out
multiplicity one.

    python3 demos/level503.py
"""

from heckegor import gorenstein as gor
from heckegor.cli import bundled_curves, intersection_table, newform_table
from heckegor.heckealg import build_algebra, complete_at, mod2_maximal_ideals
from heckegor.modsym import build_space

N = 503
S = build_space(N)
T = build_algebra(S)
m = max((m for m in mod2_maximal_ideals(T) if m.residue_degree == 1), key=lambda m: m.local_dim)

for k in (64, 128):
    A = complete_at(T, m, k)
    pres = gor.etale_presentation(A)
    print(f"2^{k}: components {pres.signature}, lattice {pres.lattice_basis}")

w = gor.witness_from_components(pres, [[2, 2, 2, 2]],
                                [[0, 2, 2, 2], [2, 0, 0, 0]],
                                [[2, 0, 2, 2], [0, 2, 0, 0]])
print("quoted ideal decomposition:", gor.witness_checks(A, w))
print("socle dimension of A/2A:", gor.socle_dim(gor.reduce_mod2(A)))

lattices, rows = newform_table(S, curves=bundled_curves(N))
print()
for r in rows:
    print(f"{r['label']} ({r['curve']}): a_p = {list(r['fingerprint'].values())}")
for x in intersection_table(S, lattices, rows):
    print(f"{'/'.join(x['curves'])}: congruent {x['congruent_mod2']}, meet in {x['group']} -> {x['verdict']}")
