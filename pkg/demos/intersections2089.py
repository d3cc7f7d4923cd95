"""
Level 2089: intersections of the five optimal curves
=====================================================

Genus 173, so modular symbols of dimension 346.  Hecke matrices go through
the on-disk cache (a second run takes seconds).  Four of the five rational
newforms are congruent mod 2; among their optimal curves one pair meets in
(Z/2)^2 and the others meet trivially, so multiplicity one fails there too.

    python3 demos/intersections2089.py            (a few minutes cold)
"""

import time

from heckegor.cli import HeckeCache, bundled_curves, default_cache_dir, intersection_table, newform_table
from heckegor.modsym import build_space

N = 2089
t0 = time.perf_counter()
S = build_space(N)
print(f"dimension {S.cuspidal_dim} after {time.perf_counter() - t0:.1f}s")
cache = HeckeCache(default_cache_dir())
lattices, rows = newform_table(S, hecke=cache.source(S), curves=bundled_curves(N))
print(f"cache: {cache.hits} hits, {cache.misses} misses")
for r in rows:
    red = "reducible" if r["reducible_mod2"] else "irreducible"
    print(f"  {r['curve']}: a_p = {list(r['fingerprint'].values())} ({red} mod 2)")
print()
for x in intersection_table(S, lattices, rows):
    print(f"  {x['curves'][0]} & {x['curves'][1]}: congruent {x['congruent_mod2']!s:5}  "
          f"{x['group']:10}  {x['verdict']}")
print(f"\ntotal {time.perf_counter() - t0:.1f}s")
