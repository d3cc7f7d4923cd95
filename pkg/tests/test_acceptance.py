"""The twelve acceptance criteria, one marker per criterion.

A summary line per criterion is printed at the end of the run (see conftest).
Parts needing level 2089 are marked slow and run with --slow.
"""

import pytest
import sympy as sp
from sympy import primerange

from heckegor import gorenstein as gor
from heckegor.cli import REFERENCE_WITNESSES, analyze, bundled_curves
from heckegor.galois2 import ap, frob_profile, mod2_irreducible_and_s3, mod2_traces, splits_completely_at_two, two_division_cubic
from heckegor.heckealg import complete_at, hecke_charpoly_on_forms, ideal_from_curve_traces, mod2_maximal_ideals, sturm_bound
from heckegor.intersect import homology_lattice, intersection_group, rational_eigen_lattices
from heckegor.linalg import charpoly
from heckegor.modsym import genus_x0, hecke_matrix

import test_galois2
import test_heckealg
import test_linalg
import test_modsym
from conftest import algebra, space, target_completion

crit = pytest.mark.criterion
HNF_503 = [[1, 1, 1, 1], [0, 2, 0, 0], [0, 0, 2, 2], [0, 0, 0, 4]]


def attached_completion(N, k=64):
    """Completion at the ideal cut out by the bundled curves' mod-2 traces."""
    T = algebra(N)
    ms = set()
    for r in bundled_curves(N):
        E = r.curve()
        if mod2_irreducible_and_s3(E)[0]:
            ms.add(ideal_from_curve_traces(T, mod2_traces(E, primerange(2, T.sturm + 1))).index)
    (idx,) = ms
    return complete_at(T, mod2_maximal_ideals(T)[idx], k)


# 1 -----------------------------------------------------------------------

@crit(1, "cuspidal dimension equals twice the genus")
@pytest.mark.parametrize("N, dim", [(431, 72), (503, 84)])
def test_c01_dimensions(N, dim):
    assert space(N).cuspidal_dim == dim == 2 * genus_x0(N)


@crit(1, "cuspidal dimension equals twice the genus")
@pytest.mark.slow
def test_c01_dimension_2089():
    assert space(2089).cuspidal_dim == 346 == 2 * genus_x0(2089)


# 2 -----------------------------------------------------------------------

@crit(2, "Sturm bounds 72 and 84")
def test_c02_sturm():
    assert (sturm_bound(431), sturm_bound(503)) == (72, 84)


# 3 -----------------------------------------------------------------------

@crit(3, "charpoly(T3) at 431 is (X-1)^4 g(X) mod 2 with g(1) != 0")
def test_c03_charpoly_forms():
    cp = hecke_charpoly_on_forms(space(431), 3)
    x = sp.symbols("x")
    P = sp.Poly(list(reversed(cp)), x, modulus=2)
    mult = dict((f.as_expr(), e) for f, e in P.factor_list()[1]).get(x + 1, 0)
    assert mult == 4
    g = sp.Poly(list(reversed(cp)), x).quo(sp.Poly((x - 1) ** 4, x))
    assert g.eval(1) % 2 == 1


@crit(3, "charpoly(T3) at 431 is (X-1)^4 g(X) mod 2 with g(1) != 0")
def test_c03_charpoly_homology():
    # second route: on homology the charpoly is the square of the one on forms
    full = charpoly(hecke_matrix(space(431), 3).matrix)
    half = hecke_charpoly_on_forms(space(431), 3)
    x = sp.symbols("x")
    assert sp.Poly(list(reversed(full)), x) == sp.Poly(list(reversed(half)), x) ** 2


# 4 -----------------------------------------------------------------------

@crit(4, "431 completion: rank 4, Q2 x Q2 x Q2(sqrt 10), stable at 128 bits")
@pytest.mark.parametrize("k", [64, 128])
def test_c04_completion_431(k):
    A = attached_completion(431, k)
    assert A.rank == 4
    pres = gor.etale_presentation(A, generator=A.hecke_image(3))
    assert sorted(pres.signature) == [(1, 1), (1, 1), (2, 1)]
    (q,) = [i for i, c in enumerate(pres.components) if c.degree == 2]
    assert pres.square_in_component(q, 10)
    assert not any(pres.square_in_component(q, d) for d in (-1, 2, -2, 5, -5, -10))


# 5 -----------------------------------------------------------------------

@crit(5, "socle dimension > 1 at 431 and 503 (not Gorenstein)")
def test_c05_socles():
    s431 = gor.socle_dim(gor.reduce_mod2(attached_completion(431)))
    s503 = gor.socle_dim(gor.reduce_mod2(attached_completion(503)))
    assert s431 in (2, 3) and s503 == 3


# 6 -----------------------------------------------------------------------

@crit(6, "503 lattice equals the quoted Z_2-span")
def test_c06_lattice_503():
    A = attached_completion(503)
    assert gor.etale_presentation(A).lattice_basis == HNF_503
    assert gor.etale_presentation(A, seed=5).lattice_basis == HNF_503


# 7 -----------------------------------------------------------------------

def _reference(N):
    A = attached_completion(N)
    ref = REFERENCE_WITNESSES[N]
    gen = A.hecke_image(ref["generator"]) if ref["generator"] else None
    pres = gor.etale_presentation(A, generator=gen)
    w = gor.witness_from_components(pres, ref["ideal"], ref["ideal1"], ref["ideal2"], theta=ref["theta"])
    return gor.verify_witness(A, w)


@crit(7, "quoted reducible parameter ideals verify")
def test_c07_witness_503():
    assert _reference(503)


@crit(7, "quoted reducible parameter ideals verify")
def test_c07_witness_431():
    # fails: the quoted generator (2, 0, 0) of i1 lies outside the computed
    # completion (see test_gorenstein for the independent congruence check)
    assert _reference(431)


# 8 -----------------------------------------------------------------------

@crit(8, "exactly four eigenforms in the congruence class at 431 and 503")
@pytest.mark.parametrize("N", [431, 503])
def test_c08_four_eigenforms(N):
    A = attached_completion(N)
    assert A.rank == 4
    pres = gor.etale_presentation(A)
    # four Q2bar-embeddings, i.e. four conjugate eigenforms
    assert sum(e * f for e, f in pres.signature) == 4
    # the curves pick out the largest residue-degree-1 ideal
    assert A.rank == target_completion(N).rank


# 9 -----------------------------------------------------------------------

@crit(9, "intersection groups: 431 trivial, 2089 A/E = (Z/2)^2, a trivial congruent pair")
def test_c09_pair_431():
    L = rational_eigen_lattices(space(431), algebra(431))
    assert intersection_group(homology_lattice(space(431)), *L) == []


@crit(9, "intersection groups: 431 trivial, 2089 A/E = (Z/2)^2, a trivial congruent pair")
@pytest.mark.slow
def test_c09_pairs_2089():
    from heckegor.cli import HeckeCache, default_cache_dir
    S = space(2089)
    lats = rational_eigen_lattices(S, hecke=HeckeCache(default_cache_dir()).source(S))
    H = homology_lattice(S)
    by_class = {}
    for r in bundled_curves(2089):
        E = r.curve()
        (L,) = [L for L in lats if all(ap(E, p) == a for p, a in L.eigenvalues.items() if p < 100)]
        by_class[r.iso_class.upper()] = (L, E)
    assert intersection_group(H, by_class["A"][0], by_class["E"][0]) == [2, 2]
    congruent = [c for c, (_, E) in by_class.items() if mod2_irreducible_and_s3(E)[0]]
    assert len(congruent) == 4
    trivial = [(a, b) for i, a in enumerate(congruent) for b in congruent[i + 1:]
               if not intersection_group(H, by_class[a][0], by_class[b][0])]
    assert trivial


# 10 ----------------------------------------------------------------------

@crit(10, "mod-2 screen of the two 431 curves")
@pytest.mark.parametrize("label", ["431a1", "431b1"])
def test_c10_screen(label):
    (r,) = [r for r in bundled_curves(431) if r.label == label]
    E = r.curve()
    x = sp.symbols("x")
    cubic = sp.Poly(list(reversed(two_division_cubic(E))), x)
    assert cubic.is_irreducible
    assert not sp.sqrt(sp.discriminant(cubic)).is_rational
    assert mod2_irreducible_and_s3(E) == (True, True)
    assert splits_completely_at_two(E)
    assert ap(E, 2) == -1
    f3 = frob_profile(E, 3)
    assert (f3.order, f3.trace) == (3, 1)


# 11 ----------------------------------------------------------------------

@crit(11, "positive controls: level 11 and every T2 in m ideal are Gorenstein")
def test_c11_level_11():
    rep = analyze(11)
    (t,) = rep["targets"]
    assert t["local_rank"] == 1 and t["gorenstein"] and t["socle_dim"] == 1


@crit(11, "positive controls: level 11 and every T2 in m ideal are Gorenstein")
def test_c11_t2_in_m():
    seen = 0
    for N in primerange(11, 200):
        if genus_x0(N) == 0:
            continue
        T = algebra(N)
        for m in mod2_maximal_ideals(T):
            if m.residue_degree != 1:
                continue
            A = complete_at(T, m, 64)
            if A.residue(A.hecke_image(2)) == 0:
                seen += 1
                assert gor.is_gorenstein(A), (N, m.index)
    assert seen >= 5


# 12 ----------------------------------------------------------------------

@crit(12, "property suites")
def test_c12_modsym_properties():
    for N in (43, 77):
        test_modsym.test_hecke_operators_commute(N)
    for N in (43, 53):
        test_modsym.test_hecke_recursions(N)


@crit(12, "property suites")
def test_c12_linalg_properties():
    test_linalg.test_cayley_hamilton()
    test_linalg.test_hnf_and_snf_preserve_determinant()


@crit(12, "property suites")
def test_c12_parity_law():
    test_galois2.test_parity_law()


@crit(12, "property suites")
def test_c12_partition_of_unity():
    for N in (37, 431):
        test_heckealg.test_idempotents_partition_unity(N)
