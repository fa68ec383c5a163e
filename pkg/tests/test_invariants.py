import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gemkit.graph import parse_gem, sphere_gem
from gemkit.invariants import (
    HalfInt,
    associated_permutation,
    canonical_cycle,
    cyclic_permutations,
    euler_characteristic,
    genus_vector,
    genus_wrt,
    gurau_degree,
    gurau_degree_closed,
    invariant_report,
    regular_genus,
    residue_genus,
)

import oracles
from conftest import gems

RP2 = "gem 2 4\n1 0 3 2\n2 3 0 1\n3 2 1 0\n"


def frac(h: HalfInt) -> Fraction:
    return Fraction(h.doubled, 2)


# -- HalfInt -------------------------------------------------------------------------


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_halfint_arithmetic(a, b):
    x, y = HalfInt(a), HalfInt(b)
    assert frac(x + y) == frac(x) + frac(y)
    assert frac(x - y) == frac(x) - frac(y)
    assert frac(3 * x) == 3 * frac(x)
    assert (x < y) == (frac(x) < frac(y))
    assert (x == y) == (a == b)


def test_halfint_integers_hash_like_ints():
    assert HalfInt(4) == 2 and hash(HalfInt(4)) == hash(2)
    assert str(HalfInt(3)) == "3/2"
    with pytest.raises(ValueError):
        HalfInt(3).to_int()


# -- cyclic permutations ------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_cyclic_permutation_count(d):
    perms = cyclic_permutations(d)
    assert len(perms) == math.factorial(d) // 2
    assert len(set(perms)) == len(perms)
    # every cyclic order appears once up to inversion
    seen = set()
    for tail in itertools.permutations(range(1, d + 1)):
        seen.add(canonical_cycle((0,) + tail))
    assert seen == set(perms)


def test_associated_permutation_is_an_involution_on_pairs():
    perms = cyclic_permutations(4)
    pairs = {frozenset((e, associated_permutation(e))) for e in perms}
    assert len(pairs) == 6
    for e in perms:
        assert associated_permutation(associated_permutation(e)) == e
        assert associated_permutation(e) != e


# -- genus -------------------------------------------------------------------------------


@given(gems(bipartite=True, min_p=1, max_p=6).filter(lambda g: g.dimension >= 2))
def test_genus_matches_face_tracing(g):
    for eps in cyclic_permutations(g.dimension):
        assert frac(genus_wrt(g, eps)) == oracles.traced_genus(g, eps)


@given(gems(min_p=1, max_p=6).filter(lambda g: g.dimension >= 2))
def test_genus_matches_union_find_count(g):
    for eps in cyclic_permutations(g.dimension):
        assert frac(genus_wrt(g, eps)) == oracles.counted_genus(g, eps)


@given(gems(min_p=1, max_p=6).filter(lambda g: g.dimension >= 2))
def test_genus_is_nonnegative_and_integral_iff_bipartite(g):
    vec = genus_vector(g)
    assert all(v >= 0 for v in vec.values())
    if g.is_bipartite():
        assert all(v.is_integer for v in vec.values())


@given(gems(min_p=1, max_p=6).filter(lambda g: g.dimension >= 2))
def test_gurau_degree_two_formulas(g):
    total = HalfInt(sum(v.doubled for v in genus_vector(g).values()))
    assert gurau_degree_closed(g) == total == gurau_degree(g)


@given(gems(min_p=1, max_p=5).filter(lambda g: g.dimension >= 2), st.randoms(use_true_random=False))
def test_genus_invariant_under_relabeling(g, rnd):
    perm = list(range(g.order))
    rnd.shuffle(perm)
    assert genus_vector(g.relabel(perm)) == genus_vector(g)


def test_residue_genus_on_full_set_is_genus():
    g = parse_gem(RP2)
    eps = (0, 1, 2)
    assert residue_genus(g, eps, g.colors) == genus_wrt(g, eps)
    assert residue_genus(g, eps, (0, 1)) == 0


def test_projective_plane_values():
    # frozen: the 4-vertex crystallization of RP2 has half-genus 1/2 and chi 1
    g = parse_gem(RP2)
    assert genus_wrt(g, (0, 1, 2)) == HalfInt(1)
    assert euler_characteristic(g) == 1
    assert gurau_degree(g) == HalfInt(1)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_sphere_gem_invariants(d):
    rep = invariant_report(sphere_gem(d))
    assert rep.regular_genus == 0 and rep.gurau_degree == 0
    assert rep.euler_characteristic == 1 + (-1) ** d
    assert rep.manifold == "singular-manifold" and rep.singular_colors == ()


# -- Euler characteristic ------------------------------------------------------------------


@given(gems(min_p=1, max_p=5))
def test_euler_characteristic_matches_cell_count(g):
    assert euler_characteristic(g) == oracles.euler_characteristic_cells(g)


def test_euler_two_paths_on_catalog(catalog4):
    for name, e in catalog4.items():
        g = e.graph
        for eps in cyclic_permutations(4):
            assert euler_characteristic(g, "genus", eps) == euler_characteristic(g), (name, eps)


def test_euler_genus_path_rejects_other_dimensions():
    with pytest.raises(ValueError):
        euler_characteristic(sphere_gem(3), "genus")


def test_report_text_is_stable(catalog):
    g = catalog["L(2,1)"].graph
    a = invariant_report(g).to_text()
    assert a == invariant_report(g).to_text()
    assert "regular_genus: 1" in a and "gurau_degree: 3" in a


def test_catalog_frozen_degrees(catalog):
    # frozen values from the bundled catalog (independent of the manifest parser)
    want = {
        "S1": 0, "S2": 0, "S3": 0, "S4": 0, "S5": 0,
        "L(2,1)": 3, "L(3,1)": 5, "S1xS2": 3, "S1xS3": 12, "Y4_1": 12, "Y4_2": 24,
        "Lambda_0": 24, "Lambda_3": 36, "L(2,1)xI": 18, "L(3,1)xI": 30,
    }
    for name, deg in want.items():
        assert gurau_degree(catalog[name].graph) == deg, name
