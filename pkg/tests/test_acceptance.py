"""End-to-end acceptance checks, one test per criterion.

Each test times itself against its budget and prints a ``PASS criterion N`` or
``FAIL criterion N`` line whatever the outcome, so ``pytest -v`` output doubles
as the acceptance report.
"""

import random
import time
from contextlib import contextmanager

import pytest

from gemkit.algebra import AbelianInvariants, first_homology
from gemkit.catalog import catalog_list, catalog_load
from gemkit.census import CensusQuery, enumerate_gems
from gemkit.classify4 import classify, degree_gap_check
from gemkit.constructions import (
    bundle_pair_genera,
    handlebody_gem,
    interior_connected_sum,
    lens_gem,
    product_with_interval,
)
from gemkit.graph import sphere_gem
from gemkit.identities import verify_identities
from gemkit.invariants import (
    associated_permutation,
    cyclic_permutations,
    genus_vector,
    genus_wrt,
    gurau_degree,
    invariant_report,
    minimizing_permutation,
    regular_genus,
)
from gemkit.moves import (
    Dipole,
    eliminate_dipole,
    find_dipoles,
    manifold_check,
    random_dipole_insertion,
    random_inflation,
    recognize_sphere,
)

pytestmark = pytest.mark.slow


@contextmanager
def criterion(capsys, n, title, limit=None):
    """Run one criterion, enforce its time limit and print the verdict line."""
    t0 = time.perf_counter()
    err = None
    try:
        yield
    except Exception as e:
        err = e
    dt = time.perf_counter() - t0
    if err is None and limit is not None and dt >= limit:
        err = AssertionError(f"took {dt:.2f} s, limit {limit} s")
    with capsys.disabled():
        verdict = "PASS" if err is None else "FAIL"
        note = "" if err is None else f" ({str(err).splitlines()[0] if str(err) else 'assertion failed'})"
        print(f"\n{verdict} criterion {n}: {title} [{dt:.2f} s]{note}")
    if err is not None:
        raise err


def _entries(d=None):
    out = [catalog_load(n) for n in catalog_list()]
    return [e for e in out if d is None or e.graph.dimension == d]


def _adjacent(eps, i, j):
    k = len(eps)
    a, b = eps.index(i), eps.index(j)
    return (a - b) % k in (1, k - 1)


def test_criterion_01_sphere_baseline(capsys):
    with criterion(capsys, 1, "sphere gems d=2..5 have genus 0, degree 0, recognized", limit=1.0):
        for d in range(2, 6):
            g = sphere_gem(d)
            assert regular_genus(g) == 0, d
            assert gurau_degree(g) == 0, d
            assert recognize_sphere(g).verdict == "Sphere", d


def test_criterion_02_handlebody_numbers(capsys):
    with criterion(capsys, 2, "handlebody orders, genera and degrees", limit=1.0):
        y1 = handlebody_gem(4, 1)
        v1 = genus_vector(y1)
        assert y1.order == 8
        assert len(v1) == 12 and all(x == 1 for x in v1.values())
        assert gurau_degree(y1) == 12
        y2 = handlebody_gem(4, 2)
        assert y2.order == 14
        assert all(x == 2 for x in genus_vector(y2).values())
        assert gurau_degree(y2) == 24
        s = interior_connected_sum(y1, y1)
        assert s.order == 16 and regular_genus(s) == 2


def test_criterion_03_products_with_interval(capsys):
    want = {"L(2,1)": 18, "S1xS2": 18, "S1~xS2": 18, "L(3,1)": 30}
    with criterion(capsys, 3, "degrees of 3-manifold times interval", limit=1.0):
        for name, w in want.items():
            g = catalog_load(name).graph
            h = product_with_interval(g, minimizing_permutation(g))
            assert h.order == g.order, name
            assert gurau_degree(h) == w, (name, gurau_degree(h))


def test_criterion_04_disk_bundles(capsys):
    with criterion(capsys, 4, "disk bundle gems Lambda_0, Lambda_2..4"):
        g = catalog_load("Lambda_0").graph
        assert gurau_degree(g) == 24
        rho = regular_genus(g)
        assert rho == 2
        assert (2, 2, 2) in {(rho, a, b) for _, _, a, b in bundle_pair_genera(g)}
        for c in (2, 3, 4):
            g = catalog_load(f"Lambda_{c}").graph
            assert g.order == 4 * c
            assert regular_genus(g) == 2
            assert gurau_degree(g) == 12 * c
            pairs = {(min(a, b), max(a, b)) for _, _, a, b in bundle_pair_genera(g)}
            assert (2, 2 * c - 2) in pairs, (c, pairs)


def test_criterion_05_associated_pair_law(capsys):
    with criterion(capsys, 5, "degree equals 6 times associated pair sum, catalog and census", limit=300):
        gems = [e.graph for e in _entries(4)]
        census = [e.graph for e in enumerate_gems(CensusQuery(4, 8, manifolds_only=True)) if not e.quarantined]
        assert len(census) > 1000
        checked = 0
        for g in gems + census:
            if manifold_check(g).singular_colors is None:
                continue
            w = gurau_degree(g)
            seen = set()
            for eps in cyclic_permutations(4):
                other = associated_permutation(eps)
                seen.add(frozenset((eps, other)))
                assert w == 6 * (genus_wrt(g, eps) + genus_wrt(g, other))
            assert len(seen) == 6
            assert w.doubled % 12 == 0
            checked += 1
        assert checked == len(gems) + len(census)


def test_criterion_06_identity_suite(capsys):
    names = catalog_list()
    with criterion(capsys, 6, "identity suite on 200 seeded inflations", limit=120):
        failures = []
        passed = 0
        for seed in range(200):
            name = names[seed % len(names)]
            g = random_inflation(catalog_load(name, validate=False).graph, 3, seed=seed)
            rep = verify_identities(g, seed=seed)
            passed += rep.passed
            failures += [(name, seed, c.identity, c.instance) for c in rep.failures()]
        assert not failures, failures[:5]
        assert passed > 0


def test_criterion_07_homology_and_rank(capsys):
    with criterion(capsys, 7, "H1 of lens spaces and S1xS3, rank bound"):
        for p in range(2, 6):
            assert first_homology(lens_gem(p, 1)) == AbelianInvariants(0, (p,)), p
        assert first_homology(catalog_load("S1xS3").graph) == AbelianInvariants(1)
        tested = 0
        for e in _entries():
            g = e.graph
            if g.dimension < 2:
                continue
            sing = manifold_check(g).singular_colors
            if sing is None or len(sing) > 1:
                continue
            h = first_homology(g, singular_colors=sing)
            for eps in cyclic_permutations(g.dimension):
                assert h.min_generators <= genus_wrt(g, eps), (e.name, eps)
            tested += 1
        assert tested >= 20


def test_criterion_08_small_census(capsys):
    with criterion(capsys, 8, "d=3 census to order 8: unique Z2 and (Z, genus 1) classes", limit=600):
        q = CensusQuery(3, 8, closed_only=True, crystallizations_only=True, mod_colors=True, bipartite_only=True)
        es = list(enumerate_gems(q))
        z2 = [e for e in es if e.h1 == AbelianInvariants(0, (2,))]
        zg1 = [e for e in es if e.h1 == AbelianInvariants(1) and e.report.regular_genus == 1]
        assert len(z2) == 1 and len(zg1) == 1
        small = [e for e in es if e.graph.order == 2]
        assert len(small) == 1
        assert recognize_sphere(small[0].graph).verdict == "Sphere"


def test_criterion_09_classifier_regression(capsys):
    with criterion(capsys, 9, "classifier on every 5-colored catalog entry", limit=60):
        entries = _entries(4)
        assert len(entries) >= 15
        for e in entries:
            c = classify(e.graph)
            assert e.manifold in c.candidates, e.name
            assert c.rule.startswith("T1."), (e.name, c.rule)
            assert degree_gap_check(invariant_report(e.graph)).ok, e.name


def test_criterion_10_move_calculus(capsys):
    names = ["S3", "L(3,1)", "S1~xS2", "S4", "CP2", "Y4_1", "Lambda_2", "L(2,1)xI"]
    with criterion(capsys, 10, "dipole add/eliminate, genus invariance and adjacency rule", limit=60):
        rng = random.Random(2024)
        sites = 0
        while sites < 100:
            g = catalog_load(names[sites % len(names)], validate=False).graph
            step = random_dipole_insertion(g, rng)
            assert step is not None
            h, line = step
            r = int(line.split()[1])
            dip = Dipole(g.order, g.order + 1, tuple(int(t) for t in line.split()[2:2 + r]))
            assert eliminate_dipole(h, dip) == g
            sites += 1
        for name in names:
            g = catalog_load(name, validate=False).graph
            h = random_inflation(g, 3, seed=11, sizes=(1,))
            assert genus_vector(h) == genus_vector(g) and gurau_degree(h) == gurau_degree(g)
            for dip in find_dipoles(h, 1):
                assert genus_vector(eliminate_dipole(h, dip)) == genus_vector(h)
            h = random_inflation(g, 3, seed=11, sizes=(2,))
            before = genus_vector(h)
            dips = find_dipoles(h, 2)
            assert dips
            for dip in dips:
                after = genus_vector(eliminate_dipole(h, dip))
                i, j = dip.colors
                for eps in before:
                    assert after[eps] - before[eps] == (0 if _adjacent(eps, i, j) else -1)
