import dataclasses

import pytest

from gemkit.algebra import AbelianInvariants
from gemkit.catalog import catalog_load
from gemkit.classify4 import (
    PROFILES,
    RULES,
    ClassificationError,
    classify,
    classify_observation,
    degree_gap_check,
    identify_3manifold,
    identify_boundaries,
    observe,
    sum_profile,
    xi_profile,
)
from gemkit.graph import ColoredGraph, sphere_gem
from gemkit.invariants import HalfInt, invariant_report
from gemkit.moves import random_inflation

from conftest import CATALOG_NAMES

FOUR = [n for n in CATALOG_NAMES if catalog_load(n, validate=False).graph.dimension == 4]


@pytest.mark.parametrize("name", FOUR)
def test_catalog_manifold_among_candidates(catalog, name):
    e = catalog[name]
    c = classify(e.graph)
    assert e.manifold in c.candidates
    assert c.rule.startswith("T1.")
    assert degree_gap_check(invariant_report(e.graph)).ok


@pytest.mark.parametrize(
    "name, rule, certainty",
    [
        ("S4", "T1.1a", "exact"),
        ("S1xS3", "T1.2b", "exact"),
        ("Y4_1", "T1.2b", "exact"),
        ("Y4_2", "T1.2d", "exact"),
        ("CP2", "T1.2d", "exact"),
        ("Lambda_0", "T1.2d", "exact"),
        ("L(2,1)xI", "T1.2c", "exact"),
        ("Lambda_3", "T1.1c", "candidate-list"),
        ("L(3,1)xI", "T1.1b", "candidate-list"),
    ],
)
def test_rule_selection(catalog, name, rule, certainty):
    c = classify(catalog[name].graph)
    assert (c.rule, c.certainty) == (rule, certainty)
    assert c.clause == RULES[rule]


def test_genus_rows_are_never_exact(catalog4):
    for e in catalog4.values():
        for hit in classify(e.graph).applicable:
            if hit.rule in ("T1.1b", "T1.1c"):
                assert hit.certainty == "candidate-list"


def test_genus_one_handlebody_reports_both_rows(catalog):
    rules = {h.rule: h for h in classify(catalog["Y4_1"].graph).applicable}
    assert rules["T1.2b"].certainty == "exact"
    assert rules["T1.1b"].candidates == ("Y4_1",)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("name", ["Y4_1", "S1~xS3", "Lambda_2"])
def test_classification_survives_dipole_moves(catalog, name, seed):
    e = catalog[name]
    g = random_inflation(e.graph, 3, seed=seed)
    assert e.manifold in classify(g).candidates


def test_lens_boundaries_give_families(catalog):
    c = classify(catalog["Lambda_3"].graph)
    assert "xi_3" in c.candidates
    assert any(x.startswith("M4(K,d)") for x in c.candidates)
    b = c.boundaries[0]
    assert b.name == "L(3,1)" and b.h1 == "Z3"


def test_text_rendering(catalog):
    text = classify(catalog["L(2,1)xI"].graph).to_text()
    assert text.splitlines()[0] == "rule: T1.2c"
    assert "boundary[0:0]: L(2,1)" in text
    assert "applicable[T1.1b]: candidate-list" in text


def test_rejects_wrong_dimension(catalog):
    with pytest.raises(ClassificationError):
        classify(catalog["L(2,1)"].graph)


def test_rejects_non_manifold():
    rp2 = ((1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
    g = ColoredGraph(4, rp2 + ((1, 0, 3, 2), (1, 0, 3, 2)))
    with pytest.raises(ClassificationError):
        classify(g)


def test_rejects_inconsistent_report(catalog):
    g = catalog["Y4_1"].graph
    rep = dataclasses.replace(invariant_report(g), gurau_degree=HalfInt(2 * 18))
    with pytest.raises(ClassificationError):
        classify(g, report=rep)


def test_impossible_homology_is_out_of_table(catalog):
    ob = observe(catalog["Y4_1"].graph)
    c = classify_observation(dataclasses.replace(ob, h1=AbelianInvariants(0, (2,))))
    assert c.certainty == "out-of-table" and c.candidates == ()


def test_gap_check_flags_impossible_degrees(catalog):
    rep = invariant_report(catalog["Y4_1"].graph)
    assert degree_gap_check(rep)
    bad = degree_gap_check(dataclasses.replace(rep, gurau_degree=HalfInt(2 * 20)))
    assert not bad
    assert any("multiple of 6" in a for a in bad.anomalies)
    assert any("outside" in a for a in bad.anomalies)


def test_identify_three_manifolds(catalog):
    assert identify_3manifold(catalog["L(4,1)"].graph)[0] == "L(4,1)"
    assert identify_3manifold(catalog["L(5,1)"].graph)[0] is None
    assert identify_3manifold(catalog["S1~xS2"].graph)[0] == "S1~xS2"
    assert identify_3manifold(sphere_gem(3))[0] == "S3"
    with pytest.raises(ValueError):
        identify_3manifold(sphere_gem(4))


def test_identify_boundaries_of_product(catalog):
    bs = identify_boundaries(catalog["(S1xS2)xI"].graph)
    assert [b.name for b in bs] == ["S1xS2", "S1xS2"]
    assert all(b.orientable for b in bs)


def test_profiles():
    assert PROFILES["S4"].chi == 2 and PROFILES["CP2"].chi == 3
    p = sum_profile(2, 0, True)
    assert p.name == "#2(S1xS3)" and p.chi == -2 and p.h1 == "Z^2"
    q = sum_profile(0, 1, False)
    assert q.name == "~Y4_1" and q.chi == 0
    x = xi_profile(3)
    assert x.h1 == "0" and x.boundary[0].name == "L(3,1)"
