import pytest
from hypothesis import given, settings

import gemkit.identities as ids
from gemkit.graph import sphere_gem
from gemkit.identities import IdentityReport, verify_identities
from gemkit.invariants import HalfInt
from gemkit.moves import random_inflation

from conftest import CATALOG_NAMES, gems


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_gems_satisfy_every_identity(catalog, name):
    g = catalog[name].graph
    rep = verify_identities(g)
    assert rep.ok, rep.to_text()
    # nothing applies to the circle
    assert rep.passed > 0 or g.dimension == 1


@pytest.mark.parametrize("name", ["Y4_1", "CP2", "Lambda_3", "L(2,1)xI"])
@pytest.mark.parametrize("seed", [0, 1])
def test_inflations_satisfy_every_identity(catalog, name, seed):
    g = random_inflation(catalog[name].graph, 3, seed=seed)
    assert verify_identities(g).ok


@settings(max_examples=40)
@given(gems(min_p=1, max_p=5))
def test_random_gems_never_fail(g):
    """Hypotheses gate every identity, so arbitrary graphs give passes or skips only."""
    rep = verify_identities(g, budget=300)
    assert rep.ok, rep.to_text()


def test_four_dimensional_identities_are_exercised(catalog):
    rep = verify_identities(catalog["Y4_2"].graph)
    got = rep.by_identity()
    for name in ("euler-genus", "order-formula", "associated-pair", "degree-closed-vs-sum", "g-rst"):
        assert name in got and got[name][0] > 0, name


def test_crystallization_order_formula_applies_to_closed(catalog):
    rep = verify_identities(catalog["CP2"].graph)
    assert rep.by_identity()["order-formula-crystallization"][0] > 0


def test_skips_record_reasons():
    rep = verify_identities(sphere_gem(1))
    assert rep.ok
    assert all(c.detail or c.status != "skip" for c in rep.checks)


def test_mutated_residue_genus_is_caught(catalog, monkeypatch):
    real = ids.residue_genus

    def broken(g, eps, colors):
        value = real(g, eps, colors)
        colors = set(colors)
        return value + 1 if len(colors) == 3 and 0 in colors else value

    monkeypatch.setattr(ids, "residue_genus", broken)
    rep = verify_identities(catalog["Y4_1"].graph)
    assert rep.failed > 0
    caught = {c.identity for c in rep.failures()}
    assert {"edge-count", "triangle-count"} <= caught


def test_mutated_residue_count_is_caught(catalog, monkeypatch):
    real = ids._Ctx.G

    def broken(self, colors):
        n = real(self, colors)
        return n + 1 if tuple(sorted(colors)) == (0, 1) else n

    monkeypatch.setattr(ids._Ctx, "G", broken)
    rep = verify_identities(catalog["S1xS3"].graph)
    assert rep.failed > 0


def test_mutated_degree_is_caught(catalog, monkeypatch):
    monkeypatch.setattr(ids, "gurau_degree_closed", lambda g: HalfInt(2))
    rep = verify_identities(catalog["L(3,1)"].graph)
    assert "degree-closed-vs-sum" in {c.identity for c in rep.failures()}


def test_report_text():
    rep = verify_identities(sphere_gem(4))
    text = rep.to_text()
    assert text.startswith("dimension: 4\norder: 2\n")
    assert "failed: 0" in text
    assert isinstance(rep, IdentityReport)
    assert rep.to_text(verbose=True).count("\n") > text.count("\n")
