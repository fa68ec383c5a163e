import shutil

import pytest

from gemkit.catalog import (
    CHECKED_KEYS,
    DEFAULT_DIR,
    MANIFEST,
    RECIPES,
    CatalogError,
    CatalogMismatch,
    build_recipe,
    catalog_dir,
    catalog_list,
    catalog_load,
    catalog_matcher,
    observed_fragment,
    parse_manifest,
    write_catalog,
)
from gemkit.graph import is_isomorphic, write_gem
from gemkit.invariants import invariant_report

from conftest import CATALOG_NAMES


def test_manifest_lists_every_recipe():
    assert CATALOG_NAMES == [r.name for r in RECIPES]
    assert len(CATALOG_NAMES) == len(set(CATALOG_NAMES))


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_every_entry_validates(name):
    e = catalog_load(name)
    assert e.graph is not None
    assert set(e.expected) <= set(CHECKED_KEYS)
    assert e.provenance in ("derived-by-construction", "derived-by-census")


@pytest.mark.parametrize("name", [r.name for r in RECIPES if r.provenance == "derived-by-construction"])
def test_constructions_rebuild_the_stored_gem(name):
    assert is_isomorphic(build_recipe(name), catalog_load(name, validate=False).graph)


def test_parse_manifest():
    blocks = parse_manifest("# c\n\nname: a\nfile: a.gem\n\nname: b\nfile: b.gem\nnotes: x: y\n")
    assert blocks == [{"name": "a", "file": "a.gem"}, {"name": "b", "file": "b.gem", "notes": "x: y"}]
    with pytest.raises(CatalogError):
        parse_manifest("name a\n")


def test_unknown_entry():
    with pytest.raises(CatalogError):
        catalog_load("no-such-manifold")


def test_env_override_and_tamper_detection(tmp_path, monkeypatch):
    copy = tmp_path / "cat"
    shutil.copytree(DEFAULT_DIR, copy)
    monkeypatch.setenv("GEMKIT_CATALOG", str(copy))
    assert catalog_dir() == copy
    assert catalog_list() == CATALOG_NAMES
    # swap in a different gem under the L(3,1) name
    write_gem(catalog_load("L(2,1)").graph, copy / catalog_load("L(3,1)").file)
    with pytest.raises(CatalogMismatch) as info:
        catalog_load("L(3,1)")
    assert "H1" in str(info.value)
    assert catalog_load("L(3,1)", validate=False).graph.order == 8


def test_missing_manifest(tmp_path):
    with pytest.raises(CatalogError):
        catalog_list(tmp_path)


def test_write_catalog_roundtrip(tmp_path):
    names = ["S3", "L(3,1)", "Y4_1"]
    entries = write_catalog(tmp_path, names, log=lambda *_: None)
    assert [e.name for e in entries] == names
    assert (tmp_path / MANIFEST).exists()
    for n in names:
        assert catalog_load(n, tmp_path).expected == catalog_load(n).expected


def test_fragment_of_product(catalog):
    frag = observed_fragment(catalog["L(2,1)xI"].graph)
    assert frag["boundary"] == "L(2,1); L(2,1)"
    assert frag["gurau_degree"] == "18"
    assert frag["singular_colors"] == "0 4"


def test_matcher(catalog):
    pred = catalog_matcher("L(2,1)")
    g = catalog["L(2,1)"].graph
    from gemkit.algebra import first_homology

    assert pred(g, invariant_report(g), first_homology(g))
    h = catalog["S1xS2"].graph
    assert not pred(h, invariant_report(h), first_homology(h))
