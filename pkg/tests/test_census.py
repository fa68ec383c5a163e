import pytest

from gemkit.census import (
    INDEX_HEADER,
    CensusBoundError,
    CensusQuery,
    census_index_row,
    enumerate_gems,
    gem_complexity,
    perfect_matchings_rows,
)
from gemkit.graph import canonical_form

import oracles


def census(d, n, **kw):
    return list(enumerate_gems(CensusQuery(d, n, **kw)))


@pytest.mark.parametrize("n, count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_perfect_matching_count(n, count):
    rows = perfect_matchings_rows(n)
    assert len(rows) == count == len(set(rows))


@pytest.mark.parametrize(
    "d, n, mod",
    [(1, 6, False), (2, 4, False), (2, 6, False), (3, 4, False), (3, 4, True), (4, 4, False), (2, 4, True)],
)
def test_counts_match_brute_force(d, n, mod):
    got = census(d, n, min_order=n, mod_colors=mod)
    assert len(got) == oracles.brute_force_classes(d, n, mod)


def test_entries_pairwise_non_isomorphic_and_sorted():
    es = census(3, 8)
    certs = [e.certificate for e in es]
    assert len(set(certs)) == len(certs)
    keys = [(e.graph.order, e.certificate) for e in es]
    assert keys == sorted(keys)
    for e in es[:200]:
        assert canonical_form(e.graph) == e.certificate


def test_jobs_do_not_change_output():
    a = [census_index_row(e) for e in census(3, 8, crystallizations_only=True)]
    b = [census_index_row(e) for e in census(3, 8, crystallizations_only=True, jobs=2)]
    assert a == b


def test_filters():
    every = census(3, 6)
    bip = census(3, 6, bipartite_only=True)
    assert set(e.digest for e in bip) == {e.digest for e in every if e.graph.is_bipartite()}
    crys = census(3, 6, crystallizations_only=True)
    assert all(all(e.graph.g_hat(c) == 1 for c in e.graph.colors) for e in crys)
    closed = census(3, 6, closed_only=True)
    assert all(e.report.singular_colors == () for e in closed)


def test_unique_small_lens_and_bundle():
    es = census(3, 8, closed_only=True, crystallizations_only=True, mod_colors=True, bipartite_only=True)
    z2 = [e for e in es if str(e.h1) == "Z2"]
    zg1 = [e for e in es if str(e.h1) == "Z" and e.report.regular_genus == 1]
    assert len(z2) == 1 and len(zg1) == 1
    assert [e.graph.order for e in es if e.graph.order == 2] == [2]


def test_closed_four_dimensional_degrees_are_multiples_of_six():
    es = census(4, 6, closed_only=True, crystallizations_only=True, mod_colors=True)
    assert es
    for e in es:
        assert e.report.gurau_degree.doubled % 12 == 0
        assert not e.quarantined


def test_bound_guard():
    with pytest.raises(CensusBoundError):
        CensusQuery(4, 10)
    CensusQuery(4, 10, force=True)
    with pytest.raises(ValueError):
        CensusQuery(3, 7)
    with pytest.raises(ValueError):
        CensusQuery(0, 4)


def test_index_row_shape():
    e = census(3, 2)[0]
    row = census_index_row(e).split("\t")
    assert len(row) == len(INDEX_HEADER.split("\t"))
    assert row[1] == "2" and row[-1] == "0"


def test_complexity_of_lens_space():
    c = gem_complexity("L(2,1)", d=3, max_order=8)
    assert c.exact and c.value == 3
    assert "census" in str(c)
