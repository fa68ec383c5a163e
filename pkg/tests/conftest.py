import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gemkit.catalog import catalog_list, catalog_load
from gemkit.graph import ColoredGraph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def matching_from_perm(perm):
    row = [0] * len(perm)
    for a, b in zip(perm[::2], perm[1::2]):
        row[a], row[b] = b, a
    return tuple(row)


@st.composite
def gems(draw, d=None, min_p=1, max_p=5, connected=True, bipartite=None):
    """Random (d+1)-colored graphs, built from one random pairing per color."""
    if d is None:
        d = draw(st.integers(1, 4))
    p = draw(st.integers(min_p, max_p))
    n = 2 * p
    if bipartite:
        # pair the even vertices with a permutation of the odd ones
        rows = []
        for _ in range(d + 1):
            sigma = draw(st.permutations(range(p)))
            row = [0] * n
            for i, j in enumerate(sigma):
                row[2 * i], row[2 * j + 1] = 2 * j + 1, 2 * i
            rows.append(tuple(row))
    else:
        rows = [matching_from_perm(draw(st.permutations(range(n)))) for _ in range(d + 1)]
    g = ColoredGraph(d, tuple(rows))
    if connected and not g.is_connected():
        # splice components together along color 0 (keeps the graph regular)
        comps = _components(g)
        row = list(g.matchings[0])
        for a, b in zip(comps, comps[1:]):
            # even endpoints on both sides keep the even/odd bipartition
            x, y = _pick_even(a), _pick_even(b)
            x2, y2 = row[x], row[y]
            row[x], row[y2], row[y], row[x2] = y2, x, x2, y
        rows[0] = tuple(row)
        g = ColoredGraph(d, tuple(rows))
    return g


def _pick_even(comp):
    evens = [v for v in comp if v % 2 == 0]
    return min(evens) if evens else min(comp)


def _components(g):
    seen = [False] * g.order
    out = []
    for s in range(g.order):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for r in g.matchings:
                if not seen[r[v]]:
                    seen[r[v]] = True
                    stack.append(r[v])
        out.append(comp)
    return out


CATALOG_NAMES = catalog_list()


@pytest.fixture(scope="session")
def catalog():
    return {n: catalog_load(n, validate=False) for n in CATALOG_NAMES}


@pytest.fixture(scope="session")
def catalog4(catalog):
    return {n: e for n, e in catalog.items() if e.graph.dimension == 4}
