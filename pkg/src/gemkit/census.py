"""Isomorph-free enumeration of small gems, one color at a time.

Color 0 is fixed to the standard pairing (0 1)(2 3)...; each level adds every
perfect matching as the next color and keeps one canonical representative per
isomorphism class of the partial graph. Partial graphs that already violate a
requested filter are dropped early.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Iterator

from .graph import ColoredGraph, canonical_form, canonical_graph
from .invariants import InvariantReport, euler_characteristic, invariant_report

log = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = {1: 12, 2: 12, 3: 12, 4: 8}


class CensusBoundError(ValueError):
    pass


@dataclass
class CensusQuery:
    d: int
    max_order: int
    min_order: int = 2
    bipartite_only: bool = False
    manifolds_only: bool = False
    closed_only: bool = False
    crystallizations_only: bool = False
    mod_colors: bool = False
    predicate: Callable[[ColoredGraph, InvariantReport], bool] | None = None
    force: bool = False
    jobs: int = 1
    budget: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.max_order % 2 or self.max_order < 2:
            raise ValueError("max order must be even and >= 2")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.manifolds_only and self.d > 4:
            raise ValueError("manifold filtering is supported for d <= 4")
        limit = DEFAULT_MAX_ORDER.get(self.d, 4)
        if self.max_order > limit and not self.force:
            raise CensusBoundError(
                f"order {self.max_order} exceeds the default bound {limit} for d={self.d}; use force"
            )


@dataclass
class CensusEntry:
    certificate: object
    graph: ColoredGraph
    report: InvariantReport
    h1: object = None
    quarantined: bool = False

    @property
    def digest(self) -> str:
        return self.certificate.digest()


def perfect_matchings_rows(n: int) -> list[tuple[int, ...]]:
    """Every fixed-point-free involution of 0..n-1 as a row."""
    out = []

    def rec(row, free):
        if not free:
            out.append(tuple(row))
            return
        a = free[0]
        for k in range(1, len(free)):
            b = free[k]
            row[a], row[b] = b, a
            rec(row, free[1:k] + free[k + 1 :])
        row[a] = -1

    rec([-1] * n, list(range(n)))
    return out


def _partial_ok(g: ColoredGraph, q: CensusQuery, new_color: int) -> bool:
    if q.bipartite_only and not g.is_bipartite():
        return False
    if (q.manifolds_only or q.closed_only) and q.d == 4 and g.ncolors >= 3:
        # every 3-colored residue using the new color must be a 2-sphere
        for pair in itertools.combinations(range(new_color), 2):
            cols = pair + (new_color,)
            for h in g.residue_graphs(cols):
                if not h.is_bipartite() or euler_characteristic(h) != 2:
                    return False
    return True


def _extend_chunk(args):
    reps, rows, q, color = args
    found = {}
    for rep in reps:
        for row in rows:
            g = ColoredGraph(color, rep + (row,))
            if not _partial_ok(g, q, color):
                continue
            cf = canonical_form(g)
            if cf.certificate not in found:
                found[cf.certificate] = canonical_graph(g).matchings
    return found


def _level_classes(q: CensusQuery, n: int) -> dict:
    """Canonical representatives of the full (d+1)-colored graphs on n vertices."""
    rows = perfect_matchings_rows(n)
    base = tuple((v ^ 1) for v in range(n))
    classes = {("base",): (base,)}
    for color in range(1, q.d + 1):
        reps = sorted(classes.values())
        if q.jobs > 1 and len(reps) > 1:
            k = q.jobs * 4
            chunks = [(reps[i::k], rows, q, color) for i in range(k)]
            with Pool(q.jobs) as pool:
                parts = pool.map(_extend_chunk, chunks)
        else:
            parts = [_extend_chunk((reps, rows, q, color))]
        merged = {}
        for part in parts:
            for cert, mats in part.items():
                merged.setdefault(cert, mats)
        classes = merged
        log.info("order %d: %d classes with %d colors", n, len(classes), color + 1)
    return classes


def enumerate_gems(q: CensusQuery) -> Iterator[CensusEntry]:
    """Yield one entry per isomorphism class, sorted by (order, certificate)."""
    from .algebra import PresentationError, first_homology
    from .moves import manifold_check

    for n in range(max(2, q.min_order), q.max_order + 1, 2):
        classes = _level_classes(q, n)
        finals = {}
        for mats in classes.values():
            g = ColoredGraph(q.d, mats)
            if not g.is_connected():
                continue
            if q.bipartite_only and not g.is_bipartite():
                continue
            if q.crystallizations_only and any(g.g_hat(c) != 1 for c in g.colors):
                continue
            cf = canonical_form(g, mod_colors=q.mod_colors)
            if cf.certificate in finals:
                continue
            finals[cf.certificate] = (cf, canonical_graph(g, mod_colors=q.mod_colors))
        for cert in sorted(finals):
            cf, g = finals[cert]
            rep = invariant_report(g, check_manifold=q.d >= 3, budget=q.budget, seed=q.seed)
            if q.d >= 3:
                if rep.manifold == "not-manifold" and (q.manifolds_only or q.closed_only):
                    continue
                if q.closed_only and (rep.manifold != "singular-manifold" or rep.singular_colors != ()):
                    continue
            # undetermined sphere tests leave the entry in, but flagged
            quarantined = q.d >= 3 and not manifold_check(g, q.budget, q.seed).resolved and rep.manifold != "not-manifold"
            h1 = None
            if rep.manifold == "singular-manifold" or q.d <= 2:
                try:
                    h1 = first_homology(g, singular_colors=rep.singular_colors or ())
                except PresentationError:
                    h1 = None
            if q.predicate is not None and not q.predicate(g, rep):
                continue
            yield CensusEntry(cf, g, rep, h1, quarantined)


def census_index_row(e: CensusEntry) -> str:
    spec = ",".join(str(x) for x in e.report.genus_spectrum())
    return "\t".join(
        [
            e.digest,
            str(e.graph.order),
            str(e.graph.dimension),
            str(e.report.bipartite).lower(),
            spec,
            str(e.report.gurau_degree),
            str(e.h1) if e.h1 is not None else "?",
        ]
    )


INDEX_HEADER = "cert\torder\td\tbipartite\tgenus_spectrum\tgurau_degree\tH1"


# -- gem complexity -------------------------------------------------------------

@dataclass
class Complexity:
    value: int
    exact: bool
    source: str

    def __str__(self):
        return f"{self.value}" + ("" if self.exact else " (upper bound)") + f" [{self.source}]"


def gem_complexity(
    target,
    d: int = 3,
    max_order: int = 8,
    force: bool = False,
) -> Complexity:
    """k(M) = p - 1 for the least order gem of M found.

    ``target`` is a catalog name or a predicate on (graph, report, h1). The
    census runs up to ``max_order``; a hit there is exact (every smaller order was
    covered). Otherwise a catalog witness gives an upper bound.
    """
    from .catalog import catalog_load, catalog_matcher

    pred = catalog_matcher(target) if isinstance(target, str) else target
    q = CensusQuery(d, max_order, manifolds_only=True, force=force)
    for e in enumerate_gems(q):
        if e.quarantined:
            continue
        if pred(e.graph, e.report, e.h1):
            return Complexity(e.graph.p - 1, True, f"census order {e.graph.order}")
    if isinstance(target, str):
        entry = catalog_load(target)
        return Complexity(entry.graph.p - 1, False, f"catalog {entry.name}")
    raise LookupError("no representative found within the census bounds")
