"""Gem-building procedures: spheres, lens spaces, handles, sums, products, cap-off.

Constructions whose target gem is only described qualitatively (handlebodies,
disk bundles over S^2) are obtained by a deterministic search over one extra
color matching and are admitted only after their invariants validate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .graph import ColoredGraph, canonical_form, disjoint_union, sphere_gem
from .moves import Dipole, add_dipole, eliminate_dipole, find_dipoles, manifold_check, vertex_site


class ConstructionError(ValueError):
    pass


# -- lens spaces -------------------------------------------------------------------

def lens_gem(p: int, q: int = 1) -> ColoredGraph:
    """Bipartite order-4p crystallization of L(p, q).

    The product of two 2p-cycles (colors 0,1 along the first factor, 2,3 along
    the second) is a gem of S^3 = S^1 * S^1; L(p, q) is its quotient by the free
    shift (a, b) -> (a + 2, b + 2q). Vertex (a, b), a in {0, 1}, has index 2p*a + b.
    """
    if p < 1:
        raise ConstructionError("p must be positive")
    n = 2 * p

    def idx(a, b):
        a %= n
        b %= n
        k = a // 2  # apply the inverse shift k times to bring a into {0, 1}
        return n * (a - 2 * k) + (b - 2 * q * k) % n

    rows = [[0] * (2 * n) for _ in range(4)]
    for a in (0, 1):
        for b in range(n):
            v = idx(a, b)
            rows[0][v] = idx(a ^ 1, b)
            rows[1][v] = idx(a + 1 if a % 2 else a - 1, b)
            rows[2][v] = idx(a, b ^ 1)
            rows[3][v] = idx(a, b + 1 if b % 2 else b - 1)
    return ColoredGraph(3, tuple(tuple(r) for r in rows))


# -- sums and handles ----------------------------------------------------------------

def _weld_delete(g: ColoredGraph, x: int, y: int) -> ColoredGraph:
    """Delete x and y, welding m_c(x) with m_c(y) for every color."""
    rows = []
    for c in g.colors:
        row = list(g.matchings[c])
        a, b = row[x], row[y]
        if a == y:
            raise ConstructionError(f"vertices {x} and {y} are {c}-adjacent")
        row[a], row[b] = b, a
        rows.append(row)
    lo, hi = min(x, y), max(x, y)
    keep = [v for v in range(g.order) if v not in (x, y)]
    out = tuple(tuple(r[v] - (r[v] > lo) - (r[v] > hi) for v in keep) for r in rows)
    return ColoredGraph(g.dimension, out)


def connected_sum(g1: ColoredGraph, v1: int, g2: ColoredGraph, v2: int) -> ColoredGraph:
    """Graph connected sum: delete v1, v2 and weld the hanging edges by color.

    Preconditions on residues (ordinary for interior sums, singular for
    boundary sums) are the caller's; see :func:`interior_connected_sum` and
    :func:`boundary_connected_sum` for checked versions.
    """
    if g1.dimension != g2.dimension:
        raise ConstructionError("dimension mismatch")
    if not (0 <= v1 < g1.order and 0 <= v2 < g2.order):
        raise ConstructionError("vertex index out of range")
    u = disjoint_union(g1, g2)
    return _weld_delete(u, v1, g1.order + v2)


def _ordinary_residues_at(g: ColoredGraph, v: int, mc) -> bool:
    bad = {(c, g.residues([x for x in g.colors if x != c]).labels[v]) for c in g.colors}
    return not (bad & set(mc.singular_residues)) and not (bad & set(mc.undetermined))


def interior_connected_sum(g1: ColoredGraph, g2: ColoredGraph, v1: int | None = None, v2: int | None = None) -> ColoredGraph:
    """Connected sum of the represented manifolds (interior sum).

    Needs a vertex of each operand whose d-residues are all ordinary. An
    operand lacking one (e.g. a crystallization with a singular color c) first
    gets a d-dipole on the colors other than c inserted at a vertex; one vertex
    of that dipole is welded away. When both operands needed this, the two
    surviving dipole vertices form a d-dipole in the sum, which is cancelled.
    """
    ops = []
    leftovers = []
    for g, v in ((g1, v1), (g2, v2)):
        mc = manifold_check(g)
        if mc.status != "singular-manifold":
            raise ConstructionError(f"operand is not a singular manifold gem ({mc.status})")
        left = None
        if v is None:
            v = next((x for x in range(g.order) if _ordinary_residues_at(g, x, mc)), None)
            if v is None:
                c = mc.singular_colors[0]
                colors = [x for x in g.colors if x != c]
                g = add_dipole(g, vertex_site(g, 0, colors), colors)
                v, left = g.order - 2, g.order - 1
        elif not _ordinary_residues_at(g, v, mc):
            raise ConstructionError(f"vertex {v} lies in a singular or unrecognized residue")
        ops.append((g, v))
        leftovers.append(left)
    (h1, w1), (h2, w2) = ops
    out = connected_sum(h1, w1, h2, w2)
    if leftovers[0] is not None and leftovers[1] is not None:
        a = leftovers[0] - (leftovers[0] > w1)
        b = h1.order - 1 + leftovers[1] - (leftovers[1] > w2)
        joined = tuple(c for c in out.colors if out.matchings[c][a] == b)
        out = eliminate_dipole(out, Dipole(min(a, b), max(a, b), joined))
    return out


def boundary_connected_sum(
    g1: ColoredGraph,
    g2: ColoredGraph,
    r1: int | None = None,
    r2: int | None = None,
) -> ColoredGraph:
    """Boundary connected sum along singular residues of the same color.

    The residues are chosen by index among each operand's singular residues
    (default: the first). The welded vertices must lie in exactly one singular
    residue each; the lowest such vertex is used.
    """
    picks = []
    for g, r in ((g1, r1), (g2, r2)):
        mc = manifold_check(g)
        if not mc.resolved or not mc.singular_residues:
            raise ConstructionError("operand needs a certified singular residue")
        color, rid = mc.singular_residues[r or 0]
        picks.append((g, mc, color, rid))
    if picks[0][2] != picks[1][2]:
        raise ConstructionError("singular residues must have the same color")
    verts = []
    for g, mc, color, rid in picks:
        sing = set(mc.singular_residues)
        lab = g.residues([x for x in g.colors if x != color]).labels
        found = None
        for v in range(g.order):
            if lab[v] != rid:
                continue
            hits = sum(
                1 for c in g.colors if (c, g.residues([x for x in g.colors if x != c]).labels[v]) in sing
            )
            if hits == 1:
                found = v
                break
        if found is None:
            raise ConstructionError("no vertex lies in exactly one singular residue")
        verts.append(found)
    return connected_sum(g1, verts[0], g2, verts[1])


def handle_gem(g: ColoredGraph, v: int, w: int) -> ColoredGraph:
    """Self connected sum: delete v, w and weld their hanging edges color by color.

    v and w must lie in different ĉ-residues for every color c.
    """
    for c in g.colors:
        lab = g.residues([x for x in g.colors if x != c]).labels
        if lab[v] == lab[w]:
            raise ConstructionError(f"{v} and {w} share a residue of color {c}")
    return _weld_delete(g, v, w)


def _inflated_sphere(d: int) -> ColoredGraph:
    """Order 2(d+2) gem of S^d: one 1-dipole of each color inserted at vertex 0."""
    g = sphere_gem(d)
    for c in range(d + 1):
        colors = [c]
        g = add_dipole(g, vertex_site(g, 0, colors), colors)
    return g


def sphere_bundle_gem(d: int, orientable: bool = True) -> ColoredGraph:
    """Order 2(d+1) crystallization of S^1 x S^(d-1) (or the twisted bundle)."""
    if d < 2:
        raise ConstructionError("need d >= 2")
    g = _inflated_sphere(d)
    side = g.bipartition()
    for v, w in itertools.combinations(range(g.order), 2):
        if (side[v] != side[w]) != orientable:
            continue
        try:
            h = handle_gem(g, v, w)
        except ConstructionError:
            continue
        if all(h.g_hat(c) == 1 for c in h.colors) and h.is_connected():
            return h
    raise ConstructionError("no handle site found")


# -- boundary graphs and cap-off -------------------------------------------------------

@dataclass(frozen=True)
class BoundaryGraph:
    """Colored graph whose last color may miss some edges (-1 marks a boundary vertex)."""

    dimension: int
    matchings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = self.dimension
        rows = tuple(tuple(r) for r in self.matchings)
        object.__setattr__(self, "matchings", rows)
        if len(rows) != d + 1:
            raise ConstructionError(f"expected {d + 1} color rows")
        n = len(rows[0])
        ColoredGraph(d - 1, rows[:d]) if d >= 2 else None
        last = rows[d]
        for v, w in enumerate(last):
            if w == -1:
                continue
            if not 0 <= w < n or w == v or last[w] != v:
                raise ConstructionError(f"color {d} is not a partial involution at {v}")

    @property
    def order(self) -> int:
        return len(self.matchings[0])

    def boundary_vertices(self) -> list[int]:
        return [v for v, w in enumerate(self.matchings[self.dimension]) if w == -1]

    @classmethod
    def from_graph(cls, g: ColoredGraph, removed: Iterable[int] = ()) -> "BoundaryGraph":
        """Copy of g with the top-color edges at the given vertices removed."""
        rows = [list(r) for r in g.matchings]
        top = rows[g.dimension]
        for v in removed:
            w = top[v]
            if w >= 0:
                top[v] = top[w] = -1
        return cls(g.dimension, tuple(tuple(r) for r in rows))


def cap_off(lam: BoundaryGraph, c: int) -> ColoredGraph:
    """Join the two ends of every {c, d}-colored path by a d-colored edge."""
    d = lam.dimension
    if not 0 <= c < d:
        raise ConstructionError("cap-off color must be below the top color")
    mc, md = lam.matchings[c], lam.matchings[d]
    top = list(md)
    for v in lam.boundary_vertices():
        if top[v] != -1:
            continue
        # walk c, d, c, ... until the next vertex missing a d-edge
        x = mc[v]
        steps = 0
        while md[x] != -1:
            x = mc[md[x]]
            steps += 1
            if steps > lam.order:
                raise ConstructionError("{c,d}-path does not terminate")
        if x == v or top[x] != -1:
            raise ConstructionError(f"path from {v} has ends ({v}, {x}) that cannot be joined")
        top[v], top[x] = x, v
    rows = lam.matchings[:d] + (tuple(top),)
    return ColoredGraph(d, rows)


def product_with_interval(g: ColoredGraph, eps: Sequence[int] | None = None) -> ColoredGraph:
    """Gem of M x I from a gem of the closed manifold M.

    The new top color d+1 duplicates the ε0-colored matching; this is the
    cap-off along ε0 of g viewed as a boundary graph with every (d+1)-edge missing.
    """
    from .invariants import minimizing_permutation

    mc = manifold_check(g)
    if not mc.closed:
        raise ConstructionError("product with interval needs a gem of a closed manifold")
    if eps is None:
        eps = minimizing_permutation(g)
    d = g.dimension
    lam = BoundaryGraph(d + 1, g.matchings + ((-1,) * g.order,))
    return cap_off(lam, eps[0])


def product_degree_formula(g: ColoredGraph, eps: Sequence[int]):
    """Predicted G-degree of product_with_interval(g, eps) from data of g."""
    from math import factorial

    from .invariants import HalfInt, gurau_degree

    d = g.dimension
    p = g.p
    s = sum(p - g.g(eps[0], eps[i]) for i in range(1, d + 1))
    # (d!/2) [s - (p - 1) + 2/(d-1)! * ω(g)], kept exact in doubled units
    w2 = gurau_degree(g).doubled  # 2ω
    num = factorial(d) * ((s - (p - 1)) * factorial(d - 1) + w2)
    den = factorial(d - 1)
    if num % den:
        raise ArithmeticError("non-integral degree prediction")
    return HalfInt(num // den)


# -- searches for one extra color ----------------------------------------------------------

def perfect_matchings(items: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    items = list(items)
    if not items:
        yield []
        return
    a = items[0]
    for k in range(1, len(items)):
        b = items[k]
        rest = items[1:k] + items[k + 1 :]
        for m in perfect_matchings(rest):
            yield [(a, b)] + m


def extend_by_color(g: ColoredGraph, pairs: Sequence[tuple[int, int]]) -> ColoredGraph | None:
    row = [-1] * g.order
    for a, b in pairs:
        row[a], row[b] = b, a
    try:
        return ColoredGraph(g.dimension + 1, g.matchings + (tuple(row),))
    except ValueError:
        return None


def search_extension(
    g: ColoredGraph,
    accept: Callable[[ColoredGraph], bool],
    bipartite: bool | None = None,
    candidates: Iterable[Sequence[tuple[int, int]]] | None = None,
) -> ColoredGraph | None:
    """First matching (in a fixed order) whose extension of g satisfies ``accept``."""
    side = g.bipartition()
    if candidates is None:
        candidates = perfect_matchings(range(g.order))
    for pairs in candidates:
        if bipartite is not None and side is not None:
            crossing = all(side[a] != side[b] for a, b in pairs)
            if bipartite and not crossing:
                continue
        h = extend_by_color(g, pairs)
        if h is None:
            continue
        if bipartite is not None and h.is_bipartite() != bipartite:
            continue
        if accept(h):
            return h
    return None


def _has_one_boundary_color(h: ColoredGraph, color: int) -> bool:
    mc = manifold_check(h)
    return mc.resolved and mc.singular_colors == (color,) and len(mc.singular_residues) == 1


def handlebody_gem(d: int, m: int = 1, orientable: bool = True) -> ColoredGraph:
    """Gem of the genus-m d-dimensional handlebody, order 2md - 2(m-1).

    Genus one: the order-2d crystallization of S^1 x S^(d-2) (or its twisted
    version) is given a top color so that this residue is the only singular
    one, every regular embedding has genus one and H1 = Z. Higher genus:
    boundary connected sums of genus-one gems.
    """
    if d < 3:
        raise ConstructionError("handlebody gems are built for d >= 3")
    if m < 1:
        raise ConstructionError("genus must be positive")
    base = _handlebody_one(d, orientable)
    g = base
    for _ in range(m - 1):
        g = boundary_connected_sum(g, base)
    return g


_HANDLEBODY_CACHE: dict = {}


def _handlebody_one(d: int, orientable: bool) -> ColoredGraph:
    key = (d, orientable)
    if key in _HANDLEBODY_CACHE:
        return _HANDLEBODY_CACHE[key]
    from .algebra import first_homology
    from .invariants import genus_vector

    base = sphere_bundle_gem(d - 1, orientable)

    def accept(h: ColoredGraph) -> bool:
        if any(x != 1 for x in genus_vector(h).values()):
            return False
        if not _has_one_boundary_color(h, d):
            return False
        h1 = first_homology(h, singular_colors=(d,))
        return h1.free_rank == 1 and not h1.torsion

    h = search_extension(base, accept, bipartite=orientable)
    if h is None:
        raise ConstructionError(f"no genus-one handlebody extension found for d={d}")
    _HANDLEBODY_CACHE[key] = h
    return h


def bundle_pair_genera(h: ColoredGraph) -> list[tuple[tuple[int, ...], tuple[int, ...], int, int]]:
    """(ε, ε', ρ_ε, ρ_ε') for the six associated pairs of a 5-colored gem, ε < ε'."""
    from .invariants import associated_permutation, genus_vector

    vec = genus_vector(h)
    out = []
    for eps in sorted(vec):
        other = associated_permutation(eps)
        if eps < other:
            out.append((eps, other, vec[eps].to_int(), vec[other].to_int()))
    return out


def _bundle_accept(c: int):
    from .algebra import first_homology
    from .invariants import gurau_degree_closed, regular_genus

    target_w = 12 * c if c >= 2 else 24
    low, high = (2, 2 * c - 2) if c >= 2 else (2, 2)

    def accept(h: ColoredGraph) -> bool:
        if gurau_degree_closed(h) != target_w or regular_genus(h) != 2:
            return False
        if not any((a, b) in ((low, high), (high, low)) for _, _, a, b in bundle_pair_genera(h)):
            return False
        if not _has_one_boundary_color(h, 4):
            return False
        return first_homology(h, singular_colors=(4,)).is_trivial

    return accept


_BUNDLE_CACHE: dict = {}


def disk_bundle_gem(c: int) -> ColoredGraph:
    """Gem of the D^2-bundle over S^2 with Euler class c (c = 0 or c >= 2).

    The boundary crystallization (L(c,1) of order 4c, or S^1 x S^2 of order 8
    when c = 0) receives a top color so that it is the only singular residue,
    the compact manifold is simply connected, and the associated-pair genera
    are 2 and 2c - 2 (2 and 2 when c = 0) with G-degree 12c (24 when c = 0).
    Orientable extensions are scanned in a fixed order; the first that passes
    is returned.
    """
    if c == 1 or c < 0:
        raise ConstructionError("Euler class must be 0 or at least 2")
    if c in _BUNDLE_CACHE:
        return _BUNDLE_CACHE[c]
    base = sphere_bundle_gem(3) if c == 0 else lens_gem(c)
    h = search_extension(base, _bundle_accept(c), bipartite=True, candidates=_crossing_matchings(base))
    if h is None:
        raise ConstructionError(f"no bundle gem found for c={c}")
    _BUNDLE_CACHE[c] = h
    return h


def _crossing_matchings(g: ColoredGraph) -> Iterator[list[tuple[int, int]]]:
    """Perfect matchings pairing each vertex with one of the other bipartition class."""
    side = g.bipartition()
    if side is None:
        yield from perfect_matchings(range(g.order))
        return
    black = [v for v in range(g.order) if side[v] == 0]
    white = [v for v in range(g.order) if side[v] == 1]
    for perm in itertools.permutations(white):
        yield list(zip(black, perm))
