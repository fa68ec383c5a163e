"""Dipole moves, crystallization reduction, and bounded sphere/manifold recognition.

Every routine returns new graph values. Randomized routines take an explicit
seed (default 0) so results are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import ColoredGraph, colorset_mask

DEFAULT_BUDGET = 10_000


class DipoleError(ValueError):
    pass


@dataclass(frozen=True)
class Dipole:
    u: int
    v: int
    colors: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.colors)

    def log_line(self) -> str:
        return f"elim {self.r} {self.u} {self.v} " + " ".join(map(str, self.colors))


def _complement(g: ColoredGraph, colors: Iterable[int]) -> tuple[int, ...]:
    s = set(colors)
    return tuple(c for c in g.colors if c not in s)


def joining_colors(g: ColoredGraph, u: int, v: int) -> tuple[int, ...]:
    return tuple(c for c in g.colors if g.matchings[c][u] == v)


def is_dipole(g: ColoredGraph, u: int, v: int, colors: Sequence[int] | None = None) -> bool:
    if u == v:
        return False
    joined = joining_colors(g, u, v)
    if not joined or (colors is not None and tuple(sorted(colors)) != joined):
        return False
    if len(joined) == g.ncolors:
        return False  # the two vertices form a whole component
    rest = g.residues(_complement(g, joined))
    return rest.labels[u] != rest.labels[v]


def find_dipoles(g: ColoredGraph, r: int) -> list[Dipole]:
    """Every r-dipole of ``g``, sorted by (u, v)."""
    if not 1 <= r <= g.dimension:
        return []
    out = []
    for u in range(g.order):
        seen = set()
        for c in g.colors:
            v = g.matchings[c][u]
            if v <= u or v in seen:
                continue
            seen.add(v)
            joined = joining_colors(g, u, v)
            if len(joined) != r:
                continue
            rest = g.residues(_complement(g, joined))
            if rest.labels[u] != rest.labels[v]:
                out.append(Dipole(u, v, joined))
    out.sort(key=lambda d: (d.u, d.v))
    return out


def all_dipoles(g: ColoredGraph) -> list[Dipole]:
    out = []
    for r in range(1, g.dimension + 1):
        out.extend(find_dipoles(g, r))
    return out


def eliminate_dipole(g: ColoredGraph, dip: Dipole) -> ColoredGraph:
    """Delete the two vertices and weld the hanging edges of equal color."""
    if g.order <= 2:
        raise DipoleError("eliminating a dipole would empty the graph")
    if not is_dipole(g, dip.u, dip.v, dip.colors):
        raise DipoleError(f"{dip} is not a dipole of this graph")
    u, v = dip.u, dip.v
    inside = set(dip.colors)
    rows = []
    for c in g.colors:
        row = list(g.matchings[c])
        if c not in inside:
            a, b = row[u], row[v]
            row[a], row[b] = b, a
        rows.append(row)
    lo, hi = min(u, v), max(u, v)

    def shift(x):
        return x - (x > lo) - (x > hi)

    new_rows = []
    for row in rows:
        new_rows.append(tuple(shift(row[x]) for x in range(g.order) if x != u and x != v))
    return ColoredGraph(g.dimension, tuple(new_rows))


def add_dipole(g: ColoredGraph, site: dict[int, tuple[int, int]], colors: Sequence[int]) -> ColoredGraph:
    """Insert an r-dipole on the ``colors`` with new vertices 2p (u) and 2p+1 (v).

    ``site`` maps each color c outside ``colors`` to a c-edge (a, b): the edge is
    cut and re-attached as a-u and v-b.
    """
    colors = tuple(sorted(set(colors)))
    outside = _complement(g, colors)
    if not colors or not outside:
        raise DipoleError("an r-dipole needs 1 <= r <= d")
    if set(site) != set(outside):
        raise DipoleError(f"site must give one edge for each color in {outside}")
    n = g.order
    u, v = n, n + 1
    rows = [list(row) + [-1, -1] for row in g.matchings]
    for c in outside:
        a, b = site[c]
        if g.matchings[c][a] != b:
            raise DipoleError(f"({a},{b}) is not a {c}-edge")
        rows[c][a], rows[c][u] = u, a
        rows[c][b], rows[c][v] = v, b
    for c in colors:
        rows[c][u], rows[c][v] = v, u
    h = ColoredGraph(g.dimension, tuple(tuple(r) for r in rows))
    if not is_dipole(h, u, v, colors):
        raise DipoleError("the chosen site does not produce a dipole")
    return h


def vertex_site(g: ColoredGraph, x: int, colors: Sequence[int]) -> dict[int, tuple[int, int]]:
    """Site cutting every non-dipole edge at vertex x; such a dipole is always proper."""
    return {c: (x, g.matchings[c][x]) for c in _complement(g, colors)}


def add_log_line(colors: Sequence[int], site: dict[int, tuple[int, int]]) -> str:
    parts = [f"add {len(colors)}"] + [str(c) for c in sorted(colors)]
    for c in sorted(site):
        parts.append(f"{site[c][0]} {site[c][1]}")
    return " ".join(parts)


def apply_move_line(g: ColoredGraph, line: str) -> ColoredGraph:
    """Replay one ``elim r u v c1..cr`` or ``add r c1..cr a b ...`` log line."""
    toks = line.split()
    if not toks:
        return g
    r = int(toks[1])
    if toks[0] == "elim":
        u, v = int(toks[2]), int(toks[3])
        cols = tuple(int(t) for t in toks[4 : 4 + r])
        return eliminate_dipole(g, Dipole(u, v, cols))
    if toks[0] == "add":
        cols = tuple(int(t) for t in toks[2 : 2 + r])
        rest = [int(t) for t in toks[2 + r :]]
        outside = _complement(g, cols)
        if len(rest) != 2 * len(outside):
            raise DipoleError(f"bad add line: {line!r}")
        site = {c: (rest[2 * k], rest[2 * k + 1]) for k, c in enumerate(outside)}
        return add_dipole(g, site, cols)
    raise DipoleError(f"unknown move {toks[0]!r}")


# -- recognition ---------------------------------------------------------------

@dataclass
class RecognitionResult:
    verdict: str  # "Sphere", "NotSphere" or "Unknown"
    reason: str = ""
    certificate: list[str] = field(default_factory=list)

    @property
    def is_sphere(self) -> bool:
        return self.verdict == "Sphere"

    def __str__(self):
        return self.verdict + (f" ({self.reason})" if self.reason else "")


def _sphere_chi(d: int) -> int:
    return 1 + (-1) ** d


def _closedness(g: ColoredGraph, budget: int, seed: int) -> tuple[str, str]:
    """('closed'|'not-closed'|'unknown', witness): every ĉ-residue a (d-1)-sphere?"""
    unknown = ""
    for c in g.colors:
        for k, h in enumerate(g.residue_graphs(_complement(g, [c]))):
            res = recognize_sphere(h, budget=budget, seed=seed, _check_closed=True)
            if res.verdict == "NotSphere":
                return "not-closed", f"residue {k} of color {c}: {res.reason}"
            if res.verdict == "Unknown" and not unknown:
                unknown = f"residue {k} of color {c} unrecognized"
    return ("unknown", unknown) if unknown else ("closed", "")


def recognize_sphere(g: ColoredGraph, budget: int = DEFAULT_BUDGET, seed: int = 0, _check_closed: bool = True) -> RecognitionResult:
    """Sound but incomplete recognition of the d-sphere.

    Sphere: some regular embedding has genus 0, or dipole moves reduce the
    graph to order 2. NotSphere: an invariant obstruction. Unknown otherwise.
    """
    from .invariants import euler_characteristic, genus_vector

    d = g.dimension
    if not g.is_connected():
        return RecognitionResult("NotSphere", "disconnected")
    if g.order == 2:
        return RecognitionResult("Sphere", "order 2")
    if d == 1:
        return RecognitionResult("Sphere", "every connected 2-colored graph is a circle")
    if not g.is_bipartite():
        return RecognitionResult("NotSphere", "non-orientable (non-bipartite)")
    zero = [eps for eps, r in genus_vector(g).items() if r == 0]
    if zero:
        return RecognitionResult("Sphere", "genus 0 with respect to " + "".join(map(str, zero[0])))
    if d == 2:
        return RecognitionResult("NotSphere", "positive genus surface")
    chi = euler_characteristic(g)
    if _check_closed:
        status, why = _closedness(g, budget, seed)
        if status == "not-closed":
            return RecognitionResult("NotSphere", f"not a closed manifold: {why}")
        if status == "unknown":
            return RecognitionResult("Unknown", why)
    if chi != _sphere_chi(d):
        return RecognitionResult("NotSphere", f"Euler characteristic {chi}")
    from .algebra import first_homology

    h1 = first_homology(g, singular_colors=())
    if not h1.is_trivial:
        return RecognitionResult("NotSphere", f"H1 = {h1}")
    return _reduce_by_dipoles(g, budget, seed)


def _greedy(g: ColoredGraph, log: list[str], budget: list[int]) -> ColoredGraph:
    """Eliminate dipoles of a closed-manifold gem (all are proper) until none is left."""
    while g.order > 2 and budget[0] > 0:
        dips = []
        for r in range(g.dimension, 0, -1):
            dips = find_dipoles(g, r)
            if dips:
                break
        if not dips:
            break
        dip = dips[0]
        log.append(dip.log_line())
        g = eliminate_dipole(g, dip)
        budget[0] -= 1
    return g


def _reduce_by_dipoles(g: ColoredGraph, budget: int, seed: int) -> RecognitionResult:
    from .invariants import genus_vector

    rng = random.Random(seed)
    left = [budget]
    log: list[str] = []
    start = g
    cur = _greedy(g, log, left)
    restarts = 0
    while cur.order > 2 and left[0] > 0:
        if any(r == 0 for r in genus_vector(cur).values()):
            return RecognitionResult("Sphere", "genus 0 reached by dipole moves", log)
        # perturb: a few random 2-dipole insertions, then greedy again
        restarts += 1
        for _ in range(1 + restarts % 3):
            move = random_dipole_insertion(cur, rng, sizes=(2,) if cur.dimension >= 3 else (1,))
            if move is None:
                break
            cur, line = move
            log.append(line)
            left[0] -= 1
        cur = _greedy(cur, log, left)
    if cur.order == 2:
        return RecognitionResult("Sphere", "reduced to order 2", log)
    return RecognitionResult("Unknown", f"move budget exhausted at order {cur.order}")


def _exact_low_sphere(h: ColoredGraph) -> bool | None:
    """Exact sphere test for colored graphs of dimension <= 2, else None."""
    from .invariants import euler_characteristic

    if not h.is_connected():
        return False
    if h.dimension <= 1:
        return True
    if h.dimension == 2:
        return h.is_bipartite() and euler_characteristic(h) == 2
    return None


def is_proper(
    g: ColoredGraph,
    dip: Dipole,
    singular_manifold: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> bool | None:
    """True/False when decided, None when sphere recognition is inconclusive.

    With ``singular_manifold`` (the caller knows |K(g)| is one) every r-dipole
    with r > 1 is proper.
    """
    if singular_manifold and dip.r > 1:
        return True
    rest = g.residues(_complement(g, dip.colors))
    if len(rest.colors) <= 1:
        # the complementary residues are single edges, i.e. 0-spheres
        return True
    comps = rest.components()
    verdicts = []
    for x in (dip.u, dip.v):
        comp = comps[rest.labels[x]]
        h = g.subgraph(rest.colors, comp)
        exact = _exact_low_sphere(h)
        if exact is None:
            res = recognize_sphere(h, budget=budget, seed=seed)
            exact = {"Sphere": True, "NotSphere": False}.get(res.verdict)
        if exact:
            return True
        verdicts.append(exact)
    return False if all(v is False for v in verdicts) else None


def random_dipole_insertion(
    g: ColoredGraph,
    rng: random.Random,
    sizes: Sequence[int] | None = None,
    tries: int = 50,
) -> tuple[ColoredGraph, str] | None:
    """Insert one random proper dipole, returning the new graph and its log line."""
    d = g.dimension
    sizes = tuple(sizes) if sizes else tuple(range(1, d + 1))
    for _ in range(tries):
        r = rng.choice(sizes)
        colors = tuple(sorted(rng.sample(range(d + 1), r)))
        outside = _complement(g, colors)
        if r == 1 or rng.random() < 0.3:
            site = vertex_site(g, rng.randrange(g.order), colors)
        else:
            site = {}
            for c in outside:
                a = rng.randrange(g.order)
                site[c] = (a, g.matchings[c][a])
        try:
            h = add_dipole(g, site, colors)
        except DipoleError:
            continue
        dip = Dipole(g.order, g.order + 1, colors)
        if is_proper(h, dip) is True:
            return h, add_log_line(colors, site)
    return None


def random_inflation(g: ColoredGraph, moves: int, seed: int = 0, sizes: Sequence[int] | None = None) -> ColoredGraph:
    """Apply ``moves`` random proper dipole insertions (same polyhedron, larger gem)."""
    rng = random.Random(seed)
    for _ in range(moves):
        step = random_dipole_insertion(g, rng, sizes)
        if step is None:
            break
        g = step[0]
    return g


# -- manifold check ---------------------------------------------------------------

@dataclass
class ManifoldCheck:
    status: str  # "singular-manifold", "not-manifold" or "unknown"
    singular_colors: tuple[int, ...] = ()
    singular_residues: tuple[tuple[int, int], ...] = ()  # (color, residue index)
    undetermined: tuple[tuple[int, int], ...] = ()
    witness: str = ""

    @property
    def resolved(self) -> bool:
        return self.status == "singular-manifold" and not self.undetermined

    @property
    def closed(self) -> bool:
        return self.resolved and not self.singular_colors


def manifold_check(g: ColoredGraph, budget: int = DEFAULT_BUDGET, seed: int = 0) -> ManifoldCheck:
    """Is |K(g)| a singular manifold, and which ĉ-residues are singular?

    Singular manifold iff every ĉ-residue is a closed (d-1)-manifold, i.e. every
    (d-1)-colored residue of g is a (d-2)-sphere. Sphere tests in dimension <= 2
    are exact; higher ones use :func:`recognize_sphere`.
    """
    key = ("manifold", budget, seed)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    out = _manifold_check(g, budget, seed)
    g._cache[key] = out
    return out


def _manifold_check(g: ColoredGraph, budget: int, seed: int) -> ManifoldCheck:
    d = g.dimension
    if not g.is_connected():
        return ManifoldCheck("not-manifold", witness="disconnected")
    if d <= 2:
        return ManifoldCheck("singular-manifold")
    # every (d-1)-colored residue must be a (d-2)-sphere
    import itertools

    unknown = ""
    for drop in itertools.combinations(g.colors, 2):
        cols = _complement(g, drop)
        for k, h in enumerate(g.residue_graphs(cols)):
            exact = _exact_low_sphere(h)
            if exact is None:
                res = recognize_sphere(h, budget=budget, seed=seed)
                exact = {"Sphere": True, "NotSphere": False}.get(res.verdict)
            if exact is False:
                return ManifoldCheck("not-manifold", witness=f"residue {k} of colors {cols} is not a sphere")
            if exact is None and not unknown:
                unknown = f"residue {k} of colors {cols} unrecognized"
    if unknown:
        return ManifoldCheck("unknown", witness=unknown)
    sing, undet = [], []
    for c in g.colors:
        for k, h in enumerate(g.residue_graphs(_complement(g, [c]))):
            exact = _exact_low_sphere(h)
            if exact is None:
                res = recognize_sphere(h, budget=budget, seed=seed, _check_closed=False)
                exact = {"Sphere": True, "NotSphere": False}.get(res.verdict)
            if exact is False:
                sing.append((c, k))
            elif exact is None:
                undet.append((c, k))
    colors = tuple(sorted({c for c, _ in sing}))
    return ManifoldCheck("singular-manifold", colors, tuple(sing), tuple(undet))


# -- crystallization reduction ------------------------------------------------------

@dataclass
class Reduction:
    graph: ColoredGraph
    moves: list[str]
    complete: bool


def reduce_with_log(g: ColoredGraph, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Reduction:
    """Eliminate proper 1-dipoles until every color has a single ĉ-residue."""
    log: list[str] = []
    while any(g.g_hat(c) > 1 for c in g.colors) and len(log) < budget:
        progressed = False
        for dip in find_dipoles(g, 1):
            if is_proper(g, dip, budget=budget, seed=seed):
                log.append(dip.log_line())
                g = eliminate_dipole(g, dip)
                progressed = True
                break
        if not progressed:
            break
    done = all(g.g_hat(c) == 1 for c in g.colors)
    return Reduction(g, log, done)


def reduce_to_crystallization(g: ColoredGraph, budget: int = DEFAULT_BUDGET, seed: int = 0) -> ColoredGraph:
    return reduce_with_log(g, budget, seed).graph


def simplify(g: ColoredGraph, budget: int = DEFAULT_BUDGET, seed: int = 0) -> tuple[ColoredGraph, list[str]]:
    """Eliminate proper dipoles of any size greedily (largest size first)."""
    log: list[str] = []
    mc = manifold_check(g, budget, seed)
    singular = mc.status == "singular-manifold"
    while g.order > 2 and len(log) < budget:
        moved = False
        for r in range(g.dimension, 0, -1):
            for dip in find_dipoles(g, r):
                if is_proper(g, dip, singular_manifold=singular, budget=budget, seed=seed):
                    log.append(dip.log_line())
                    g = eliminate_dipole(g, dip)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
    return g, log
