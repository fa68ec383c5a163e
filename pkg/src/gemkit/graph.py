"""Edge-colored regular graphs (gems): data model, text format, residues, isomorphism.

A ``ColoredGraph`` on ``2p`` vertices with colors ``0..d`` is stored as one
fixed-point-free involution per color: ``matchings[c][v]`` is the vertex
joined to ``v`` by the ``c``-colored edge.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GemError(ValueError):
    """Invalid gem data."""

    kind = "GemError"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(f"{self.kind}: {message}")


class MalformedHeader(GemError):
    kind = "MalformedHeader"


class FixedPointInMatching(GemError):
    kind = "FixedPointInMatching"


class EntryOutOfRange(GemError):
    kind = "EntryOutOfRange"


class NonInvolutiveRow(GemError):
    kind = "NonInvolutiveRow"


def colorset_mask(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def mask_colors(mask: int) -> tuple[int, ...]:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return tuple(out)


@dataclass(frozen=True)
class Residues:
    """Components of the subgraph spanned by one color subset."""

    colors: tuple[int, ...]
    count: int
    # component id of every vertex; ids are assigned in order of lowest vertex
    labels: tuple[int, ...]

    def components(self) -> list[list[int]]:
        comps: list[list[int]] = [[] for _ in range(self.count)]
        for v, k in enumerate(self.labels):
            comps[k].append(v)
        return comps


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    dimension: int
    matchings: tuple[tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matchings)
        object.__setattr__(self, "matchings", m)
        validate_matchings(self.dimension, m)

    # -- basic accessors -------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.matchings[0])

    @property
    def p(self) -> int:
        return self.order // 2

    @property
    def ncolors(self) -> int:
        return self.dimension + 1

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(range(self.dimension + 1))

    def neighbor(self, v: int, c: int) -> int:
        return self.matchings[c][v]

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.dimension == other.dimension and self.matchings == other.matchings

    def __hash__(self):
        return hash((self.dimension, self.matchings))

    # -- residues ----------------------------------------------------------
    def residues(self, colors: Iterable[int]) -> Residues:
        mask = colors if isinstance(colors, int) else colorset_mask(colors)
        key = ("res", mask)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cols = mask_colors(mask)
        n = self.order
        labels = [-1] * n
        rows = [self.matchings[c] for c in cols]
        k = 0
        for s in range(n):
            if labels[s] >= 0:
                continue
            labels[s] = k
            stack = [s]
            while stack:
                v = stack.pop()
                for row in rows:
                    w = row[v]
                    if labels[w] < 0:
                        labels[w] = k
                        stack.append(w)
            k += 1
        res = Residues(cols, k, tuple(labels))
        self._cache[key] = res
        return res

    def g(self, *colors: int) -> int:
        """Number of residues spanned by the given colors."""
        return self.residues(colors).count

    def g_hat(self, *colors: int) -> int:
        """Number of residues spanned by the complement of the given colors."""
        return self.residues(set(self.colors) - set(colors)).count

    def components(self) -> int:
        return self.residues(self.colors).count

    def is_connected(self) -> bool:
        return self.components() == 1

    def subgraph(self, colors: Sequence[int], vertices: Sequence[int]) -> "ColoredGraph":
        """Extract one residue as a graph, colors renumbered 0..len(colors)-1 in order.

        ``vertices`` must be a union of components of the ``colors``-subgraph; the
        vertex order is preserved.
        """
        colors = tuple(sorted(colors))
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for c in colors:
            row = self.matchings[c]
            rows.append(tuple(index[row[v]] for v in vertices))
        return ColoredGraph(len(colors) - 1, tuple(rows))

    def residue_graphs(self, colors: Iterable[int]) -> list["ColoredGraph"]:
        res = self.residues(colors)
        return [self.subgraph(res.colors, comp) for comp in res.components()]

    def component_graphs(self) -> list["ColoredGraph"]:
        return self.residue_graphs(self.colors)

    # -- bipartition -------------------------------------------------------
    def bipartition(self) -> tuple[int, ...] | None:
        """A 0/1 class per vertex, or None when some component is not bipartite."""
        key = ("bip",)
        if key in self._cache:
            return self._cache[key]
        n = self.order
        side = [-1] * n
        ok = True
        for s in range(n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack and ok:
                v = stack.pop()
                for row in self.matchings:
                    w = row[v]
                    if side[w] < 0:
                        side[w] = 1 - side[v]
                        stack.append(w)
                    elif side[w] == side[v]:
                        ok = False
                        break
            if not ok:
                break
        out = tuple(side) if ok else None
        self._cache[key] = out
        return out

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    # -- transformations -----------------------------------------------------
    def relabel(self, perm: Sequence[int]) -> "ColoredGraph":
        """Graph with vertex v renamed perm[v]."""
        n = self.order
        rows = []
        for row in self.matchings:
            new = [0] * n
            for v in range(n):
                new[perm[v]] = perm[row[v]]
            rows.append(tuple(new))
        return ColoredGraph(self.dimension, tuple(rows))

    def permute_colors(self, sigma: Sequence[int]) -> "ColoredGraph":
        """Graph whose color sigma[c] is this graph's color c."""
        rows = [None] * self.ncolors
        for c, row in enumerate(self.matchings):
            rows[sigma[c]] = row
        return ColoredGraph(self.dimension, tuple(rows))

    def __repr__(self):
        return f"ColoredGraph(d={self.dimension}, order={self.order})"


def validate_matchings(d: int, matchings) -> None:
    if d < 1:
        raise MalformedHeader(f"dimension must be >= 1, got {d}")
    if len(matchings) != d + 1:
        raise MalformedHeader(f"expected {d + 1} color rows, got {len(matchings)}")
    n = len(matchings[0])
    if n < 2 or n % 2:
        raise MalformedHeader(f"order must be even and >= 2, got {n}")
    for c, row in enumerate(matchings):
        if len(row) != n:
            raise MalformedHeader(f"color {c} row has {len(row)} entries, expected {n}")
        for v, w in enumerate(row):
            if not 0 <= w < n:
                raise EntryOutOfRange(f"color {c}: entry {w} at vertex {v} outside 0..{n - 1}")
            if w == v:
                raise FixedPointInMatching(f"color {c}: vertex {v} matched to itself")
            if row[w] != v:
                raise NonInvolutiveRow(f"color {c}: {v}->{w} but {w}->{row[w]}")


# -- text format -------------------------------------------------------------

def parse_gem(text: str) -> ColoredGraph:
    """Parse the ``gem <d> <2p>`` text format."""
    header = None
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if header is None:
            if len(toks) != 3 or toks[0] != "gem":
                raise MalformedHeader("expected 'gem <d> <2p>'", lineno)
            try:
                d, n = int(toks[1]), int(toks[2])
            except ValueError:
                raise MalformedHeader("non-integer header field", lineno) from None
            if d < 1 or n < 2 or n % 2:
                raise MalformedHeader(f"bad header values d={d} order={n}", lineno)
            header = (d, n, lineno)
            continue
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise GemError("non-integer entry", lineno) from None
        rows.append((lineno, vals))
    if header is None:
        raise MalformedHeader("missing header", 1)
    d, n, hline = header
    if len(rows) != d + 1:
        where = rows[d + 1][0] if len(rows) > d + 1 else hline
        raise MalformedHeader(f"expected {d + 1} color rows, found {len(rows)}", where)
    for c, (lineno, vals) in enumerate(rows):
        if len(vals) != n:
            raise GemError(f"color {c} row has {len(vals)} entries, expected {n}", lineno)
        for v, w in enumerate(vals):
            if not 0 <= w < n:
                raise EntryOutOfRange(f"color {c}: entry {w} at vertex {v}", lineno)
            if w == v:
                raise FixedPointInMatching(f"color {c}: vertex {v} matched to itself", lineno)
            if vals[w] != v:
                raise NonInvolutiveRow(f"color {c}: {v}->{w} but {w}->{vals[w]}", lineno)
    return ColoredGraph(d, tuple(tuple(v) for _, v in rows))


def serialize_gem(g: ColoredGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {ln}" for ln in comment.splitlines())
    lines.append(f"gem {g.dimension} {g.order}")
    for row in g.matchings:
        lines.append(" ".join(str(w) for w in row))
    return "\n".join(lines) + "\n"


def normalize_gem_text(text: str) -> str:
    """Canonical whitespace form: comments and blank lines dropped, single spaces."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            out.append(" ".join(line))
    return "\n".join(out) + "\n"


def read_gem(path) -> ColoredGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_gem(fh.read())


def write_gem(g: ColoredGraph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_gem(g, comment))


# -- small builders ----------------------------------------------------------

def sphere_gem(d: int) -> ColoredGraph:
    """The order-2 gem: two vertices joined by all d+1 colors."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return ColoredGraph(d, tuple((1, 0) for _ in range(d + 1)))


def from_pairs(d: int, order: int, pairs_by_color: Sequence[Iterable[tuple[int, int]]]) -> ColoredGraph:
    rows = []
    for pairs in pairs_by_color:
        row = [-1] * order
        for a, b in pairs:
            row[a] = b
            row[b] = a
        rows.append(tuple(row))
    return ColoredGraph(d, tuple(rows))


def disjoint_union(g1: ColoredGraph, g2: ColoredGraph) -> ColoredGraph:
    if g1.dimension != g2.dimension:
        raise ValueError("dimension mismatch")
    n1 = g1.order
    rows = [r1 + tuple(w + n1 for w in r2) for r1, r2 in zip(g1.matchings, g2.matchings)]
    return ColoredGraph(g1.dimension, tuple(rows))


# -- canonical form ------------------------------------------------------------

def _bfs_code(rows: Sequence[Sequence[int]], start: int, n: int, best=None):
    """Relabel a connected graph by BFS from ``start`` (colors in row order).

    Returns the flattened adjacency code, or None as soon as the partial code
    exceeds ``best``.
    """
    label = {start: 0}
    order = [start]
    code: list[int] = []
    i = 0
    pos = 0
    while i < len(order):
        v = order[i]
        i += 1
        for row in rows:
            w = row[v]
            lw = label.get(w)
            if lw is None:
                lw = len(order)
                label[w] = lw
                order.append(w)
            if best is not None:
                b = best[pos]
                if lw > b:
                    return None
                if lw < b:
                    best = None
            code.append(lw)
            pos += 1
    return code, order


def _component_code(rows, comp: Sequence[int]) -> tuple[tuple[int, ...], list[int]]:
    best = None
    best_order = None
    n = len(comp)
    for s in comp:
        r = _bfs_code(rows, s, n, best)
        if r is None:
            continue
        code, order = r
        if best is None or code < best:
            best, best_order = code, order
    return tuple(best), best_order


@dataclass(frozen=True)
class CanonicalForm:
    dimension: int
    order: int
    mod_colors: bool
    certificate: tuple
    # vertex order realizing the certificate (concatenated over components)
    relabeling: tuple[int, ...] = field(compare=False, default=())
    color_permutation: tuple[int, ...] = field(compare=False, default=())

    def digest(self, length: int = 16) -> str:
        h = hashlib.sha256(repr((self.dimension, self.mod_colors, self.certificate)).encode())
        return h.hexdigest()[:length]

    def __lt__(self, other: "CanonicalForm"):
        return (self.dimension, self.order, self.certificate) < (other.dimension, other.order, other.certificate)


def _certificate_for_rows(g: ColoredGraph, rows) -> tuple[tuple, list[int]]:
    comps = g.residues(g.colors).components()
    if len(comps) == 1:
        code, order = _component_code(rows, comps[0])
        return ((len(comps[0]), code),), order
    parts = []
    for comp in comps:
        code, order = _component_code(rows, comp)
        parts.append(((len(comp), code), order))
    parts.sort(key=lambda t: t[0])
    cert = tuple(p[0] for p in parts)
    order = [v for p in parts for v in p[1]]
    return cert, order


def canonical_form(g: ColoredGraph, mod_colors: bool = False) -> CanonicalForm:
    """Complete isomorphism certificate.

    A colored graph component is rigid once one vertex is fixed: a BFS that
    visits colors in a fixed order determines the whole relabeling. The
    certificate is the least BFS code over all start vertices; with
    ``mod_colors`` it is also minimized over every color permutation.
    """
    key = ("canon", mod_colors)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    if not mod_colors:
        cert, order = _certificate_for_rows(g, g.matchings)
        sigma = tuple(range(g.ncolors))
    else:
        cert = order = sigma = None
        for perm in itertools.permutations(range(g.ncolors)):
            # new color k is old color perm[k]
            rows = [g.matchings[perm[k]] for k in range(g.ncolors)]
            c, o = _certificate_for_rows(g, rows)
            if cert is None or c < cert:
                cert, order, sigma = c, o, perm
    cf = CanonicalForm(g.dimension, g.order, mod_colors, cert, tuple(order), tuple(sigma))
    g._cache[key] = cf
    return cf


def canonical_graph(g: ColoredGraph, mod_colors: bool = False) -> ColoredGraph:
    """The representative whose vertex numbering realizes the certificate."""
    cf = canonical_form(g, mod_colors)
    perm = [0] * g.order
    for new, old in enumerate(cf.relabeling):
        perm[old] = new
    h = g.relabel(perm)
    if mod_colors:
        inv = [0] * g.ncolors
        for k, old in enumerate(cf.color_permutation):
            inv[old] = k
        h = h.permute_colors(inv)
    return h


def is_isomorphic(g1: ColoredGraph, g2: ColoredGraph, mod_colors: bool = False) -> bool:
    if g1.dimension != g2.dimension or g1.order != g2.order:
        return False
    return canonical_form(g1, mod_colors).certificate == canonical_form(g2, mod_colors).certificate
