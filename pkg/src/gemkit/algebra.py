"""Fundamental group presentations read off a gem, and their abelian invariants.

Words are tuples of signed 1-based generator indices: ``k`` stands for
``x_k`` and ``-k`` for its inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .graph import ColoredGraph

Word = tuple[int, ...]


class PresentationError(ValueError):
    """The requested presentation's hypotheses are not met."""


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def min_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z{t}" for t in self.torsion]
        if not parts:
            return "0"
        if self.free_rank > 1 and not self.torsion:
            return f"Z^{self.free_rank}"
        return "+".join(parts)

    @classmethod
    def parse(cls, text: str) -> "AbelianInvariants":
        text = text.strip()
        if text == "0":
            return cls(0)
        if text.startswith("Z^") and "+" not in text:
            return cls(int(text[2:]))
        free, tors = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                free += 1
            elif part.startswith("Z"):
                tors.append(int(part[1:]))
            else:
                raise ValueError(f"cannot parse group {text!r}")
        return cls(free, tuple(sorted(tors)))


@dataclass
class GroupPresentation:
    ngens: int
    relators: list[Word]
    variant: str = ""
    colors: tuple[int, ...] = ()
    # generators killed by the maximal tree, as indices of the unreduced presentation
    tree_generators: tuple[int, ...] = ()
    unreduced_ngens: int = 0
    unreduced_nrelators: int = 0

    def __post_init__(self):
        for w in self.relators:
            for x in w:
                if x == 0 or abs(x) > self.ngens:
                    raise ValueError(f"relator {w} uses a missing generator")

    def to_text(self) -> str:
        lines = [f"gens {self.ngens}"]
        for w in self.relators:
            lines.append(" ".join(map(str, w)) if w else "1")
        return "\n".join(lines) + "\n"

    def relation_matrix(self) -> list[list[int]]:
        rows = []
        for w in self.relators:
            row = [0] * self.ngens
            for x in w:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    def abelianization(self) -> AbelianInvariants:
        return cokernel(self.relation_matrix(), self.ngens)


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def kill_generators(ngens: int, relators: Sequence[Sequence[int]], killed: Sequence[int]) -> tuple[int, list[Word]]:
    """Delete the (1-based) ``killed`` generators and renumber the survivors."""
    dead = set(killed)
    newidx = {}
    k = 0
    for x in range(1, ngens + 1):
        if x not in dead:
            k += 1
            newidx[x] = k
    out = []
    for w in relators:
        nw = cyclic_reduce([newidx[abs(x)] * (1 if x > 0 else -1) for x in w if abs(x) not in dead])
        if nw:
            out.append(nw)
    return k, out


# -- Smith normal form -----------------------------------------------------------

@dataclass
class SmithForm:
    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    """Return D, U, V with U·M·V = D, U and V unimodular, D diagonal d1 | d2 | ...

    Python integers keep every step exact.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| of the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SmithForm(A, U, V, diag)


def cokernel(rows: Sequence[Sequence[int]], ncols: int) -> AbelianInvariants:
    """Abelian group Z^ncols modulo the row span of ``rows``."""
    if ncols == 0:
        return AbelianInvariants(0)
    if not rows:
        return AbelianInvariants(ncols)
    snf = smith_normal_form(rows)
    nonzero = [x for x in snf.diagonal if x]
    torsion = tuple(x for x in nonzero if x > 1)
    return AbelianInvariants(ncols - len(nonzero), torsion)


# -- presentations from gems ---------------------------------------------------------

def _bfs_tree_edges(nverts: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    """Indices of a spanning forest chosen by BFS from the lowest vertex of each component."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nverts)]
    for k, (a, b) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    seen = [False] * nverts
    tree = []
    for s in range(nverts):
        if seen[s]:
            continue
        seen[s] = True
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y, k in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    tree.append(k)
                    dq.append(y)
    return tree


def _bicolored_cycles(g: ColoredGraph, i: int, j: int) -> list[list[int]]:
    """Each {i,j}-cycle as v1, v2 = m_i(v1), v3 = m_j(v2), ... from its least vertex."""
    seen = [False] * g.order
    mi, mj = g.matchings[i], g.matchings[j]
    cycles = []
    for s in range(g.order):
        if seen[s]:
            continue
        cyc = []
        v = s
        use_i = True
        while True:
            cyc.append(v)
            seen[v] = True
            v = mi[v] if use_i else mj[v]
            use_i = not use_i
            if v == s and use_i:
                break
        cycles.append(cyc)
    return cycles


def _check_nonsingular(colors, singular, variant):
    bad = sorted(set(colors) & set(singular))
    if bad:
        raise PresentationError(f"variant {variant} needs color(s) {bad} to be non-singular")


def pi1_presentation(
    g: ColoredGraph,
    i: int,
    j: int | None = None,
    variant: str = "b",
    singular_colors: Sequence[int] | None = None,
) -> GroupPresentation:
    """Presentation of π₁ from a gem.

    Variants ``a``/``a'`` (vertex pairs, colors i and j) and ``b``/``b'``
    (i-colored edges). ``a`` and ``b`` present π₁ of the compact manifold
    (singular vertices removed); the primed variants present π₁ of the
    singular manifold |K(Γ)| itself.
    """
    if not g.is_connected():
        raise PresentationError("graph must be connected")
    if singular_colors is None:
        from .moves import manifold_check

        mc = manifold_check(g)
        if mc.status != "singular-manifold" or not mc.resolved:
            raise PresentationError(f"cannot certify the singular colors ({mc.status})")
        singular_colors = mc.singular_colors
    d = g.dimension
    if variant in ("a", "a'"):
        if j is None or i == j:
            raise PresentationError("vertex-pair variant needs two distinct colors i, j")
        if variant == "a":
            _check_nonsingular((i, j), singular_colors, variant)
        else:
            _check_nonsingular(set(g.colors) - {i, j}, singular_colors, variant)
        return _presentation_a(g, i, j, variant)
    if variant in ("b", "b'"):
        if variant == "b":
            _check_nonsingular((i,), singular_colors, variant)
        else:
            _check_nonsingular(set(g.colors) - {i}, singular_colors, variant)
        return _presentation_b(g, i, variant)
    raise PresentationError(f"unknown variant {variant!r}")


def _presentation_a(g: ColoredGraph, i: int, j: int, variant: str) -> GroupPresentation:
    others = [c for c in g.colors if c not in (i, j)]
    rij = g.residues(others)
    ri = g.residues([c for c in g.colors if c != i])
    rj = g.residues([c for c in g.colors if c != j])
    # K_ij: vertices are the î-residues (0..gi-1) and ĵ-residues (gi..); one edge per îĵ-residue
    ends = {}
    for v in range(g.order):
        ends.setdefault(rij.labels[v], (ri.labels[v], ri.count + rj.labels[v]))
    edges = [ends[k] for k in range(rij.count)]
    tree = _bfs_tree_edges(ri.count + rj.count, edges)
    relators = []
    # bicolored cycles bound 2-cells only when d >= 2
    for cyc in (_bicolored_cycles(g, i, j) if g.dimension >= 2 else ()):
        word = [(rij.labels[v] + 1) * (1 if k % 2 == 0 else -1) for k, v in enumerate(cyc)]
        relators.append(cyclic_reduce(word))
    tree_gens = tuple(sorted(k + 1 for k in tree))
    n, rels = kill_generators(rij.count, relators, tree_gens)
    return GroupPresentation(n, rels, variant, (i, j), tree_gens, rij.count, len(relators))


def _presentation_b(g: ColoredGraph, i: int, variant: str) -> GroupPresentation:
    mi = g.matchings[i]
    edge_id = {}
    edges_v = []
    for v in range(g.order):
        w = mi[v]
        if v < w:
            edge_id[v] = edge_id[w] = len(edges_v)
            edges_v.append((v, w))
    ri = g.residues([c for c in g.colors if c != i])
    edges = [(ri.labels[a], ri.labels[b]) for a, b in edges_v]
    tree = _bfs_tree_edges(ri.count, edges)
    relators = []
    for j in g.colors:
        if j == i or g.dimension < 2:
            continue
        for cyc in _bicolored_cycles(g, i, j):
            word = []
            for k in range(0, len(cyc), 2):
                a, b = cyc[k], cyc[k + 1]  # traversed along the i-edge from a to b
                e = edge_id[a] + 1
                word.append(e if a < b else -e)
            relators.append(cyclic_reduce(word))
    tree_gens = tuple(sorted(k + 1 for k in tree))
    n, rels = kill_generators(len(edges_v), relators, tree_gens)
    return GroupPresentation(n, rels, variant, (i,), tree_gens, len(edges_v), len(relators))


def _admissible(g: ColoredGraph, singular: Sequence[int]) -> int:
    for c in g.colors:
        if c not in singular:
            return c
    raise PresentationError("every color is singular; no presentation variant applies")


def first_homology(
    g: ColoredGraph,
    i: int | None = None,
    j: int | None = None,
    variant: str = "b",
    singular_colors: Sequence[int] | None = None,
) -> AbelianInvariants:
    """H₁ of the compact manifold represented by ``g`` (abelianized presentation)."""
    if singular_colors is None:
        from .moves import manifold_check

        mc = manifold_check(g)
        if mc.status != "singular-manifold" or not mc.resolved:
            raise PresentationError(f"cannot certify the singular colors ({mc.status})")
        singular_colors = mc.singular_colors
    if i is None:
        i = _admissible(g, singular_colors)
    if variant in ("a", "a'") and j is None:
        j = next(c for c in g.colors if c != i and (variant == "a'" or c not in singular_colors))
    pres = pi1_presentation(g, i, j, variant, singular_colors)
    return pres.abelianization()


def rank_lower_bound(g: ColoredGraph, singular_colors: Sequence[int] | None = None) -> int:
    """Minimal number of generators of H₁, a lower bound for the rank of π₁."""
    from .moves import manifold_check

    mc = manifold_check(g)
    if mc.status != "singular-manifold" or not mc.resolved:
        raise PresentationError(f"cannot certify the singular colors ({mc.status})")
    if singular_colors is None:
        singular_colors = mc.singular_colors
    if len(singular_colors) > 1:
        raise PresentationError("rank bound requires at most one singular color")
    if singular_colors:
        sc = singular_colors[0]
        if sum(1 for c, _ in mc.singular_residues if c == sc) > 1:
            raise PresentationError("rank bound requires connected boundary")
    return first_homology(g, singular_colors=singular_colors).min_generators
