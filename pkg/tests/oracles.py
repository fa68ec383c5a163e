"""Independent reference computations used to cross-check gemkit.

Nothing here calls into gemkit beyond the ColoredGraph container; each oracle
takes a different route to the same number (face tracing instead of bicolored
cycle counts, a Delta-complex chain complex instead of a group presentation,
determinantal divisors instead of elimination, brute-force relabeling instead
of canonical augmentation).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


# -- regular embeddings by face tracing -----------------------------------------------


def traced_faces(g, eps) -> int:
    """Number of faces of the regular embedding, traced dart by dart.

    Darts are (vertex, color); the rotation at a vertex follows eps on one side of
    the bipartition and its inverse on the other. Only for bipartite graphs.
    """
    side = _two_coloring(g)
    assert side is not None, "face tracing oracle needs a bipartite graph"
    k = len(eps)
    nxt = {eps[i]: eps[(i + 1) % k] for i in range(k)}
    prv = {eps[(i + 1) % k]: eps[i] for i in range(k)}
    seen = set()
    faces = 0
    for v in range(g.order):
        for c in eps:
            if (v, c) in seen:
                continue
            faces += 1
            x, col = v, c
            while (x, col) not in seen:
                seen.add((x, col))
                y = g.matchings[col][x]
                col = nxt[col] if side[y] == 0 else prv[col]
                x = y
    return faces


def traced_genus(g, eps) -> Fraction:
    """Genus of the surface carrying the regular embedding (connected, bipartite)."""
    V = g.order
    E = g.order * len(eps) // 2
    chi = V - E + traced_faces(g, eps)
    return Fraction(2 - chi, 2)


def counted_genus(g, eps) -> Fraction:
    """rho_eps = 1 - chi/2 with faces counted by union-find on two-colored edges.

    Works for non-bipartite graphs too (half-integral values).
    """
    k = len(eps)
    faces = 0
    for i in range(k):
        a, b = eps[i], eps[(i + 1) % k]
        faces += _count_cycles(g, a, b)
    chi = g.order - g.order * k // 2 + faces
    return Fraction(2 - chi, 2)


def _count_cycles(g, a, b) -> int:
    parent = list(range(g.order))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in (a, b):
        for v in range(g.order):
            parent[find(v)] = find(g.matchings[c][v])
    return len({find(v) for v in range(g.order)})


def _two_coloring(g):
    side = [-1] * g.order
    for s in range(g.order):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for row in g.matchings:
                w = row[v]
                if side[w] < 0:
                    side[w] = 1 - side[v]
                    stack.append(w)
                elif side[w] == side[v]:
                    return None
    return side


# -- the pseudocomplex K(Gamma) as a Delta-complex ----------------------------------------


def _residue_label(g, colors, v, memo):
    """Smallest vertex of the residue of ``colors`` through v (by flood fill)."""
    key = (colors, v)
    if key in memo:
        return memo[key]
    comp = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for c in colors:
            y = g.matchings[c][x]
            if y not in comp:
                comp.add(y)
                stack.append(y)
    lab = min(comp)
    for x in comp:
        memo[(colors, x)] = lab
    return lab


def delta_cells(g, k):
    """k-cells of K(g): (vertex color set S with |S| = k+1, residue label)."""
    d = g.dimension
    memo = {}
    cells = {}
    for S in itertools.combinations(range(d + 1), k + 1):
        comp = tuple(c for c in range(d + 1) if c not in S)
        for v in range(g.order):
            cells[(S, _residue_label(g, comp, v, memo))] = v
    return cells, memo


def boundary_matrix(g, k):
    """Cellular boundary from k-cells to (k-1)-cells; faces oriented by color order."""
    d = g.dimension
    hi, memo = delta_cells(g, k)
    lo, _ = delta_cells(g, k - 1)
    lo_index = {cell: i for i, cell in enumerate(sorted(lo))}
    rows = []
    for (S, _), v in sorted(hi.items()):
        row = [0] * len(lo_index)
        for i in range(len(S)):
            T = S[:i] + S[i + 1:]
            comp = tuple(c for c in range(d + 1) if c not in T)
            row[lo_index[(T, _residue_label(g, comp, v, memo))]] += (-1) ** i
        rows.append(row)
    return rows, len(lo_index)


def euler_characteristic_cells(g) -> int:
    return sum((-1) ** k * len(delta_cells(g, k)[0]) for k in range(g.dimension + 1))


def cellular_h1(g) -> tuple[int, tuple[int, ...]]:
    """(free rank, torsion) of H_1 of the polyhedron |K(g)|."""
    d1, n0 = boundary_matrix(g, 1)
    n1 = len(d1)
    r1 = Matrix(d1).rank() if d1 else 0
    kernel = n1 - r1
    if g.dimension < 2:
        return kernel, ()
    d2, _ = boundary_matrix(g, 2)
    facs = [int(x) for x in invariant_factors(Matrix(d2), domain=ZZ) if x != 0]
    torsion = tuple(sorted(abs(x) for x in facs if abs(x) > 1))
    return kernel - len(facs), torsion


# -- Smith normal form by determinantal divisors -------------------------------------------


def determinantal_invariants(M) -> list[int]:
    """Invariant factors d_k / d_{k-1}, d_k = gcd of all k x k minors. Small matrices only."""
    if not M or not M[0]:
        return []
    m, n = len(M), len(M[0])
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, int(Matrix([[M[r][c] for c in cols] for r in rows]).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# -- brute-force census ---------------------------------------------------------------------


def _matchings(n):
    if n == 0:
        yield ()
        return

    def rec(row, free):
        if not free:
            yield tuple(row)
            return
        a = free[0]
        for i in range(1, len(free)):
            b = free[i]
            row[a], row[b] = b, a
            yield from rec(row, free[1:i] + free[i + 1:])

    yield from rec([-1] * n, list(range(n)))


def _connected(rows, n):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for r in rows:
            if r[v] not in seen:
                seen.add(r[v])
                stack.append(r[v])
    return len(seen) == n


def brute_force_classes(d: int, n: int, mod_colors: bool = False) -> int:
    """Connected (d+1)-colored graphs on n vertices up to relabeling, by exhaustion."""
    all_m = list(_matchings(n))
    perms = list(itertools.permutations(range(n)))
    cperms = list(itertools.permutations(range(d + 1))) if mod_colors else [tuple(range(d + 1))]
    seen = set()
    for rows in itertools.product(all_m, repeat=d + 1):
        if not _connected(rows, n):
            continue
        key = None
        for sigma in cperms:
            crow = [rows[sigma[c]] for c in range(d + 1)]
            for p in perms:
                cand = []
                for r in crow:
                    new = [0] * n
                    for v in range(n):
                        new[p[v]] = p[r[v]]
                    cand.append(tuple(new))
                cand = tuple(cand)
                if key is None or cand < key:
                    key = cand
        seen.add(key)
    return len(seen)
