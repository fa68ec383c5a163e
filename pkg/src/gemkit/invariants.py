"""Regular genus, Gurau degree and Euler characteristic of colored graphs.

Genus values are kept exact as ``HalfInt`` (a doubled integer) because a
non-bipartite graph embeds regularly into non-orientable surfaces, whose
"genus" is half the number of crosscaps.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import ColoredGraph


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """The rational number ``doubled / 2``."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        raise TypeError(f"cannot convert {value!r} to HalfInt")

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def to_int(self) -> int:
        if self.doubled % 2:
            raise ValueError(f"{self} is not an integer")
        return self.doubled // 2

    def __add__(self, other):
        other = HalfInt.of(other)
        return HalfInt(self.doubled + other.doubled)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return HalfInt(self.doubled * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled == other.doubled
        if isinstance(other, int):
            return self.doubled == 2 * other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int):
            other = HalfInt(2 * other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        return self.doubled < other.doubled

    def __hash__(self):
        return hash(self.doubled) if self.doubled % 2 else hash(self.doubled // 2)

    def __str__(self):
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


# -- cyclic permutations -----------------------------------------------------

def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the least color is first, then pick the direction with seq[1] < seq[-1]."""
    seq = tuple(seq)
    if len(seq) <= 2:
        return tuple(sorted(seq))
    k = seq.index(min(seq))
    rot = seq[k:] + seq[:k]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


def cyclic_permutations(d: int) -> list[tuple[int, ...]]:
    """All d!/2 cyclic permutations of 0..d up to inversion, in lexicographic order."""
    if d < 2:
        raise ValueError("cyclic permutations up to inverse need d >= 2")
    out = []
    for tail in itertools.permutations(range(1, d + 1)):
        if tail[0] < tail[-1]:
            out.append((0,) + tail)
    out.sort()
    return out


def associated_permutation(eps: Sequence[int]) -> tuple[int, ...]:
    """For five colors, the pairing (e0,e1,e2,e3,e4) -> (e0,e2,e4,e1,e3)."""
    if len(eps) != 5:
        raise ValueError("associated permutation is defined for d = 4 only")
    e = tuple(eps)
    return canonical_cycle((e[0], e[2], e[4], e[1], e[3]))


def induced_cycle(eps: Sequence[int], colors: Iterable[int]) -> tuple[int, ...]:
    """Cyclic order that ``eps`` induces on a subset of its colors."""
    keep = set(colors)
    return tuple(c for c in eps if c in keep)


def consecutive_pairs(cycle: Sequence[int]) -> list[tuple[int, int]]:
    n = len(cycle)
    return [(cycle[j], cycle[(j + 1) % n]) for j in range(n)]


# -- genus ------------------------------------------------------------------------

def _genus_doubled(g: ColoredGraph, cycle: Sequence[int]) -> int:
    """2 * genus of the regular embedding of Γ restricted to ``cycle``'s colors.

    Summed over the components of that restriction.
    """
    h = len(cycle)
    if h < 2:
        return 0
    comps = g.residues(cycle).count
    faces = sum(g.residues(pair).count for pair in consecutive_pairs(cycle))
    return 2 * comps - faces - (2 - h) * g.p


def genus_wrt(g: ColoredGraph, eps: Sequence[int]) -> HalfInt:
    """Genus (half-genus when non-bipartite) of the regular embedding given by ``eps``."""
    if sorted(eps) != list(g.colors):
        raise ValueError(f"{tuple(eps)} is not a permutation of the colors 0..{g.dimension}")
    return HalfInt(_genus_doubled(g, eps))


def residue_genus(g: ColoredGraph, eps: Sequence[int], colors: Iterable[int]) -> HalfInt:
    """ρ_ε(Γ_B): genus of Γ_B with respect to the order ε induces on B."""
    return HalfInt(_genus_doubled(g, induced_cycle(eps, colors)))


def genus_hat(g: ColoredGraph, eps: Sequence[int], *removed: int) -> HalfInt:
    """ρ_ε of the residue spanned by every color except ``removed``."""
    return residue_genus(g, eps, set(g.colors) - set(removed))


def genus_vector(g: ColoredGraph) -> dict[tuple[int, ...], HalfInt]:
    key = ("genus_vector",)
    hit = g._cache.get(key)
    if hit is None:
        hit = {eps: genus_wrt(g, eps) for eps in cyclic_permutations(g.dimension)}
        g._cache[key] = hit
    return hit


def regular_genus(g: ColoredGraph) -> HalfInt:
    if g.dimension < 2:
        return HalfInt(0)
    return min(genus_vector(g).values())


def minimizing_permutation(g: ColoredGraph) -> tuple[int, ...]:
    vec = genus_vector(g)
    return min(vec, key=lambda e: (vec[e], e))


class DegreeMismatch(AssertionError):
    """The permutation sum and the closed formula disagree (an implementation bug)."""


def gurau_degree_closed(g: ColoredGraph) -> HalfInt:
    """G-degree from 2-residue counts alone."""
    d = g.dimension
    if d < 2:
        return HalfInt(0)
    pair_sum = sum(g.g(r, s) for r, s in itertools.combinations(g.colors, 2))
    inner = d * g.components() + d * (d - 1) * g.p // 2 - pair_sum
    return HalfInt(math.factorial(d - 1) * inner)


def gurau_degree(g: ColoredGraph) -> HalfInt:
    """Sum of ρ_ε over the d!/2 cyclic permutations, cross-checked by the closed formula."""
    if g.dimension < 2:
        return HalfInt(0)
    total = HalfInt(sum(v.doubled for v in genus_vector(g).values()))
    closed = gurau_degree_closed(g)
    if total != closed:
        raise DegreeMismatch(f"permutation sum {total} != closed formula {closed}")
    if g.dimension >= 3 and not total.is_integer:
        raise DegreeMismatch(f"non-integral G-degree {total} in dimension {g.dimension}")
    return total


# -- Euler characteristic -------------------------------------------------------------

def euler_characteristic(g: ColoredGraph, method: str = "simplices", eps: Sequence[int] | None = None) -> int:
    """χ(|K(Γ)|).

    ``simplices``: alternating count of simplices, a k-simplex being a
    (d-k)-residue (the 0-residues are the 2p vertices).
    ``genus``: for d = 4 singular manifolds, 2 - 2ρ_ε + Σ_i ρ_ε(Γ_{ε̂_i})
    (requires the residue genera to be integral, which holds for bipartite input).
    """
    d = g.dimension
    if method == "simplices":
        chi = 0
        for k in range(d + 1):
            size = d - k
            if size == 0:
                count = g.order
            else:
                count = sum(g.residues(B).count for B in itertools.combinations(g.colors, size))
            chi += (-1) ** k * count
        return chi
    if method == "genus":
        if d != 4:
            raise ValueError("the genus formula for χ applies to d = 4 only")
        if eps is None:
            eps = cyclic_permutations(4)[0]
        total = HalfInt(4 * g.components()) - 2 * genus_wrt(g, eps)
        for c in g.colors:
            total = total + genus_hat(g, eps, c)
        if not total.is_integer:
            raise ValueError(f"non-integral Euler characteristic {total}")
        return total.to_int()
    raise ValueError(f"unknown method {method!r}")


# -- report --------------------------------------------------------------------------

def _fmt_perm(eps: Sequence[int]) -> str:
    return "".join(str(c) for c in eps) if len(eps) <= 10 else ",".join(map(str, eps))


@dataclass
class InvariantReport:
    dimension: int
    order: int
    bipartite: bool
    components: int
    genus: dict = field(default_factory=dict)  # eps -> HalfInt
    regular_genus: HalfInt = HalfInt(0)
    gurau_degree: HalfInt = HalfInt(0)
    euler_characteristic: int = 0
    g_hat: tuple[int, ...] = ()
    singular_colors: tuple[int, ...] | None = None
    singular_residues: tuple[tuple[int, int], ...] | None = None  # (color, residue id)
    manifold: str = "unchecked"
    residue_genus: dict = field(default_factory=dict)  # (eps, color) -> HalfInt

    @property
    def p(self) -> int:
        return self.order // 2

    def genus_spectrum(self) -> list[HalfInt]:
        return sorted(self.genus.values())

    def is_crystallization(self) -> bool:
        return all(x == 1 for x in self.g_hat)

    def to_text(self) -> str:
        lines = [
            f"dimension: {self.dimension}",
            f"order: {self.order}",
            f"components: {self.components}",
            f"bipartite: {str(self.bipartite).lower()}",
            f"regular_genus: {self.regular_genus}",
            f"gurau_degree: {self.gurau_degree}",
            f"euler_characteristic: {self.euler_characteristic}",
            "g_hat: " + " ".join(map(str, self.g_hat)),
            f"manifold: {self.manifold}",
        ]
        if self.singular_colors is not None:
            lines.append("singular_colors: " + (" ".join(map(str, self.singular_colors)) or "-"))
            lines.append(
                "singular_residues: "
                + (" ".join(f"{c}:{r}" for c, r in self.singular_residues) or "-")
            )
        lines.append("genus_spectrum: " + " ".join(str(x) for x in self.genus_spectrum()))
        for eps in sorted(self.genus):
            subs = " ".join(str(self.residue_genus.get((eps, c), "?")) for c in range(self.dimension + 1))
            lines.append(f"genus[{_fmt_perm(eps)}]: {self.genus[eps]} | hat {subs}")
        return "\n".join(lines) + "\n"


def invariant_report(g: ColoredGraph, check_manifold: bool = True, budget: int = 10_000, seed: int = 0) -> InvariantReport:
    vec = genus_vector(g) if g.dimension >= 2 else {}
    rep = InvariantReport(
        dimension=g.dimension,
        order=g.order,
        bipartite=g.is_bipartite(),
        components=g.components(),
        genus=dict(vec),
        regular_genus=regular_genus(g),
        gurau_degree=gurau_degree(g),
        euler_characteristic=euler_characteristic(g),
        g_hat=tuple(g.g_hat(c) for c in g.colors),
    )
    for eps in vec:
        for c in g.colors:
            rep.residue_genus[(eps, c)] = genus_hat(g, eps, c)
    if check_manifold:
        from .moves import manifold_check

        mc = manifold_check(g, budget=budget, seed=seed)
        rep.manifold = mc.status
        if mc.status == "singular-manifold":
            rep.singular_colors = mc.singular_colors
            rep.singular_residues = mc.singular_residues
    return rep


def verify_identities(g: ColoredGraph, **kwargs):
    """See :func:`gemkit.identities.verify_identities`."""
    from .identities import verify_identities as _verify

    return _verify(g, **kwargs)
