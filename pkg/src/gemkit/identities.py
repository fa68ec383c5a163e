"""Exhaustive verification of the combinatorial identities relating residue
counts and regular genera.

Every identity is instantiated over all applicable color subsets, cyclic
permutations and colors. Genera enter in doubled form so that half-integral
values of non-bipartite gems stay exact. Identities whose hypotheses fail are
recorded as skipped with the reason; nothing is sampled.

Notation in instance strings: ``eps`` is a cyclic permutation, ``S`` a color
set, ``hat`` removes colors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .graph import ColoredGraph
from .invariants import (
    associated_permutation,
    cyclic_permutations,
    euler_characteristic,
    gurau_degree,
    gurau_degree_closed,
    induced_cycle,
    residue_genus,
)


@dataclass(frozen=True)
class Check:
    identity: str
    instance: str
    status: str  # pass | fail | skip
    detail: str = ""


@dataclass
class IdentityReport:
    dimension: int
    order: int
    hypotheses: dict[str, str] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def _count(self, status: str) -> int:
        return sum(1 for c in self.checks if c.status == status)

    @property
    def passed(self) -> int:
        return self._count("pass")

    @property
    def failed(self) -> int:
        return self._count("fail")

    @property
    def skipped(self) -> int:
        return self._count("skip")

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def by_identity(self) -> dict[str, tuple[int, int, int]]:
        out: dict[str, list[int]] = {}
        for c in self.checks:
            row = out.setdefault(c.identity, [0, 0, 0])
            row[("pass", "fail", "skip").index(c.status)] += 1
        return {k: tuple(v) for k, v in sorted(out.items())}

    def to_text(self, verbose: bool = False) -> str:
        lines = [f"dimension: {self.dimension}", f"order: {self.order}"]
        for k in sorted(self.hypotheses):
            lines.append(f"hypothesis[{k}]: {self.hypotheses[k]}")
        lines.append(f"passed: {self.passed}")
        lines.append(f"failed: {self.failed}")
        lines.append(f"skipped: {self.skipped}")
        for name, (p, f, s) in self.by_identity().items():
            lines.append(f"identity[{name}]: pass {p} fail {f} skip {s}")
        shown = self.checks if verbose else self.failures()
        for c in shown:
            extra = f" ({c.detail})" if c.detail else ""
            lines.append(f"{c.status} {c.identity} {c.instance}{extra}")
        return "\n".join(lines) + "\n"


class _Ctx:
    """Residue counts and doubled genera of one gem, memoized by color set."""

    def __init__(self, g: ColoredGraph, report: IdentityReport):
        self.g = g
        self.report = report
        self._rho: dict = {}

    def G(self, colors) -> int:
        return self.g.residues(tuple(colors)).count

    def R2(self, eps, colors) -> int:
        key = (eps, frozenset(colors))
        hit = self._rho.get(key)
        if hit is None:
            hit = residue_genus(self.g, eps, colors).doubled
            self._rho[key] = hit
        return hit

    def spherical_triple(self, colors) -> bool:
        """Every component of the 3-colored residue is a 2-sphere (χ = 2)."""
        r, s, t = colors
        chi_sum = self.G((r, s)) + self.G((s, t)) + self.G((r, t)) - self.g.p
        return chi_sum == 2 * self.G(colors)

    def record(self, identity: str, instance: str, ok: bool, detail: str = "") -> None:
        self.report.checks.append(Check(identity, instance, "pass" if ok else "fail", "" if ok else detail))

    def skip(self, identity: str, reason: str) -> None:
        self.report.checks.append(Check(identity, "-", "skip", reason))


def _fmt(colors) -> str:
    return "".join(map(str, colors)) if colors else "-"


def _minus(S, *cs):
    return tuple(c for c in S if c not in cs)


# -- residue Euler formulas --------------------------------------------------------

def _alternating(ctx: _Ctx, B: Sequence[int]) -> int:
    m = len(B)
    total = (2 - m) * ctx.g.p
    for s in range(2, m):
        total += (-1) ** s * sum(ctx.G(sub) for sub in itertools.combinations(B, s))
    return total


def _residue_formulas(ctx: _Ctx, manifold: bool, nonsingular: Sequence[int]) -> None:
    g, d = ctx.g, ctx.g.dimension
    if not manifold:
        for name in ("residue-odd", "residue-even", "hat-residue"):
            ctx.skip(name, "not a singular manifold")
        return
    for m in range(2, d):
        name = "residue-odd" if m % 2 else "residue-even"
        for B in itertools.combinations(g.colors, m):
            lhs = 2 * ctx.G(B) if m % 2 else 0
            rhs = _alternating(ctx, B)
            ctx.record(name, f"S={_fmt(B)}", lhs == rhs, f"{lhs} != {rhs}")
    if d < 2:
        ctx.skip("hat-residue", "needs d >= 2")
        return
    for i in g.colors:
        B = _minus(g.colors, i)
        if i not in nonsingular:
            ctx.skip("hat-residue", f"color {i} singular or undetermined")
            continue
        lhs = 2 * ctx.G(B) if d % 2 else 0
        rhs = _alternating(ctx, B)
        ctx.record("hat-residue", f"hat {i}", lhs == rhs, f"{lhs} != {rhs}")


def _g_rst(ctx: _Ctx, manifold: bool) -> None:
    g = ctx.g
    if g.dimension < 4 or not manifold:
        ctx.skip("g-rst", "needs a singular manifold of dimension >= 4")
        return
    for T in itertools.combinations(g.colors, 3):
        r, s, t = T
        lhs = 2 * ctx.G(T)
        rhs = ctx.G((r, s)) + ctx.G((s, t)) + ctx.G((r, t)) - g.p
        ctx.record("g-rst", f"S={_fmt(T)}", lhs == rhs, f"{lhs} != {rhs}")


# -- genus relations on a color set S with the induced cyclic order ----------------

def _three_vs_two(ctx: _Ctx, eps, S) -> None:
    """G(a,e) = G(a,b,e) + (ρ(S) - ρ(S-b)) - (G(S) - G(S-b)) for consecutive a,b,e."""
    cyc = induced_cycle(eps, S)
    n = len(cyc)
    if n < 3:
        return
    for k in range(n):
        a, b, e = cyc[k - 1], cyc[k], cyc[(k + 1) % n]
        inst = f"eps={_fmt(eps)} S={_fmt(S)} i={b}"
        # the hat-genus is monotone for every colored graph
        rs, rb = ctx.R2(eps, S), ctx.R2(eps, _minus(S, b))
        ctx.record("hat-genus-bounds", inst, 0 <= rb <= rs, f"0 <= {rb}/2 <= {rs}/2 fails")
        if not ctx.spherical_triple((a, b, e)):
            ctx.skip("three-vs-two", f"residue {_fmt(sorted((a, b, e)))} is not a union of 2-spheres")
            continue
        lhs = 2 * ctx.G((a, e))
        rhs = 2 * ctx.G((a, b, e)) + (rs - rb) - 2 * (ctx.G(S) - ctx.G(_minus(S, b)))
        ctx.record("three-vs-two", inst, lhs == rhs, f"{lhs} != {rhs} (doubled)")


def _nonconsecutive(cyc) -> list[tuple[int, int]]:
    n = len(cyc)
    return [(x, y) for x, y in itertools.combinations(range(n), 2) if (y - x) % n not in (1, n - 1)]


def _edge_count(ctx: _Ctx, eps, S, label: str = "edge-count") -> None:
    """G(S - ci - cj) = G(S-ci) + G(S-cj) - G(S) + ρ(S) - ρ(S-ci) - ρ(S-cj) + ρ(S-ci-cj)."""
    cyc = induced_cycle(eps, S)
    n = len(cyc)
    for x, y in _nonconsecutive(cyc):
        ci, cj = cyc[x], cyc[y]
        tri_i = (cyc[x - 1], ci, cyc[(x + 1) % n])
        tri_j = (cyc[y - 1], cj, cyc[(y + 1) % n])
        if not (ctx.spherical_triple(tri_i) and ctx.spherical_triple(tri_j)):
            ctx.skip(label, "a neighbouring 3-residue is not a union of 2-spheres")
            continue
        inst = f"eps={_fmt(eps)} S={_fmt(S)} i={ci} j={cj}"
        combo = ctx.R2(eps, S) - ctx.R2(eps, _minus(S, ci)) - ctx.R2(eps, _minus(S, cj)) + ctx.R2(eps, _minus(S, ci, cj))
        lhs = 2 * ctx.G(_minus(S, ci, cj))
        rhs = 2 * (ctx.G(_minus(S, ci)) + ctx.G(_minus(S, cj)) - ctx.G(S)) + combo
        ctx.record(label, inst, lhs == rhs, f"{lhs} != {rhs} (doubled)")
        ctx.record("pair-genus-nonneg", inst, combo >= 0, f"combination {combo}/2 < 0")


def _two_vs_pairs(ctx: _Ctx, eps, S) -> None:
    """The quater relation and its consequence, for every r outside {a,b,e}."""
    cyc = induced_cycle(eps, S)
    n = len(cyc)
    if n < 4:
        return
    for k in range(n):
        a, b, e = cyc[k - 1], cyc[k], cyc[(k + 1) % n]
        for r in S:
            if r in (a, b, e):
                continue
            Q = tuple(sorted((a, b, e, r)))
            if not all(ctx.spherical_triple(T) for T in itertools.combinations(Q, 3)):
                ctx.skip("quater", f"a 3-residue inside {_fmt(Q)} is not a union of 2-spheres")
                ctx.skip("two-vs-pairs", f"a 3-residue inside {_fmt(Q)} is not a union of 2-spheres")
                continue
            inst = f"eps={_fmt(eps)} S={_fmt(S)} i={b} r={r}"
            aer = tuple(sorted((a, e, r)))
            lhs = 2 * ctx.G(aer)
            rhs = (
                2 * (ctx.G(_minus(S, b)) + ctx.G(Q) - ctx.G(S))
                + ctx.R2(eps, S)
                - ctx.R2(eps, _minus(S, b))
                - ctx.R2(eps, Q)
            )
            ctx.record("quater", inst, lhs == rhs, f"{lhs} != {rhs} (doubled)")
            lhs = 2 * ctx.G((a, e))
            rhs = 2 * ctx.G((a, b, e)) + 2 * ctx.G(aer) + ctx.R2(eps, Q) - 2 * ctx.G(Q)
            ctx.record("two-vs-pairs", inst, lhs == rhs, f"{lhs} != {rhs} (doubled)")


def _genus_relations(ctx: _Ctx) -> None:
    g = ctx.g
    if g.dimension < 2:
        return
    full = tuple(g.colors)
    for eps in cyclic_permutations(g.dimension):
        _three_vs_two(ctx, eps, full)
        if g.dimension >= 3:
            _edge_count(ctx, eps, full)
            _two_vs_pairs(ctx, eps, full)
            # the same relation one level down gives the triangle count
            for c in full:
                _edge_count(ctx, eps, _minus(full, c), label="triangle-count")


# -- dimension four ----------------------------------------------------------------

def _residue_degree(g: ColoredGraph, colors) -> int:
    total = 0
    for h in g.residue_graphs(colors):
        total += gurau_degree(h).doubled
    return total  # doubled


def _dimension_four(ctx: _Ctx, manifold: bool, sphere: bool | None) -> None:
    g = ctx.g
    names = (
        "euler-genus",
        "edge-count-4",
        "triangle-count-4",
        "sum-subgenus-4",
        "two-subgenus-4",
        "floor-subgenus-4",
        "equality-subgenus-4",
        "order-formula",
        "order-formula-crystallization",
        "associated-pair",
        "sphere-half-sum",
    )
    if g.dimension != 4:
        return
    if not manifold or g.components() != 1:
        for n in names:
            ctx.skip(n, "needs a connected singular 4-manifold")
        return
    chi = euler_characteristic(g)
    omega2 = gurau_degree(g).doubled
    hats = [ctx.G(_minus(g.colors, c)) for c in g.colors]
    crystal = all(x == 1 for x in hats)
    res_deg = [_residue_degree(g, _minus(g.colors, c)) for c in g.colors] if crystal else None
    for eps in cyclic_permutations(4):
        tag = f"eps={_fmt(eps)}"
        r2 = ctx.R2(eps, g.colors)
        sub = [ctx.R2(eps, _minus(g.colors, eps[i])) for i in range(5)]  # by position
        hat = [ctx.G(_minus(g.colors, eps[i])) for i in range(5)]
        ctx.record("euler-genus", tag, 2 * chi == 4 - 2 * r2 + sum(sub), f"chi {chi}")
        for i in range(5):
            lo, hi = (i - 1) % 5, (i + 1) % 5
            trio = (eps[i], eps[(i + 2) % 5], eps[(i + 3) % 5])
            lhs = 2 * ctx.G(_minus(g.colors, eps[lo], eps[hi]))
            mid = 2 * ctx.G(tuple(sorted(trio)))
            rhs = 2 * (hat[lo] + hat[hi] - 1) + r2 - sub[lo] - sub[hi]
            ctx.record("edge-count-4", f"{tag} i={eps[i]}", lhs == mid == rhs, f"{lhs} {mid} {rhs} (doubled)")
            ctx.record("two-subgenus-4", f"{tag} i={eps[i]}", sub[lo] + sub[hi] <= r2, f"{sub[lo]}+{sub[hi]} > {r2} (doubled)")
            # triangles: j, k non consecutive in the cycle with eps_i removed
            rest = [eps[(i + t) % 5] for t in range(1, 5)]
            for x, y in ((0, 2), (1, 3)):
                cj, ck = rest[x], rest[y]
                lhs = 2 * ctx.G(_minus(g.colors, eps[i], cj, ck))
                rhs = 2 * (ctx.G(_minus(g.colors, eps[i], cj)) + ctx.G(_minus(g.colors, eps[i], ck)) - hat[i]) + sub[i]
                ctx.record("triangle-count-4", f"{tag} i={eps[i]} j={cj} k={ck}", lhs == rhs, f"{lhs} != {rhs} (doubled)")
        lhs = 2 * sum(ctx.G(_minus(g.colors, eps[(i - 1) % 5], eps[(i + 1) % 5])) for i in range(5))
        rhs = 2 * (2 * sum(hat) - 5) + 5 * r2 - 2 * sum(sub)
        ctx.record("sum-subgenus-4", tag, lhs == rhs, f"{lhs} != {rhs} (doubled)")
        ctx.record("floor-subgenus-4", tag, sum(sub) <= 2 * ((5 * r2) // 4), f"sum {sum(sub)}/2 exceeds floor")
        all_tight = all(sub[(i - 1) % 5] + sub[(i + 1) % 5] == r2 for i in range(5))
        ctx.record("equality-subgenus-4", tag, (2 * sum(sub) == 5 * r2) == all_tight, "co-implication fails")
        # p = ω/6 + 2ρ - Σρ_i + Σ(g_i - 1) + 1, all doubled
        rhs = omega2 // 6 + 2 * r2 - sum(sub) + 2 * (sum(hat) - 5) + 2
        ok = omega2 % 6 == 0 and 2 * g.p == rhs
        ctx.record("order-formula", tag, ok, f"2p = {2 * g.p}, formula gives {rhs}")
        if sphere is True:
            ctx.record("sphere-half-sum", tag, 2 * r2 == sum(sub), f"{r2} != {sum(sub)}/2 (doubled)")
        elif sphere is None:
            ctx.skip("sphere-half-sum", "sphere recognition undecided")
        else:
            ctx.skip("sphere-half-sum", "not a 4-sphere")
    if crystal:
        # 3(p - 1) = ω - Σ ω(Γ_i), doubled
        lhs = 6 * (g.p - 1)
        rhs = omega2 - sum(res_deg)
        ctx.record("order-formula-crystallization", "all", lhs == rhs, f"{lhs} != {rhs} (doubled)")
    else:
        ctx.skip("order-formula-crystallization", "some g_hat differs from 1")
    seen = set()
    for eps in cyclic_permutations(4):
        other = associated_permutation(eps)
        key = frozenset((eps, other))
        if key in seen:
            continue
        seen.add(key)
        total = 6 * (ctx.R2(eps, g.colors) + ctx.R2(other, g.colors))
        ctx.record("associated-pair", f"eps={_fmt(eps)} eps'={_fmt(other)}", total == omega2, f"{total} != {omega2} (doubled)")


# -- degree relations --------------------------------------------------------------

def _degree(ctx: _Ctx) -> None:
    g = ctx.g
    d = g.dimension
    if d < 2:
        return
    total = sum(ctx.R2(eps, g.colors) for eps in cyclic_permutations(d))
    closed = gurau_degree_closed(g).doubled
    ctx.record("degree-closed-vs-sum", "all", total == closed, f"{total} != {closed} (doubled)")
    rho2 = min(ctx.R2(eps, g.colors) for eps in cyclic_permutations(d))
    ctx.record("degree-vs-genus", "all", total >= (math.factorial(d) // 2) * rho2, f"{total} < d!/2 * {rho2} (doubled)")
    if d < 3:
        return
    for c in g.colors:
        sub = _residue_degree(g, _minus(g.colors, c))
        ctx.record("degree-vs-residue-degree", f"hat {c}", total >= d * sub, f"{total} < {d} * {sub} (doubled)")


def _euler_paths(ctx: _Ctx, manifold: bool) -> None:
    g = ctx.g
    if g.dimension != 4 or not manifold or g.components() != 1:
        return
    a = euler_characteristic(g)
    for eps in cyclic_permutations(4):
        try:
            b = euler_characteristic(g, method="genus", eps=eps)
        except ValueError as exc:
            ctx.record("euler-two-paths", f"eps={_fmt(eps)}", False, str(exc))
            continue
        ctx.record("euler-two-paths", f"eps={_fmt(eps)}", a == b, f"{a} != {b}")


def verify_identities(g: ColoredGraph, budget: int = 10_000, seed: int = 0) -> IdentityReport:
    """Check every applicable identity instance on ``g``.

    Hypotheses (singular manifold, non-singular colors, 4-sphere) are decided
    first and recorded in the report.
    """
    from .moves import manifold_check, recognize_sphere

    report = IdentityReport(g.dimension, g.order)
    ctx = _Ctx(g, report)
    d = g.dimension
    manifold = False
    nonsingular: tuple[int, ...] = ()
    if d >= 2:
        mc = manifold_check(g, budget=budget, seed=seed)
        manifold = mc.status == "singular-manifold"
        report.hypotheses["manifold"] = mc.status
        if manifold:
            doubtful = set(mc.singular_colors) | {c for c, _ in mc.undetermined}
            nonsingular = tuple(c for c in g.colors if c not in doubtful)
            report.hypotheses["non-singular colors"] = _fmt(nonsingular)
    else:
        manifold = True
        nonsingular = tuple(g.colors)
    report.hypotheses["connected"] = str(g.components() == 1).lower()
    sphere: bool | None = None
    if d == 4 and manifold and g.components() == 1:
        verdict = recognize_sphere(g, budget=budget, seed=seed).verdict
        sphere = {"Sphere": True, "NotSphere": False}.get(verdict)
        report.hypotheses["4-sphere"] = verdict

    _residue_formulas(ctx, manifold, nonsingular)
    _g_rst(ctx, manifold)
    _genus_relations(ctx)
    _dimension_four(ctx, manifold, sphere)
    _degree(ctx)
    _euler_paths(ctx, manifold)
    return report
