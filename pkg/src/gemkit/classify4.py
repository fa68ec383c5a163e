"""Candidate manifolds for 5-colored gems of compact 4-manifolds.

The classifier reads a gem's invariants (genus spectrum, G-degree, singular
residues and their identification, H1, Euler characteristic, bipartiteness)
and walks an ordered table of rules. Each rule either does not apply or
yields the list of manifolds its statement allows, which is then filtered by
invariants of the manifold that are computed exactly. A rule is ``exact`` when
the filtered list has one fully specified member, ``candidate-list``
otherwise. Genus-table rows are always ``candidate-list``: a witness with
ρ = k only bounds the generalized genus from above.

Rule ids follow the numbering of the classification statements, e.g. ``T1.2c``
for the G-degree 18 row; :data:`RULES` describes each one.

Manifold names are plain strings: ``S4``, ``S1xS3``, ``S1~xS3``, ``#2(S1xS3)``,
``CP2``, ``Y4_m``, ``~Y4_m``, ``Y4_1#Y4_1``, ``L(2,1)xI``, ``S2xD2``, ``xi_c``,
``M4(K,d) with boundary L(a,b)`` and so on. ``?`` marks an unknown parameter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AbelianInvariants, PresentationError, first_homology
from .graph import ColoredGraph
from .invariants import (
    HalfInt,
    InvariantReport,
    associated_permutation,
    invariant_report,
    regular_genus,
)


class ClassificationError(ValueError):
    """The input is not a validated gem of a compact 4-manifold."""


# -- residue identification ---------------------------------------------------------

@dataclass(frozen=True)
class ResidueId:
    """Identification of one singular residue (a boundary component)."""

    color: int
    index: int
    order: int
    genus: HalfInt
    h1: str
    orientable: bool
    name: str | None  # None when not identified

    @property
    def label(self) -> str:
        return self.name or f"?(genus {self.genus}, H1 {self.h1})"


def identify_3manifold(h: ColoredGraph) -> tuple[str | None, HalfInt, str]:
    """(name or None, regular genus, H1) of a closed 3-manifold given by a 4-colored gem.

    Regular genus one means a genus one Heegaard splitting, so the manifold is
    S^3, S1xS2, S1~xS2 or a lens space; lens spaces L(n, q) with n <= 4 are
    determined by n. Everything else stays unidentified.
    """
    if h.dimension != 3:
        raise ValueError("expected a 4-colored gem")
    rho = regular_genus(h)
    h1 = first_homology(h, singular_colors=())
    if rho == 0:
        return "S3", rho, str(h1)
    if rho != 1:
        return None, rho, str(h1)
    if not h.is_bipartite():
        return "S1~xS2", rho, str(h1)
    if h1.free_rank == 1 and not h1.torsion:
        return "S1xS2", rho, str(h1)
    if h1.free_rank == 0 and not h1.torsion:
        return "S3", rho, str(h1)
    if h1.free_rank == 0 and len(h1.torsion) == 1:
        n = h1.torsion[0]
        return (f"L({n},1)" if n <= 4 else None), rho, str(h1)
    return None, rho, str(h1)


def _complement(g: ColoredGraph, c: int) -> tuple[int, ...]:
    return tuple(x for x in g.colors if x != c)


def identify_boundaries(g: ColoredGraph, report: InvariantReport | None = None) -> list[ResidueId]:
    """Identify every singular ĉ-residue of a 5-colored singular-manifold gem."""
    if report is None:
        report = invariant_report(g)
    if report.singular_residues is None:
        raise ClassificationError("the gem is not a validated singular manifold")
    out = []
    for c, k in report.singular_residues:
        h = g.residue_graphs(_complement(g, c))[k]
        name, rho, h1 = identify_3manifold(h)
        out.append(ResidueId(c, k, h.order, rho, h1, h.is_bipartite(), name))
    return out


# -- manifold profiles ----------------------------------------------------------------

@dataclass(frozen=True)
class Boundary:
    name: str | None  # None: any 3-manifold with this H1 and orientability
    h1: str
    orientable: bool


@dataclass(frozen=True)
class Profile:
    """Invariants of a named compact 4-manifold used to filter candidates."""

    name: str
    orientable: bool
    h1: str
    chi: int  # Euler characteristic of the manifold with boundary
    boundary: tuple[Boundary, ...] = ()

    @property
    def specified(self) -> bool:
        return "?" not in self.name


def _free(n: int) -> str:
    return str(AbelianInvariants(n, ()))


def _bundle_sum_name(m: int, orientable: bool) -> str:
    base = "S1xS2" if orientable else "S1~xS2"
    return base if m == 1 else f"#{m}({base})"


def _closed_sum_name(a: int, orientable: bool) -> str:
    base = "S1xS3" if orientable else "S1~xS3"
    if a == 0:
        return "S4"
    return base if a == 1 else f"#{a}({base})"


def handlebody_name(m: int, orientable: bool) -> str:
    return f"{'' if orientable else '~'}Y4_{m}"


def sum_profile(a: int, b: int, orientable: bool) -> Profile:
    """#_a(S1xS3) # Y4_b, or the non-orientable analogue."""
    if b == 0:
        name = _closed_sum_name(a, orientable)
        return Profile(name, orientable, _free(a), 2 - 2 * a)
    y = handlebody_name(b, orientable)
    if a == 0:
        name = y
    elif a == 1:
        name = f"{y}#(S1xS3)"
    else:
        name = f"{y}#{_closed_sum_name(a, orientable)}"
    bnd = (Boundary(_bundle_sum_name(b, orientable), _free(b), orientable),)
    return Profile(name, orientable, _free(a + b), 1 - 2 * a - b, bnd)


_S1S2 = Boundary("S1xS2", "Z", True)
_S1tS2 = Boundary("S1~xS2", "Z", False)
_L21 = Boundary("L(2,1)", "Z2", True)


def _fixed_profiles() -> dict[str, Profile]:
    ps = [
        sum_profile(0, 0, True),
        sum_profile(1, 0, True),
        sum_profile(1, 0, False),
        sum_profile(2, 0, True),
        sum_profile(2, 0, False),
        Profile("CP2", True, "0", 3),
        sum_profile(0, 1, True),
        sum_profile(0, 1, False),
        sum_profile(0, 2, True),
        sum_profile(0, 2, False),
        sum_profile(1, 1, True),
        sum_profile(1, 1, False),
        Profile("Y4_1#Y4_1", True, "Z^2", -2, (_S1S2, _S1S2)),
        Profile("Y4_1#~Y4_1", False, "Z^2", -2, (_S1S2, _S1tS2)),
        Profile("~Y4_1#~Y4_1", False, "Z^2", -2, (_S1tS2, _S1tS2)),
        Profile("L(2,1)xI", True, "Z2", 0, (_L21, _L21)),
        Profile("(S1xS2)xI", True, "Z", 0, (_S1S2, _S1S2)),
        Profile("(S1~xS2)xI", False, "Z", 0, (_S1tS2, _S1tS2)),
        Profile("S2xD2", True, "0", 2, (_S1S2,)),
        xi_profile(2),
    ]
    return {p.name: p for p in ps}


def xi_profile(c: int) -> Profile:
    return Profile(f"xi_{c}", True, "0", 2, (Boundary(f"L({c},1)", f"Z{c}", True),))


PROFILES: dict[str, Profile] = {}


# -- observations ----------------------------------------------------------------------

@dataclass
class Observation:
    """Everything the rules look at, derived from one gem."""

    omega: HalfInt
    rho: HalfInt
    orientable: bool
    h1: AbelianInvariants
    chi: int  # of the compact manifold (boundary components not coned)
    singular_colors: tuple[int, ...]
    boundaries: list[ResidueId]
    genus: dict  # eps -> HalfInt
    residue_genus: dict  # (eps, color) -> HalfInt

    @property
    def closed(self) -> bool:
        return not self.boundaries

    @property
    def nb(self) -> int:
        return len(self.boundaries)

    def null_subgenus(self) -> list[tuple]:
        return sorted(eps for eps in self.genus if any(self.residue_genus[(eps, c)] == 0 for c in range(5)))


def _boundary_matches(obs: Sequence[ResidueId], exp: Sequence[Boundary]) -> bool:
    if len(obs) != len(exp):
        return False

    def ok(o: ResidueId, e: Boundary) -> bool:
        if o.h1 != e.h1 or o.orientable != e.orientable:
            return False
        return e.name is None or o.name is None or o.name == e.name

    return any(all(ok(o, e) for o, e in zip(obs, perm)) for perm in itertools.permutations(exp))


def profile_matches(p: Profile, ob: Observation) -> bool:
    return (
        p.orientable == ob.orientable
        and p.h1 == str(ob.h1)
        and p.chi == ob.chi
        and _boundary_matches(ob.boundaries, p.boundary)
    )


# -- rules -------------------------------------------------------------------------------

@dataclass(frozen=True)
class RuleHit:
    rule: str
    listed: tuple[str, ...]  # the statement's list, instantiated
    candidates: tuple[str, ...]  # after filtering by exact invariants
    certainty: str  # exact | candidate-list | out-of-table
    reason: str = ""


RULES: dict[str, str] = {
    "T1.1a": "regular genus zero: the 4-sphere, and conversely",
    "T1.2a": "G-degree 0 or 6: the 4-sphere",
    "T1.2b": "G-degree 12: list of five",
    "T1.2c": "G-degree 18: genus-one list plus three products with I",
    "T1.2d": "G-degree 24, at most one singular color: closed and one-boundary lists",
    "T1.2gap": "no compact 4-manifold has G-degree at most 23 outside the lists",
    "P6.3": "a null sub-genus: connected sums of S1xS3 and one handlebody",
    "T6.13": "genus equal to the boundary residue genus: handlebodies",
    "T6.14": "genus equal to the rank of H1: sums of S1xS3 and one handlebody",
    "P6.8": "genus two, one singular color, two boundary components",
    "T1.1b": "genus at most one: candidates",
    "T1.1c": "genus at most two, empty or connected boundary: candidates",
}


def _genus_one_list(ob: Observation) -> list[Profile]:
    return [PROFILES[n] for n in ("S4", "S1xS3", "S1~xS3", "Y4_1", "~Y4_1")]


def _product_family(ob: Observation) -> list[Profile]:
    """Mbar x I for a genus one closed 3-manifold Mbar, read from the boundary."""
    if ob.nb != 2:
        return []
    a, b = ob.boundaries
    if a.h1 != b.h1 or a.orientable != b.orientable:
        return []
    if a.name and b.name and a.name != b.name:
        return []
    name = a.name or b.name
    inner = name if name else f"?[H1 {a.h1}]"
    if "x" in inner:
        inner = f"({inner})"
    bnd = Boundary(name, a.h1, a.orientable)
    return [Profile(f"{inner}xI", a.orientable, a.h1, 0, (bnd, bnd))]


def _lens_families(ob: Observation) -> list[Profile]:
    """xi_c and M4(K,d) with lens space boundary, read from the boundary."""
    if ob.nb != 1:
        return []
    bd = ob.boundaries[0]
    tors = AbelianInvariants.parse(bd.h1)
    if not bd.orientable or tors.free_rank or len(tors.torsion) != 1:
        return []
    n = tors.torsion[0]
    out = [xi_profile(n)]
    if n >= 3:
        lens = bd.name if bd.name else f"L({n},?)"
        out.append(Profile(f"M4(K,d) with boundary {lens}", True, "0", 2, (Boundary(bd.name, bd.h1, True),)))
    return out


_LIST_D = (
    "S4", "S1xS3", "S1~xS3", "#2(S1xS3)", "#2(S1~xS3)", "CP2",
    "Y4_1", "~Y4_1", "Y4_1#Y4_1", "Y4_1#~Y4_1", "~Y4_1#~Y4_1",
    "Y4_2", "~Y4_2", "Y4_1#(S1xS3)", "~Y4_1#(S1xS3)", "S2xD2", "xi_2",
)
_LIST_C2 = ("#2(S1xS3)", "#2(S1~xS3)", "CP2", "Y4_2", "~Y4_2", "Y4_1#(S1xS3)", "~Y4_1#(S1xS3)", "S2xD2")


def _hit(rule: str, listed: list[Profile], ob: Observation, genus_row: bool = False, reason: str = "") -> RuleHit:
    names = tuple(dict.fromkeys(p.name for p in listed))
    kept = [p for p in listed if profile_matches(p, ob)]
    cands = tuple(dict.fromkeys(p.name for p in kept))
    if not cands:
        return RuleHit(rule, names, (), "out-of-table", reason or "no listed manifold matches the invariants")
    exact = not genus_row and len(cands) == 1 and kept[0].specified
    return RuleHit(rule, names, cands, "exact" if exact else "candidate-list", reason)


def _rule_hits(ob: Observation) -> list[RuleHit]:
    hits: list[RuleHit] = []
    omega = ob.omega
    rho = ob.rho
    one_color = len(ob.singular_colors) <= 1

    if rho == 0:
        hits.append(_hit("T1.1a", [PROFILES["S4"]], ob))
    if omega in (0, 6):
        hits.append(_hit("T1.2a", [PROFILES["S4"]], ob))
    if omega == 12:
        hits.append(_hit("T1.2b", _genus_one_list(ob), ob))
    if omega == 18:
        prods = [PROFILES[n] for n in ("L(2,1)xI", "(S1xS2)xI", "(S1~xS2)xI")]
        hits.append(_hit("T1.2c", _genus_one_list(ob) + prods, ob))
    if omega == 24 and one_color:
        hits.append(_hit("T1.2d", [PROFILES[n] for n in _LIST_D], ob))
    if omega <= 23 and omega not in (0, 6, 12, 18):
        hits.append(RuleHit("T1.2gap", (), (), "out-of-table", f"G-degree {omega} is excluded"))

    if ob.nb <= 1 and one_color:
        hits.extend(_null_subgenus_hits(ob))
        hits.extend(_rank_hits(ob))
    if len(ob.singular_colors) == 1 and rho == 2 and ob.nb == 2:
        names = ("Y4_1#Y4_1", "Y4_1#~Y4_1", "~Y4_1#~Y4_1")
        hits.append(_hit("P6.8", [PROFILES[n] for n in names], ob))
    if rho == 1:
        listed = _genus_one_list(ob) + _product_family(ob)
        hits.append(_hit("T1.1b", listed, ob, genus_row=True))
    if rho == 2 and ob.nb <= 1:
        listed = _genus_one_list(ob) + [PROFILES[n] for n in _LIST_C2] + _lens_families(ob)
        hits.append(_hit("T1.1c", listed, ob, genus_row=True))
    return hits


def _boundary_rank(ob: Observation) -> int | None:
    if ob.nb == 0:
        return 0
    h = AbelianInvariants.parse(ob.boundaries[0].h1)
    return None if h.torsion else h.free_rank


def _null_subgenus_hits(ob: Observation) -> list[RuleHit]:
    hits = []
    eps_null = ob.null_subgenus()
    if not eps_null:
        return hits
    beta = _boundary_rank(ob)
    rank = None if ob.h1.torsion else ob.h1.free_rank
    # smallest admissible bounds over the permutations with a null sub-genus
    bound = min(ob.genus[e] for e in eps_null)
    reason = f"null sub-genus for {len(eps_null)} permutation(s)"
    if rank is None or beta is None or beta > rank or rank > bound:
        hits.append(RuleHit("P6.3", (), (), "out-of-table", reason + "; H1 incompatible with the conclusion"))
    else:
        hits.append(_hit("P6.3", [sum_profile(rank - beta, beta, ob.orientable)], ob, reason=reason))
    if ob.nb == 1:
        c = ob.singular_colors[0]
        equal = [e for e in ob.genus if ob.genus[e] == ob.residue_genus[(e, c)]]
        if equal:
            top = max(ob.genus[e] for e in equal).to_int()
            listed = [sum_profile(0, m, o) for m in range(1, top + 1) for o in (True, False)]
            hits.append(_hit("T6.13", listed, ob, reason="genus equals the boundary residue genus"))
    return hits


def _rank_hits(ob: Observation) -> list[RuleHit]:
    if not ob.rho.is_integer or ob.h1.min_generators != ob.rho:
        return []
    rho = ob.rho.to_int()
    beta = _boundary_rank(ob)
    if beta is None:
        beta = 0
    listed = [sum_profile(rho - b, b, o) for b in range(0, rho + 1) for o in (True, False)]
    if ob.nb == 0:
        listed = [p for p in listed if not p.boundary]
    return [_hit("T6.14", listed, ob, reason="rank of H1 equals the genus")]


# -- classification --------------------------------------------------------------------

@dataclass
class Classification:
    rule: str
    candidates: tuple[str, ...]
    certainty: str
    applicable: list[RuleHit] = field(default_factory=list)
    boundaries: list[ResidueId] = field(default_factory=list)
    observation: dict = field(default_factory=dict)

    @property
    def clause(self) -> str:
        return RULES.get(self.rule, "")

    def to_text(self) -> str:
        lines = [
            f"rule: {self.rule}",
            f"clause: {self.clause}",
            f"certainty: {self.certainty}",
            "candidates: " + (" | ".join(self.candidates) if self.candidates else "-"),
        ]
        for k in sorted(self.observation):
            lines.append(f"{k}: {self.observation[k]}")
        for b in self.boundaries:
            lines.append(
                f"boundary[{b.color}:{b.index}]: {b.label} order {b.order} genus {b.genus} "
                f"H1 {b.h1} {'orientable' if b.orientable else 'non-orientable'}"
            )
        for h in self.applicable:
            cands = " | ".join(h.candidates) if h.candidates else "-"
            extra = f" ({h.reason})" if h.reason else ""
            lines.append(f"applicable[{h.rule}]: {h.certainty}: {cands}{extra}")
        return "\n".join(lines) + "\n"


def _pair_violations(report: InvariantReport) -> list[str]:
    bad = []
    seen = set()
    for eps in sorted(report.genus):
        other = associated_permutation(eps)
        key = frozenset((eps, other))
        if key in seen:
            continue
        seen.add(key)
        total = (report.genus[eps] + report.genus[other]) * 6
        if total != report.gurau_degree:
            bad.append(f"6(rho{eps} + rho{other}) = {total} != {report.gurau_degree}")
    return bad


def _cross_check(report: InvariantReport) -> list[str]:
    """Internal consistency of a report; any message means it cannot be trusted."""
    errs = []
    total = HalfInt(sum(v.doubled for v in report.genus.values()))
    if total != report.gurau_degree:
        errs.append(f"genus sum {total} != G-degree {report.gurau_degree}")
    if report.components == 1:
        for eps, r in report.genus.items():
            chi = HalfInt.of(2) - r * 2
            for c in range(5):
                sub = report.residue_genus[(eps, c)]
                chi = chi + sub
                if sub > r:
                    errs.append(f"residue genus above genus for {eps}, color {c}")
            if chi != report.euler_characteristic:
                errs.append(f"Euler characteristic {report.euler_characteristic} != {chi} from genera of {eps}")
                break
    errs.extend(_pair_violations(report))
    return errs


def observe(g: ColoredGraph, report: InvariantReport | None = None, h1: AbelianInvariants | None = None,
            budget: int = 10_000, seed: int = 0) -> Observation:
    from .moves import manifold_check

    if g.dimension != 4:
        raise ClassificationError(f"classification needs a 5-colored gem, got {g.dimension + 1} colors")
    if report is None:
        report = invariant_report(g, budget=budget, seed=seed)
    if report.manifold != "singular-manifold" or report.singular_colors is None:
        raise ClassificationError(f"not a singular 4-manifold gem (status {report.manifold})")
    mc = manifold_check(g, budget=budget, seed=seed)
    if mc.undetermined:
        raise ClassificationError(f"{len(mc.undetermined)} residue(s) could not be recognized")
    errs = _cross_check(report)
    if errs:
        raise ClassificationError("inconsistent report: " + "; ".join(errs))
    if h1 is None:
        try:
            h1 = first_homology(g, singular_colors=report.singular_colors)
        except PresentationError as exc:
            raise ClassificationError(str(exc)) from exc
    return Observation(
        omega=report.gurau_degree,
        rho=report.regular_genus,
        orientable=report.bipartite,
        h1=h1,
        chi=report.euler_characteristic - len(report.singular_residues),
        singular_colors=tuple(report.singular_colors),
        boundaries=identify_boundaries(g, report),
        genus=dict(report.genus),
        residue_genus=dict(report.residue_genus),
    )


def classify_observation(ob: Observation) -> Classification:
    hits = _rule_hits(ob)
    exact = [h for h in hits if h.certainty == "exact"]
    if exact:
        main = exact[0]
    else:
        genus_rows = [h for h in hits if h.rule.startswith("T1.1") and h.candidates]
        rest = [h for h in hits if h.candidates]
        main = genus_rows[0] if genus_rows else (rest[0] if rest else None)
    summary = {
        "gurau_degree": str(ob.omega),
        "regular_genus": str(ob.rho),
        "orientable": str(ob.orientable).lower(),
        "H1": str(ob.h1),
        "euler_characteristic": str(ob.chi),
        "boundary_components": str(ob.nb),
        "singular_colors": " ".join(map(str, ob.singular_colors)) or "-",
    }
    if main is None:
        return Classification("none", (), "out-of-table", hits, ob.boundaries, summary)
    return Classification(main.rule, main.candidates, main.certainty, hits, ob.boundaries, summary)


def classify(
    g: ColoredGraph,
    report: InvariantReport | None = None,
    h1: AbelianInvariants | None = None,
    budget: int = 10_000,
    seed: int = 0,
) -> Classification:
    """Classify a 5-colored gem; raises :class:`ClassificationError` on invalid input."""
    return classify_observation(observe(g, report, h1, budget, seed))


# -- G-degree gap --------------------------------------------------------------------------

@dataclass
class GapCheck:
    anomalies: list[str]

    @property
    def ok(self) -> bool:
        return not self.anomalies

    def __bool__(self) -> bool:
        return self.ok


def degree_gap_check(report: InvariantReport, boundary_components: int | None = None) -> GapCheck:
    """Flag G-degree values that the classification statements rule out.

    Returns a falsy :class:`GapCheck` listing the anomalies, if any.
    """
    out = []
    omega = report.gurau_degree
    if not omega.is_integer or omega.to_int() % 6:
        out.append(f"G-degree {omega} is not a multiple of 6")
    out.extend(_pair_violations(report))
    if omega == 6 and not any(v == 0 for v in report.genus.values()):
        out.append("G-degree 6 without a permutation of genus zero")
    if omega <= 23 and omega not in (0, 6, 12, 18):
        out.append(f"G-degree {omega} <= 23 outside {{0, 6, 12, 18}}")
    if 24 < omega < 30:
        out.append(f"G-degree {omega} strictly between 24 and 30")
    if omega == 18 and boundary_components is not None and boundary_components not in (0, 1, 2):
        out.append("G-degree 18 with more than two boundary components")
    return GapCheck(out)


PROFILES.update(_fixed_profiles())
