"""Named gems with provenance and expected invariants.

The catalog is a directory holding one gem file per entry and a ``MANIFEST``
of ``key: value`` blocks separated by blank lines. Loading an entry recomputes
every expected invariant and fails loudly on any mismatch. The environment
variable ``GEMKIT_CATALOG`` overrides the directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .graph import ColoredGraph, read_gem

DEFAULT_DIR = Path(__file__).resolve().parent / "data" / "catalog"
MANIFEST = "MANIFEST"

# keys compared on load, in manifest order
CHECKED_KEYS = (
    "dimension",
    "order",
    "bipartite",
    "g_hat",
    "regular_genus",
    "gurau_degree",
    "genus_spectrum",
    "euler_characteristic",
    "singular_colors",
    "singular_residues",
    "H1",
    "boundary",
    "pair_genera",
)


class CatalogError(ValueError):
    pass


class CatalogMismatch(CatalogError):
    pass


def catalog_dir() -> Path:
    env = os.environ.get("GEMKIT_CATALOG")
    return Path(env) if env else DEFAULT_DIR


@dataclass
class CatalogEntry:
    name: str
    file: str
    manifold: str
    provenance: str
    expected: dict[str, str]
    notes: str = ""
    graph: ColoredGraph | None = field(default=None, repr=False)

    def block(self) -> str:
        lines = [
            f"name: {self.name}",
            f"file: {self.file}",
            f"manifold: {self.manifold}",
            f"provenance: {self.provenance}",
        ]
        for k in CHECKED_KEYS:
            if k in self.expected:
                lines.append(f"{k}: {self.expected[k]}")
        if self.notes:
            lines.append(f"notes: {self.notes}")
        return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> list[dict[str, str]]:
    blocks, cur = [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if line.startswith("#"):
            continue
        if not line.strip():
            if cur:
                blocks.append(cur)
                cur = {}
            continue
        if ":" not in line:
            raise CatalogError(f"{MANIFEST} line {lineno}: expected 'key: value'")
        k, v = line.split(":", 1)
        cur[k.strip()] = v.strip()
    if cur:
        blocks.append(cur)
    return blocks


def _read_manifest(directory: Path) -> dict[str, dict[str, str]]:
    path = directory / MANIFEST
    if not path.exists():
        raise CatalogError(f"no catalog manifest at {path}")
    out = {}
    for b in parse_manifest(path.read_text(encoding="utf-8")):
        if "name" not in b or "file" not in b:
            raise CatalogError(f"manifest block without name/file: {b}")
        out[b["name"]] = b
    return out


def catalog_list(directory: Path | None = None) -> list[str]:
    return list(_read_manifest(directory or catalog_dir()))


# -- computing the checked fragment ------------------------------------------------

def observed_fragment(g: ColoredGraph, budget: int = 10_000, seed: int = 0) -> dict[str, str]:
    """The checked invariants of a gem, rendered as manifest strings."""
    from .algebra import PresentationError, first_homology
    from .classify4 import identify_boundaries
    from .constructions import bundle_pair_genera
    from .invariants import invariant_report

    rep = invariant_report(g, budget=budget, seed=seed)
    frag = {
        "dimension": str(g.dimension),
        "order": str(g.order),
        "bipartite": str(rep.bipartite).lower(),
        "g_hat": " ".join(map(str, rep.g_hat)),
        "regular_genus": str(rep.regular_genus),
        "gurau_degree": str(rep.gurau_degree),
        "genus_spectrum": " ".join(str(x) for x in rep.genus_spectrum()) or "-",
        "euler_characteristic": str(rep.euler_characteristic),
    }
    if rep.singular_colors is not None:
        frag["singular_colors"] = " ".join(map(str, rep.singular_colors)) or "-"
        frag["singular_residues"] = str(len(rep.singular_residues))
        try:
            frag["H1"] = str(first_homology(g, singular_colors=rep.singular_colors))
        except PresentationError:
            frag["H1"] = "?"
        if g.dimension == 4:
            frag["boundary"] = "; ".join(b.label for b in identify_boundaries(g)) or "-"
            frag["pair_genera"] = " ".join(f"{a}+{b}" for _, _, a, b in bundle_pair_genera(g))
    return frag


def catalog_load(name: str, directory: Path | None = None, validate: bool = True) -> CatalogEntry:
    directory = directory or catalog_dir()
    manifest = _read_manifest(directory)
    if name not in manifest:
        raise CatalogError(f"unknown catalog entry {name!r}")
    b = manifest[name]
    g = read_gem(directory / b["file"])
    expected = {k: b[k] for k in CHECKED_KEYS if k in b}
    entry = CatalogEntry(
        name=b["name"],
        file=b["file"],
        manifold=b.get("manifold", b["name"]),
        provenance=b.get("provenance", "unknown"),
        expected=expected,
        notes=b.get("notes", ""),
        graph=g,
    )
    if validate:
        got = observed_fragment(g)
        bad = [f"{k}: expected {v!r}, got {got.get(k)!r}" for k, v in expected.items() if got.get(k) != v]
        if bad:
            raise CatalogMismatch(f"catalog entry {name!r} failed validation: " + "; ".join(bad))
    return entry


def catalog_matcher(name: str) -> Callable:
    """Predicate on (graph, report, h1) matching the entry's closed-manifold data.

    Used to look for smaller witnesses of a closed 3-manifold: same
    orientability, closed, same H1.
    """
    entry = catalog_load(name)
    want_h1 = entry.expected.get("H1")
    want_bip = entry.expected.get("bipartite") == "true"

    def pred(g, report, h1) -> bool:
        if report.singular_colors != () or g.dimension != entry.graph.dimension:
            return False
        return report.bipartite == want_bip and h1 is not None and str(h1) == want_h1

    return pred


# -- recipes ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Recipe:
    name: str
    file: str
    manifold: str
    provenance: str  # derived-by-construction | derived-by-census
    notes: str = ""


def _census_pick(d: int, max_order: int, want) -> ColoredGraph:
    """Least (order, certificate) census class of closed crystallizations satisfying ``want``."""
    from .census import CensusQuery, enumerate_gems

    q = CensusQuery(d, max_order, closed_only=True, crystallizations_only=True, mod_colors=True)
    for e in enumerate_gems(q):
        if not e.quarantined and want(e):
            return e.graph
    raise CatalogError(f"no census class found for d={d} up to order {max_order}")


def _census_lens21() -> ColoredGraph:
    return _census_pick(3, 8, lambda e: e.report.bipartite and str(e.h1) == "Z2")


def _census_s1s2(orientable: bool):
    def build() -> ColoredGraph:
        return _census_pick(
            3, 8, lambda e: e.report.bipartite == orientable and str(e.h1) == "Z" and e.report.regular_genus == 1
        )

    return build


def _census_cp2() -> ColoredGraph:
    return _census_pick(4, 8, lambda e: e.report.euler_characteristic == 3 and str(e.h1) == "0")


RECIPES: list[Recipe] = [
    *(Recipe(f"S{d}", f"S{d}.gem", f"S{d}", "derived-by-construction") for d in range(1, 6)),
    Recipe("L(2,1)", "L2_1.gem", "L(2,1)", "derived-by-census", "least census class with H1 = Z2"),
    *(Recipe(f"L({p},1)", f"L{p}_1.gem", f"L({p},1)", "derived-by-construction") for p in (3, 4, 5)),
    Recipe("S1xS2", "S1xS2.gem", "S1xS2", "derived-by-census", "least bipartite census class with H1 = Z"),
    Recipe("S1~xS2", "S1tS2.gem", "S1~xS2", "derived-by-census", "least non-bipartite census class with H1 = Z"),
    Recipe("S1xS3", "S1xS3.gem", "S1xS3", "derived-by-construction", "handle on an inflated sphere"),
    Recipe("S1~xS3", "S1tS3.gem", "S1~xS3", "derived-by-construction", "handle on an inflated sphere"),
    Recipe("#2(S1xS3)", "2S1xS3.gem", "#2(S1xS3)", "derived-by-construction", "graph connected sum"),
    Recipe("#2(S1~xS3)", "2S1tS3.gem", "#2(S1~xS3)", "derived-by-construction", "graph connected sum"),
    Recipe("CP2", "CP2.gem", "CP2", "derived-by-census", "the census class of order 8 with Euler characteristic 3"),
    Recipe("Y4_1", "Y4_1.gem", "Y4_1", "derived-by-construction", "top-color search over the S1xS2 gem"),
    Recipe("~Y4_1", "tY4_1.gem", "~Y4_1", "derived-by-construction", "top-color search over the S1~xS2 gem"),
    Recipe("Y4_2", "Y4_2.gem", "Y4_2", "derived-by-construction", "boundary connected sum"),
    Recipe("~Y4_2", "tY4_2.gem", "~Y4_2", "derived-by-construction", "boundary connected sum"),
    Recipe("Y4_1#Y4_1", "Y4_1sY4_1.gem", "Y4_1#Y4_1", "derived-by-construction", "interior connected sum"),
    Recipe("Y4_1#~Y4_1", "Y4_1stY4_1.gem", "Y4_1#~Y4_1", "derived-by-construction", "interior connected sum"),
    Recipe("~Y4_1#~Y4_1", "tY4_1stY4_1.gem", "~Y4_1#~Y4_1", "derived-by-construction", "interior connected sum"),
    Recipe("Y4_1#(S1xS3)", "Y4_1sS1xS3.gem", "Y4_1#(S1xS3)", "derived-by-construction", "interior connected sum"),
    Recipe("~Y4_1#(S1xS3)", "tY4_1sS1xS3.gem", "~Y4_1#(S1xS3)", "derived-by-construction", "interior connected sum"),
    Recipe("Lambda_0", "Lambda_0.gem", "S2xD2", "derived-by-construction", "search over top colors of the S1xS2 gem"),
    Recipe("Lambda_2", "Lambda_2.gem", "xi_2", "derived-by-construction", "search over top colors of the L(2,1) gem"),
    Recipe(
        "Lambda_3",
        "Lambda_3.gem",
        "xi_3",
        "derived-by-construction",
        "search over top colors of the L(3,1) gem; the G-degree 36 is an upper bound, minimality is conjectural",
    ),
    Recipe(
        "Lambda_4",
        "Lambda_4.gem",
        "xi_4",
        "derived-by-construction",
        "search over top colors of the L(4,1) gem; the G-degree 48 is an upper bound, minimality is conjectural",
    ),
    Recipe("L(2,1)xI", "L2_1xI.gem", "L(2,1)xI", "derived-by-construction", "product with I of the census L(2,1)"),
    Recipe("(S1xS2)xI", "S1xS2xI.gem", "(S1xS2)xI", "derived-by-construction", "product with I of the census S1xS2"),
    Recipe("(S1~xS2)xI", "S1tS2xI.gem", "(S1~xS2)xI", "derived-by-construction", "product with I of the census S1~xS2"),
    Recipe("L(3,1)xI", "L3_1xI.gem", "L(3,1)xI", "derived-by-construction", "product with I of the standard L(3,1)"),
]


def build_recipe(name: str, built: dict[str, ColoredGraph] | None = None) -> ColoredGraph:
    """Construct the gem of a catalog recipe from scratch (census entries run a census)."""
    from . import constructions as C
    from .graph import sphere_gem

    built = {} if built is None else built
    if name in built:
        return built[name]

    def get(n: str) -> ColoredGraph:
        return build_recipe(n, built)

    Y = lambda o: C.handlebody_gem(4, 1, o)  # noqa: E731
    table = {
        "L(2,1)": _census_lens21,
        "S1xS2": _census_s1s2(True),
        "S1~xS2": _census_s1s2(False),
        "CP2": _census_cp2,
        "S1xS3": lambda: C.sphere_bundle_gem(4, True),
        "S1~xS3": lambda: C.sphere_bundle_gem(4, False),
        "#2(S1xS3)": lambda: C.interior_connected_sum(get("S1xS3"), get("S1xS3")),
        "#2(S1~xS3)": lambda: C.interior_connected_sum(get("S1~xS3"), get("S1~xS3")),
        "Y4_1": lambda: Y(True),
        "~Y4_1": lambda: Y(False),
        "Y4_2": lambda: C.handlebody_gem(4, 2, True),
        "~Y4_2": lambda: C.handlebody_gem(4, 2, False),
        "Y4_1#Y4_1": lambda: C.interior_connected_sum(Y(True), Y(True)),
        "Y4_1#~Y4_1": lambda: C.interior_connected_sum(Y(True), Y(False)),
        "~Y4_1#~Y4_1": lambda: C.interior_connected_sum(Y(False), Y(False)),
        "Y4_1#(S1xS3)": lambda: C.interior_connected_sum(Y(True), get("S1xS3")),
        "~Y4_1#(S1xS3)": lambda: C.interior_connected_sum(Y(False), get("S1xS3")),
        "L(2,1)xI": lambda: C.product_with_interval(get("L(2,1)")),
        "(S1xS2)xI": lambda: C.product_with_interval(get("S1xS2")),
        "(S1~xS2)xI": lambda: C.product_with_interval(get("S1~xS2")),
        "L(3,1)xI": lambda: C.product_with_interval(get("L(3,1)")),
    }
    for d in range(1, 6):
        table[f"S{d}"] = lambda d=d: sphere_gem(d)
    for p in (3, 4, 5):
        table[f"L({p},1)"] = lambda p=p: C.lens_gem(p)
    for c in (0, 2, 3, 4):
        table[f"Lambda_{c}"] = lambda c=c: C.disk_bundle_gem(c)
    if name not in table:
        raise CatalogError(f"no recipe for {name!r}")
    g = table[name]()
    built[name] = g
    return g


def write_catalog(directory: Path, names: list[str] | None = None, log=print) -> list[CatalogEntry]:
    """Build the recipes, compute their expected fragments and write gems plus manifest."""
    from .graph import write_gem

    directory.mkdir(parents=True, exist_ok=True)
    built: dict[str, ColoredGraph] = {}
    entries = []
    for r in RECIPES:
        if names is not None and r.name not in names:
            continue
        g = build_recipe(r.name, built)
        frag = observed_fragment(g)
        write_gem(g, directory / r.file, comment=f"{r.name}: {r.manifold} ({r.provenance})")
        entries.append(CatalogEntry(r.name, r.file, r.manifold, r.provenance, frag, r.notes, g))
        log(f"{r.name}: order {g.order}, G-degree {frag['gurau_degree']}, genus {frag['regular_genus']}")
    text = "# gemkit catalog: one block per entry, keys re-verified on every load\n\n"
    text += "\n".join(e.block() for e in entries)
    (directory / MANIFEST).write_text(text, encoding="utf-8")
    return entries
