"""Command-line front end: ``gemkit <command> ...``.

Exit codes: 0 on success, 1 when the computation reports a domain failure
(malformed gem, failed identity, unclassifiable input, ...), 2 on usage errors.
Every randomized command takes ``--seed`` (default 0) and ``--budget``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .algebra import PresentationError, first_homology, pi1_presentation
from .graph import ColoredGraph, GemError, canonical_form, read_gem, serialize_gem, sphere_gem
from .invariants import invariant_report
from .moves import DEFAULT_BUDGET, DipoleError, apply_move_line, manifold_check, recognize_sphere, reduce_with_log, simplify

USAGE, FAILURE, OK = 2, 1, 0


class CommandFailed(Exception):
    """Domain failure; the message is printed to stderr and the exit code is 1."""


def _out(text: str, path: str | None = None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> ColoredGraph:
    try:
        return read_gem(path)
    except OSError as e:
        raise CommandFailed(f"cannot read {path}: {e.strerror or e}") from e


def _add_random(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for randomized moves (default 0)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help=f"move budget (default {DEFAULT_BUDGET})")


# -- commands ------------------------------------------------------------------------


def cmd_validate(a) -> int:
    g = _load(a.gem)
    print(f"ok: d={g.dimension} order={g.order} bipartite={str(g.is_bipartite()).lower()} "
          f"connected={str(g.is_connected()).lower()}")
    return OK


def cmd_invariants(a) -> int:
    g = _load(a.gem)
    rep = invariant_report(g, check_manifold=not a.no_manifold, budget=a.budget, seed=a.seed)
    text = rep.to_text()
    if rep.manifold == "singular-manifold" and g.is_connected():
        mc = manifold_check(g, a.budget, a.seed)
        if mc.undetermined:
            text += "undetermined_residues: " + " ".join(f"{c}:{k}" for c, k in mc.undetermined) + "\n"
        try:
            text += f"H1: {first_homology(g, singular_colors=rep.singular_colors or ())}\n"
        except PresentationError as e:
            text += f"H1: ? ({e})\n"
    _out(text, a.output)
    return OK


def cmd_reduce(a) -> int:
    g = _load(a.gem)
    if a.replay:
        lines = [ln for ln in Path(a.replay).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
        for ln in lines:
            try:
                g = apply_move_line(g, ln)
            except (DipoleError, ValueError, IndexError) as e:
                raise CommandFailed(f"cannot replay {ln!r}: {e}") from e
        moves, complete = lines, True
    elif a.all_dipoles:
        g, moves = simplify(g, a.budget, a.seed)
        complete = True
    else:
        red = reduce_with_log(g, a.budget, a.seed)
        g, moves, complete = red.graph, red.moves, red.complete
    if a.log:
        Path(a.log).write_text("".join(m + "\n" for m in moves))
    _out(serialize_gem(g), a.output)
    print(f"moves: {len(moves)} order: {g.order} crystallization: {str(complete).lower()}", file=sys.stderr)
    if not complete:
        raise CommandFailed("no proper 1-dipole left but some color has several residues")
    return OK


def cmd_recognize(a) -> int:
    g = _load(a.gem)
    res = recognize_sphere(g, budget=a.budget, seed=a.seed)
    print(f"verdict: {res.verdict}")
    if res.reason:
        print(f"reason: {res.reason}")
    if a.certificate and res.certificate:
        Path(a.certificate).write_text("".join(m + "\n" for m in res.certificate))
    return OK


def _construct(a) -> ColoredGraph:
    from . import constructions as C

    k = a.kind
    ins = [_load(p) for p in (a.input or [])]

    def need(n):
        if len(ins) != n:
            raise CommandFailed(f"{k} needs {n} --input gem(s)")

    if k == "sphere":
        return sphere_gem(a.d)
    if k == "lens":
        return C.lens_gem(a.p, a.q)
    if k == "handlebody":
        return C.handlebody_gem(a.d, a.m, orientable=not a.twisted)
    if k == "sphere-bundle":
        return C.sphere_bundle_gem(a.d, orientable=not a.twisted)
    if k == "disk-bundle":
        return C.disk_bundle_gem(a.c)
    if k == "product-i":
        need(1)
        eps = tuple(int(x) for x in a.eps) if a.eps else None
        return C.product_with_interval(ins[0], eps)
    if k == "connected-sum":
        need(2)
        return C.connected_sum(ins[0], a.v1, ins[1], a.v2)
    if k == "interior-sum":
        need(2)
        return C.interior_connected_sum(ins[0], ins[1])
    if k == "boundary-sum":
        need(2)
        return C.boundary_connected_sum(ins[0], ins[1])
    if k == "handle":
        need(1)
        return C.handle_gem(ins[0], a.v1, a.v2)
    raise CommandFailed(f"unknown construction {k!r}")


def cmd_construct(a) -> int:
    from .constructions import ConstructionError

    try:
        g = _construct(a)
    except ConstructionError as e:
        raise CommandFailed(str(e)) from e
    _out(serialize_gem(g, comment=a.comment), a.output)
    return OK


def _census_name(e) -> str:
    if e.graph.dimension != 3 or e.quarantined or e.report.singular_colors != ():
        return "-"
    from .classify4 import identify_3manifold

    name, _, _ = identify_3manifold(e.graph)
    return name or "?"


def cmd_census(a) -> int:
    from .census import INDEX_HEADER, CensusBoundError, CensusQuery, census_index_row, enumerate_gems

    try:
        q = CensusQuery(
            a.d, a.max_order, min_order=a.min_order, bipartite_only=a.bipartite,
            manifolds_only=a.manifolds, closed_only=a.closed, crystallizations_only=a.crystallizations,
            mod_colors=a.mod_colors, force=a.force, jobs=a.jobs, budget=a.budget, seed=a.seed,
        )
    except CensusBoundError as e:
        raise CommandFailed(str(e)) from e
    except ValueError as e:
        print(f"gemkit census: {e}", file=sys.stderr)
        return USAGE
    outdir = Path(a.out) if a.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for e in enumerate_gems(q):
        row = census_index_row(e) + "\t" + _census_name(e) + "\t" + str(e.quarantined).lower()
        rows.append(row)
        if outdir:
            (outdir / f"{e.digest}.gem").write_text(serialize_gem(e.graph, comment=f"census d={a.d}"))
    if a.format == "tsv":
        text = INDEX_HEADER + "\tname\tquarantined\n" + "".join(r + "\n" for r in rows)
    else:
        text = "".join(" ".join(r.split("\t")) + "\n" for r in rows) + f"classes: {len(rows)}\n"
    if outdir:
        (outdir / "index.tsv").write_text(INDEX_HEADER + "\tname\tquarantined\n" + "".join(r + "\n" for r in rows))
    _out(text, a.output)
    return OK


def cmd_classify(a) -> int:
    from .classify4 import ClassificationError, classify, degree_gap_check

    g = _load(a.gem)
    rep = invariant_report(g, budget=a.budget, seed=a.seed)
    try:
        c = classify(g, report=rep, budget=a.budget, seed=a.seed)
    except ClassificationError as e:
        raise CommandFailed(str(e)) from e
    text = c.to_text()
    gap = degree_gap_check(rep)
    text += "gap_anomalies: " + (" | ".join(gap.anomalies) if gap.anomalies else "-") + "\n"
    _out(text, a.output)
    return OK


def cmd_verify(a) -> int:
    from .identities import verify_identities

    g = _load(a.gem)
    rep = verify_identities(g, budget=a.budget, seed=a.seed)
    _out(rep.to_text(verbose=a.verbose))
    return OK if rep.ok else FAILURE


def cmd_pi1(a) -> int:
    g = _load(a.gem)
    try:
        mc = manifold_check(g, a.budget, a.seed)
        if not mc.resolved:
            raise PresentationError(f"cannot certify the singular colors ({mc.status})")
        i = a.i if a.i is not None else next(c for c in g.colors if c not in mc.singular_colors)
        pres = pi1_presentation(g, i, a.j, a.variant, mc.singular_colors)
    except (PresentationError, StopIteration) as e:
        raise CommandFailed(str(e) or "every color is singular") from e
    _out(pres.to_text() + f"# H1 = {pres.abelianization()}\n", a.output)
    return OK


def cmd_catalog(a) -> int:
    from .catalog import CatalogError, catalog_dir, catalog_list, catalog_load

    directory = Path(a.dir) if a.dir else catalog_dir()
    try:
        if a.action == "list":
            names = catalog_list(directory)
            if a.format == "tsv":
                print("name\tmanifold\tdimension\torder\tprovenance")
            for n in names:
                e = catalog_load(n, directory, validate=False)
                cols = [n, e.manifold, str(e.graph.dimension), str(e.graph.order), e.provenance]
                print("\t".join(cols) if a.format == "tsv" else " ".join(cols))
        elif a.action == "show":
            e = catalog_load(a.name, directory, validate=False)
            sys.stdout.write(e.block())
        elif a.action == "export":
            e = catalog_load(a.name, directory)
            _out(serialize_gem(e.graph, comment=e.manifold), a.output)
        elif a.action == "validate":
            names = a.names or catalog_list(directory)
            bad = 0
            for n in names:
                try:
                    catalog_load(n, directory)
                    print(f"ok {n}")
                except CatalogError as e:
                    bad += 1
                    print(f"FAIL {n}: {e}")
            if bad:
                raise CommandFailed(f"{bad} catalog entr{'y' if bad == 1 else 'ies'} failed validation")
        elif a.action == "digest":
            e = catalog_load(a.name, directory, validate=False)
            print(canonical_form(e.graph).digest())
    except CatalogError as e:
        raise CommandFailed(str(e)) from e
    return OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gemkit", description="Gems, regular genus and G-degree of PL manifolds.")
    p.add_argument("--version", action="version", version=f"gemkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse a gem file and check its matchings")
    s.add_argument("gem")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariants", help="genus per cyclic permutation, regular genus, G-degree, chi, H1")
    s.add_argument("gem")
    s.add_argument("--no-manifold", action="store_true", help="skip the singular-manifold check")
    s.add_argument("-o", "--output")
    _add_random(s)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("reduce", help="eliminate proper dipoles (or replay a move log)")
    s.add_argument("gem")
    s.add_argument("--all-dipoles", action="store_true", help="eliminate proper dipoles of every size")
    s.add_argument("--log", help="write the move log here")
    s.add_argument("--replay", help="apply the moves of this log instead of searching")
    s.add_argument("-o", "--output")
    _add_random(s)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("recognize", help="bounded d-sphere recognition (Sphere/NotSphere/Unknown)")
    s.add_argument("gem")
    s.add_argument("--certificate", help="write the move certificate here")
    _add_random(s)
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("construct", help="build a gem")
    s.add_argument("kind", choices=[
        "sphere", "lens", "handlebody", "sphere-bundle", "disk-bundle", "product-i",
        "connected-sum", "interior-sum", "boundary-sum", "handle",
    ])
    s.add_argument("--d", type=int, default=4)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--m", type=int, default=1, help="number of handles")
    s.add_argument("--c", type=int, default=0, help="Euler class of the disk bundle")
    s.add_argument("--twisted", action="store_true", help="non-orientable variant")
    s.add_argument("--eps", help="cyclic permutation as a digit string, e.g. 0123")
    s.add_argument("--v1", type=int, default=0)
    s.add_argument("--v2", type=int, default=0)
    s.add_argument("--input", action="append", help="input gem (repeat for binary constructions)")
    s.add_argument("--comment")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("census", help="isomorph-free enumeration of small gems")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--max-order", type=int, required=True)
    s.add_argument("--min-order", type=int, default=2)
    s.add_argument("--manifolds", action="store_true", help="keep singular manifolds only")
    s.add_argument("--closed", action="store_true", help="keep closed manifolds only")
    s.add_argument("--crystallizations", action="store_true")
    s.add_argument("--bipartite", action="store_true")
    s.add_argument("--mod-colors", action="store_true", help="identify graphs up to color permutation")
    s.add_argument("--force", action="store_true", help="allow orders above the default bound")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=["text", "tsv"], default="text")
    s.add_argument("--out", help="directory for one gem file per class plus index.tsv")
    s.add_argument("-o", "--output")
    _add_random(s)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("classify", help="apply the dimension-4 genus/G-degree classification rules")
    s.add_argument("gem")
    s.add_argument("-o", "--output")
    _add_random(s)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify-identities", help="check the combinatorial genus identities on a gem")
    s.add_argument("gem")
    s.add_argument("-v", "--verbose", action="store_true")
    _add_random(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("pi1", help="presentation of the fundamental group")
    s.add_argument("gem")
    s.add_argument("--variant", choices=["a", "a'", "b", "b'"], default="b")
    s.add_argument("--i", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("-o", "--output")
    _add_random(s)
    s.set_defaults(func=cmd_pi1)

    s = sub.add_parser("catalog", help="list, show, export or validate catalog entries")
    s.add_argument("action", choices=["list", "show", "export", "validate", "digest"])
    s.add_argument("name", nargs="?")
    s.add_argument("names", nargs="*")
    s.add_argument("--dir", help="catalog directory (default: $GEMKIT_CATALOG or the bundled one)")
    s.add_argument("--format", choices=["text", "tsv"], default="text")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else OK
    if a.command == "catalog":
        if a.action in ("show", "export", "digest") and not a.name:
            print(f"gemkit catalog: {a.action} needs a name", file=sys.stderr)
            return USAGE
        if a.action == "validate" and a.name:
            a.names = [a.name] + list(a.names)
    try:
        return a.func(a)
    except (CommandFailed, GemError) as e:
        print(f"gemkit {a.command}: {e}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
