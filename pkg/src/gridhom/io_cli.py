"""Grid file format, structured reports, and the command-line interface.

Grid file grammar (UTF-8, one field per line, '#' comments allowed):

    n: 5
    O: (1,5),(2,1),(3,2),(4,3),(5,4)
    X: (1,2),(2,3),(3,4),(4,5),(5,1)
    XX: (3,3)                # optional (singular grids)
    symmetry: swap           # optional: swap | preserve
    name: trefoil_31plus     # optional metadata
    lambda: 1                # optional metadata
    quotient: unknot_2x2.grid  # optional metadata (path)

Structured reports follow the versioned schema "gridhom-report/1": rank
tables serialize as sorted [M, doubled-A, rank] triples and polynomials as
sorted [u-exp, doubled-t-exp, coeff] triples.  Human-readable tables are
rendered from the structured report.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import click

from . import equivariant_ss, f2_algebra, skein_lab, symmetry
from .errors import GridHomError, MalformedGrid
from .f2_algebra import LaurentPoly2, TPoly, poincare, strip_V
from .grid_model import GridDiagram, grid_complex, linking_number, validate

SCHEMA = "gridhom-report/1"

_SYM_NAMES = {"swap": "SwapsOX", "preserve": "PreservesOX"}


@dataclass
class GridFile:
    n: int
    O: list[tuple[int, int]]
    X: list[tuple[int, int]]
    XX: Optional[tuple[int, int]] = None
    symmetry: Optional[str] = None  # "swap" | "preserve"
    name: Optional[str] = None
    lam: Optional[int] = None
    quotient: Optional[str] = None
    extra: dict = field(default_factory=dict)


_CELL_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def _parse_cells(text: str) -> list[tuple[int, int]]:
    cells = [(int(a), int(b)) for a, b in _CELL_RE.findall(text)]
    stripped = _CELL_RE.sub("", text).replace(",", "").strip()
    if stripped:
        raise MalformedGrid(f"unparsable cell list fragment: {stripped!r}")
    return cells


def parse_grid_text(text: str) -> GridFile:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise MalformedGrid(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key in fields:
            raise MalformedGrid(f"line {lineno}: duplicate field {key!r}")
        fields[key] = value.strip()
    if "n" not in fields or "o" not in fields or "x" not in fields:
        raise MalformedGrid("grid file needs at least the fields n, O, X")
    gf = GridFile(
        n=int(fields.pop("n")),
        O=_parse_cells(fields.pop("o")),
        X=_parse_cells(fields.pop("x")),
    )
    if "xx" in fields:
        cells = _parse_cells(fields.pop("xx"))
        if len(cells) != 1:
            raise MalformedGrid("XX must be a single cell")
        gf.XX = cells[0]
    if "symmetry" in fields:
        sym = fields.pop("symmetry")
        if sym not in _SYM_NAMES:
            raise MalformedGrid(f"symmetry must be swap or preserve, got {sym!r}")
        gf.symmetry = sym
    if "name" in fields:
        gf.name = fields.pop("name")
    if "lambda" in fields:
        gf.lam = int(fields.pop("lambda"))
    if "quotient" in fields:
        gf.quotient = fields.pop("quotient")
    gf.extra = fields
    return gf


def write_grid_text(gf: GridFile) -> str:
    def cells(cs):
        return ",".join(f"({i},{j})" for i, j in sorted(cs))

    lines = [f"n: {gf.n}", f"O: {cells(gf.O)}", f"X: {cells(gf.X)}"]
    if gf.XX is not None:
        lines.append(f"XX: ({gf.XX[0]},{gf.XX[1]})")
    if gf.symmetry is not None:
        lines.append(f"symmetry: {gf.symmetry}")
    if gf.name is not None:
        lines.append(f"name: {gf.name}")
    if gf.lam is not None:
        lines.append(f"lambda: {gf.lam}")
    if gf.quotient is not None:
        lines.append(f"quotient: {gf.quotient}")
    return "\n".join(lines) + "\n"


def read_grid_file(path: str) -> GridFile:
    with open(path, encoding="utf-8") as fh:
        return parse_grid_text(fh.read())


def write_grid_file(gf: GridFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_grid_text(gf))


def diagram_of(gf: GridFile) -> GridDiagram:
    """Validate the markings; when the file pins a symmetry, detection must
    confirm it or fail loudly."""
    g = validate(gf.n, gf.O, gf.X, gf.XX)
    if gf.symmetry is not None:
        symmetry.detect(g, expected=_SYM_NAMES[gf.symmetry])
    return g


def corpus_path(name: str) -> str:
    """Path of a bundled corpus grid file (name without the .grid suffix)."""
    return str(resources.files("gridhom").joinpath("corpus", f"{name}.grid"))


def load_corpus(name: str) -> GridDiagram:
    return diagram_of(read_grid_file(corpus_path(name)))


# --- report serialization ------------------------------------------------------

def _half(a2: int) -> str:
    return str(a2 // 2) if a2 % 2 == 0 else f"{a2}/2"


def table_triples(table: dict) -> list[list[int]]:
    return [[m, a2, k] for (m, a2), k in sorted(table.items()) if k]


def poly2_triples(p: LaurentPoly2) -> list[list[int]]:
    return [[m, a2, v] for (m, a2), v in sorted(p.c.items())]


def tpoly_pairs(p: TPoly) -> list[list[int]]:
    return [[a2, v] for a2, v in sorted(p.c.items())]


def _fmt_table(triples) -> list[str]:
    lines = ["  M      A   rank", "  ---------------"]
    for m, a2, k in triples:
        lines.append(f"  {m:<5} {_half(a2):>4}  {k}")
    if not triples:
        lines.append("  (empty)")
    return lines


def _fmt_tpoly(pairs) -> str:
    if not pairs:
        return "0"
    terms = []
    for a2, v in sorted(pairs, reverse=True):
        if a2 == 0:
            terms.append(f"{v}")
        else:
            coef = "" if v == 1 else ("-" if v == -1 else str(v) + "*")
            terms.append(f"{coef}t^{_half(a2)}")
    return " + ".join(terms).replace("+ -", "- ")


def render_human(report: dict) -> str:
    cmd = report["command"]
    out = [f"# {cmd}"]
    if "grid" in report:
        out.append(f"grid: n={report['grid']['n']}")
    if cmd == "homology":
        out.append(f"total rank: {report['total_rank']}")
        out.append("bigraded ranks:")
        out += _fmt_table(report["table"])
        out.append(f"V-stripped (k={report['v_power']}):")
        out += _fmt_table(report["stripped"])
    elif cmd == "alexpoly":
        out.append(f"Delta(t) = {_fmt_tpoly(report['delta'])}")
    elif cmd == "symmetry":
        for s in report["involutions"]:
            out.append(f"involution: c={s['c']} behavior={s['behavior']}")
        for law in report["laws"]:
            mark = "pass" if law["passed"] else "FAIL"
            out.append(f"  [{mark}] {law['name']}")
            if not law["passed"]:
                out.append(f"         counterexample: {law['counterexample']}")
        for k, v in report["measured"].items():
            out.append(f"  measured {k}: {v}")
    elif cmd == "sstau":
        out.append(f"s_tau = {report['s_tau']}")
        m, a2 = report["witness_grading"]
        out.append(f"witness grading: (M, A) = ({m}, {_half(a2)})")
        out.append(f"collapse page: {report['page_of_collapse']}")
    elif cmd == "spectral":
        for page in report["pages"]:
            out.append(f"page E_{page['r']} (rank {page['total_rank']}):")
            out += _fmt_table(page["blocks"])
    elif cmd == "skein":
        for chk in report["checks"]:
            mark = "pass" if chk["passed"] else "FAIL"
            out.append(f"  [{mark}] {chk['name']}")
        out.append(f"triangle verified: {report['passed']}")
    elif cmd == "thm2":
        out.append(f"lambda = {report['lambda']}")
        out.append("  A(sing)  rank   A(quot)  rank")
        for a2s, k, a2q, kq in report["rows"]:
            qa = _half(a2q) if a2q is not None else "-"
            out.append(f"  {_half(a2s):>7}  {k:<5} {qa:>7}  {kq}")
        out.append(f"localization comparison: {'pass' if report['passed'] else 'FAIL'}")
    return "\n".join(out) + "\n"


def emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2))
    else:
        click.echo(render_human(report), nl=False)


# --- CLI -----------------------------------------------------------------------

@click.group()
@click.option("--format", "fmt", type=click.Choice(["table", "json"]),
              default="table", show_default=True, help="Report format.")
@click.option("--threads", type=int, default=None,
              help="Worker-pool cap for boundary construction (default: cores).")
@click.pass_context
def cli(ctx, fmt, threads):
    """Grid homology, equivariant spectral sequences, and skein triangles."""
    ctx.ensure_object(dict)
    ctx.obj["fmt"] = fmt
    ctx.obj["threads"] = max(1, threads if threads else (os.cpu_count() or 1))


def _load(path: str) -> tuple[GridFile, GridDiagram]:
    try:
        gf = read_grid_file(path)
        return gf, diagram_of(gf)
    except GridHomError as e:
        raise click.ClickException(str(e))


def _base(cmd: str, g: GridDiagram) -> dict:
    return {
        "schema": SCHEMA,
        "command": cmd,
        "grid": {
            "n": g.n,
            "O": sorted(g.O),
            "X": sorted(g.X),
            "XX": list(g.XX) if g.XX else None,
            "components": g.components,
        },
    }


def _maybe_plots(ctx, tables: dict[str, dict], plot_dir, stem, report):
    if plot_dir:
        from .plots import plot_dir_tables

        report["plots"] = plot_dir_tables(tables, plot_dir, stem)


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.option("--plot-dir", type=click.Path(), default=None,
              help="Write rank-table figures into this directory.")
@click.pass_context
def homology(ctx, grid, plot_dir):
    """Bigraded rank table (full and V-stripped) and Poincare polynomial."""
    gf, g = _load(grid)
    c = grid_complex(g, threads=ctx.obj["threads"])
    h = c.homology()
    p = poincare(h.table)
    k = g.n - 1 if g.singular else g.n - g.components
    try:
        stripped = strip_V(p, k)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("homology", g)
    report.update({
        "total_rank": h.total_rank,
        "table": table_triples(h.table),
        "poincare": poly2_triples(p),
        "v_power": k,
        "stripped": poly2_triples(stripped),
    })
    _maybe_plots(ctx, {"homology": h.table,
                       "homology_stripped": dict(stripped.c)},
                 plot_dir, os.path.splitext(os.path.basename(grid))[0], report)
    emit(report, ctx.obj["fmt"])


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.pass_context
def alexpoly(ctx, grid):
    """Alexander polynomial."""
    gf, g = _load(grid)
    try:
        delta = f2_algebra.alexander_polynomial(g)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("alexpoly", g)
    report["delta"] = tpoly_pairs(delta)
    emit(report, ctx.obj["fmt"])


@cli.command("symmetry")
@click.argument("grid", type=click.Path(exists=True))
@click.pass_context
def symmetry_cmd(ctx, grid):
    """Detected involution(s) and the equivariance report."""
    gf, g = _load(grid)
    try:
        specs = symmetry.detect(
            g, expected=_SYM_NAMES[gf.symmetry] if gf.symmetry else None)
    except GridHomError as e:
        raise click.ClickException(str(e))
    rep = symmetry.verify_equivariance(g, specs[0])
    report = _base("symmetry", g)
    report["involutions"] = [{"c": s.c, "behavior": s.behavior} for s in specs]
    report["laws"] = [
        {"name": l.name, "passed": l.passed,
         "counterexample": repr(l.counterexample) if l.counterexample else None}
        for l in rep.laws
    ]
    report["measured"] = {k: repr(v) for k, v in rep.measured.items()}
    emit(report, ctx.obj["fmt"])
    if not rep.passed:
        ctx.exit(1)


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.option("--max-r", type=int, default=None, help="Page cap.")
@click.pass_context
def sstau(ctx, grid, max_r):
    """The s_tau invariant of a symmetric knot grid."""
    gf, g = _load(grid)
    try:
        res = equivariant_ss.s_tau(g, max_r=max_r)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("sstau", g)
    report.update({
        "s_tau": res.value,
        "witness_grading": list(res.witness_grading),
        "page_of_collapse": res.page_of_collapse,
    })
    emit(report, ctx.obj["fmt"])


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.option("--max-r", type=int, default=None, help="Page cap.")
@click.option("--plot-dir", type=click.Path(), default=None,
              help="Write per-page rank-table figures into this directory.")
@click.pass_context
def spectral(ctx, grid, max_r, plot_dir):
    """All pages of the equivariant spectral sequence."""
    gf, g = _load(grid)
    try:
        expected = _SYM_NAMES[gf.symmetry] if gf.symmetry else None
        spec = symmetry.detect(g, expected=expected)[0]
        symmetry.require_chain_involution(g, spec)
        c = grid_complex(g, threads=ctx.obj["threads"])
        tau = symmetry.tau_columns(g, spec, c.gens, c.index)
        pgs = equivariant_ss.pages(c, tau, max_r=max_r)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("spectral", g)
    report["involution"] = {"c": spec.c, "behavior": spec.behavior}
    report["pages"] = [
        {"r": p.r, "total_rank": p.total_rank, "blocks": table_triples(p.blocks),
         "d_rank": p.d_rank}
        for p in pgs
    ]
    _maybe_plots(ctx, {f"E_{p.r}": p.blocks for p in pgs}, plot_dir,
                 os.path.splitext(os.path.basename(grid))[0] + "_spectral", report)
    emit(report, ctx.obj["fmt"])


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.pass_context
def skein(ctx, grid):
    """Singularize, resolve, and verify the skein exact triangle."""
    gf, g = _load(grid)
    try:
        triple = skein_lab.SkeinTriple.from_symmetric_knot(g)
        rep = skein_lab.verify_triangle(triple)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("skein", g)
    report["passed"] = rep.passed
    report["checks"] = [
        {"name": c.name, "passed": c.passed,
         "details": repr(c.details) if not c.passed and c.details else None}
        for c in rep.checks
    ]
    report["tables"] = {name: table_triples(t) for name, t in rep.tables.items()}
    emit(report, ctx.obj["fmt"])
    if not rep.passed:
        ctx.exit(1)


@cli.command()
@click.argument("grid", type=click.Path(exists=True))
@click.option("--quotient", type=click.Path(exists=True), required=True,
              help="Grid file of the quotient knot.")
@click.option("--lambda", "lam", type=int, required=True,
              help="Axis linking number.")
@click.pass_context
def thm2(ctx, grid, quotient, lam):
    """Localization comparison of a symmetric singular grid vs its quotient."""
    gf, g = _load(grid)
    qf, gq = _load(quotient)
    try:
        rep = equivariant_ss.theorem2_report(g, gq, lam)
    except GridHomError as e:
        raise click.ClickException(str(e))
    report = _base("thm2", g)
    report["lambda"] = lam
    report["passed"] = rep.passed
    report["rows"] = [[r.a2_singular, r.survivor_rank, r.a2_quotient,
                       r.quotient_rank] for r in rep.rows]
    report["pages"] = [table_triples(t) for t in rep.pages_tables]
    emit(report, ctx.obj["fmt"])


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
