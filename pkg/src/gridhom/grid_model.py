"""Grid diagrams, grid states, bigradings, and the rectangle-count boundary.

A grid diagram lives on an n x n torus.  Cells are 1-based pairs (col, row);
lattice points are 0-based pairs (a, b) with a, b in 0..n-1.  Cell (i, j)
occupies the square [i-1, i] x [j-1, j], so its northwest corner is the
lattice point (i-1, j mod n).

A grid state is a permutation sigma encoded as a tuple: it places one point
(a, sigma[a]) on each vertical line a.  Alexander gradings are half-integers
and are stored doubled (as integers) throughout the package.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import (
    GridTooLarge,
    MalformedGrid,
    NotTwoComponents,
    OverlappingMarkings,
    SizeMismatch,
)

Cell = tuple[int, int]
State = tuple[int, ...]

MAX_GRID_SIZE = 10


@dataclass(frozen=True)
class GridDiagram:
    """A validated (possibly singular) grid diagram.

    O and X are frozensets of cells.  XX, when present, is the doubled
    X-type marking of a singular knot; its row and column each carry two
    O markings instead of one.
    """

    n: int
    O: frozenset[Cell]
    X: frozenset[Cell]
    XX: Optional[Cell] = None
    components: int = field(default=1, compare=False)

    @property
    def singular(self) -> bool:
        return self.XX is not None

    @property
    def x_type(self) -> frozenset[Cell]:
        """X markings with XX included (always one per row and column)."""
        if self.XX is None:
            return self.X
        return self.X | {self.XX}

    def all_markings(self) -> frozenset[Cell]:
        return self.O | self.x_type


def validate(
    n: int,
    O,
    X,
    XX: Optional[Cell] = None,
    max_n: int = MAX_GRID_SIZE,
) -> GridDiagram:
    """Check the marking rules and return a GridDiagram with its component
    count computed by tracing strands (X to O along columns, O to X along
    rows; a doubled marking is traversed once vertically and once
    horizontally)."""
    if n < 1:
        raise MalformedGrid(f"grid size must be positive, got {n}")
    if n > max_n:
        raise GridTooLarge(
            f"grid size {n} exceeds the cap of {max_n}; state count {n}! is not tractable"
        )
    O = frozenset(tuple(c) for c in O)
    X = frozenset(tuple(c) for c in X)
    XX = tuple(XX) if XX is not None else None
    for cell in itertools.chain(O, X, [XX] if XX else []):
        i, j = cell
        if not (1 <= i <= n and 1 <= j <= n):
            raise MalformedGrid(f"cell {cell} outside the {n}x{n} grid")
    if O & X or (XX is not None and XX in O | X):
        raise OverlappingMarkings(f"markings overlap: {sorted(O & X) or [XX]}")

    x_type = X | ({XX} if XX else set())
    for axis in (0, 1):
        for line in range(1, n + 1):
            xs = sum(1 for c in x_type if c[axis] == line)
            os = sum(1 for c in O if c[axis] == line)
            if xs != 1:
                raise MalformedGrid(
                    f"{'column' if axis == 0 else 'row'} {line} has {xs} X-type markings"
                )
            want_os = 2 if (XX is not None and XX[axis] == line) else 1
            if os != want_os:
                raise MalformedGrid(
                    f"{'column' if axis == 0 else 'row'} {line} has {os} O markings, expected {want_os}"
                )
    if XX is None and len(O) != n:
        raise MalformedGrid(f"expected {n} O markings, got {len(O)}")
    if XX is not None and len(O) != n + 1:
        raise MalformedGrid(f"expected {n + 1} O markings, got {len(O)}")

    ell = _trace_components(n, O, x_type, XX)
    return GridDiagram(n=n, O=O, X=X, XX=XX, components=ell)


def _trace_components(n, O, x_type, XX) -> int:
    # Edges: each X-type marking joins the O markings of its column; each O
    # joins the X-type marking of its row.  The doubled marking contributes a
    # vertical pass (between the two O's of its column, through the marking)
    # and a horizontal pass, so it is split into two trace nodes.
    col_os = {}
    for (i, j) in O:
        col_os.setdefault(i, []).append((i, j))
    row_x = {j: (i, j) for (i, j) in x_type}

    adj: dict = {}

    def link(u, v):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    for (i, j) in x_type:
        node = ("xv", i, j) if (i, j) == XX else ("x", i, j)
        for o in col_os[i]:
            link(node, ("o", *o))
    for (i, j) in O:
        x = row_x[j]
        node = ("xh", *x) if x == XX else ("x", *x)
        link(("o", i, j), node)

    seen = set()
    comps = 0
    for start in adj:
        if start in seen:
            continue
        comps += 1
        stack = [start]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
    return comps


def states(g: GridDiagram) -> Iterator[State]:
    """All grid states in lexicographic order."""
    return itertools.permutations(range(g.n))


def cell_nw(cell: Cell, n: int) -> tuple[int, int]:
    """Northwest corner lattice point of a 1-based cell."""
    i, j = cell
    return ((i - 1) % n, j % n)


def nw_states(g: GridDiagram) -> tuple[Optional[State], Optional[State]]:
    """(x_NWO, x_NWX): the states marking the NW corner of every O (resp.
    X-type) cell.  x_NWO is undefined for singular grids (n+1 O markings)."""
    nwo = None
    if not g.singular:
        pts = dict(cell_nw(c, g.n) for c in g.O)
        nwo = tuple(pts[a] for a in range(g.n))
    pts = dict(cell_nw(c, g.n) for c in g.x_type)
    nwx = tuple(pts[a] for a in range(g.n))
    return nwo, nwx


# --- rectangles -------------------------------------------------------------

def rectangles(x: State, y: State, n: int):
    """The two rectangles on the torus connecting states x, y that differ by
    a transposition (BL/TR corners on x, BR/TL corners on y).  Each rectangle
    is (a, b, w, h): SW corner lattice point and positive width/height."""
    if len(x) != len(y) or len(x) != n:
        raise SizeMismatch("states must both have length n")
    diff = [a for a in range(n) if x[a] != y[a]]
    if len(diff) != 2:
        return []
    a1, a2 = diff
    if y[a1] != x[a2] or y[a2] != x[a1]:
        return []
    out = []
    for (s, t) in ((a1, a2), (a2, a1)):
        w = (t - s) % n
        h = (x[t] - x[s]) % n
        out.append((s, x[s], w, h))
    return out


def _marks_in_rect(rect, marks, n) -> int:
    a, b, w, h = rect
    count = 0
    for (i, j) in marks:
        if ((i - 1) - a) % n < w and ((j - 1) - b) % n < h:
            count += 1
    return count


def _state_points_inside(rect, x: State, n: int) -> int:
    a, b, w, h = rect
    count = 0
    for p in range(n):
        dp = (p - a) % n
        dq = (x[p] - b) % n
        if 0 < dp < w and 0 < dq < h:
            count += 1
    return count


def rel_grading(x: State, y: State, marks, n: int) -> int:
    """M_marks(x) - M_marks(y) by factoring x into y through transpositions
    and summing 1 - 2|r . marks| + 2|x . Int(r)| over one rectangle per step.

    The result is independent of the factorization and of which of the two
    rectangles realizes each transposition; the canonical factorization fixes
    the lowest mismatched column first.
    """
    if len(x) != len(y) or len(x) != n:
        raise SizeMismatch("states must both have length n")
    marks = list(marks)
    total = 0
    cur = list(x)
    target = list(y)
    while cur != target:
        a1 = next(a for a in range(n) if cur[a] != target[a])
        a2 = next(a for a in range(a1 + 1, n) if cur[a] == target[a1])
        nxt = list(cur)
        nxt[a1], nxt[a2] = nxt[a2], nxt[a1]
        rect = rectangles(tuple(cur), tuple(nxt), n)[0]
        total += (
            1
            - 2 * _marks_in_rect(rect, marks, n)
            + 2 * _state_points_inside(rect, tuple(cur), n)
        )
        cur = nxt
    return total


# --- absolute gradings ------------------------------------------------------

def _pairs_lt(P, Q) -> int:
    return sum(1 for (a, b) in P for (c, d) in Q if a < c and b < d)


def _closed_maslov(points, mark_cells) -> int:
    # Planar inversion-count formula; doubled coordinates keep cell centers
    # integral.  Agrees with rel_grading propagation (tested).
    P = [(2 * a, 2 * b) for (a, b) in points]
    M = [(2 * i - 1, 2 * j - 1) for (i, j) in mark_cells]
    return (
        _pairs_lt(P, P)
        - _pairs_lt(P, M)
        - _pairs_lt(M, P)
        + _pairs_lt(M, M)
        + 1
    )


@functools.lru_cache(maxsize=8)
def _absolute_tables(g: GridDiagram) -> dict[State, tuple[int, int]]:
    """state -> (M_O, M_X), normalized so both vanish on their NW states."""
    n = g.n
    o_cells = sorted(g.O)
    x_cells = sorted(g.x_type)
    nwo, nwx = nw_states(g)
    base_x = _closed_maslov([(a, nwx[a]) for a in range(n)], x_cells)
    if nwo is not None:
        base_o = _closed_maslov([(a, nwo[a]) for a in range(n)], o_cells)
    out = {}
    for x in states(g):
        pts = [(a, x[a]) for a in range(n)]
        mx = _closed_maslov(pts, x_cells) - base_x
        mo = _closed_maslov(pts, o_cells) - base_o if nwo is not None else None
        out[x] = (mo, mx)
    return out


@functools.lru_cache(maxsize=8)
def bigradings(g: GridDiagram) -> dict[State, tuple[int, int]]:
    """state -> (M, 2A) with M the Maslov grading and the Alexander grading
    doubled.  Non-singular: M = M_O normalized at x_NWO and
    A = (M_O - M_X)/2 - (n - ell)/2.  Singular: gradings are transported
    through the embedding x -> x u c into the quotient complex (states
    through the center point c) of the 0-resolution; the Alexander grading
    picks up +1/2 and the Maslov grading is unchanged.
    """
    if not g.singular:
        table = _absolute_tables(g)
        shift = g.n - g.components
        return {
            x: (mo, mo - mx - shift) for x, (mo, mx) in table.items()
        }
    from .skein_lab import resolve  # deferred: skein_lab builds on this module

    g0, _ = resolve(g)
    zc, zr = g.XX
    table0 = bigradings(g0)
    out = {}
    for x in states(g):
        m, a2 = table0[embed_through_center(x, zc, zr)]
        out[x] = (m, a2 + 1)
    return out


def embed_through_center(x: State, zc: int, zr: int) -> State:
    """Insert the center point c = (zc, zr) (0-based lattice) into an
    (n-1)-line state, shifting lines at or beyond c outward."""
    pts = {}
    for a, b in enumerate(x):
        pts[a if a < zc else a + 1] = b if b < zr else b + 1
    pts[zc] = zr
    return tuple(pts[a] for a in range(len(x) + 1))


def grading(g: GridDiagram, x: State) -> tuple[Optional[int], int, int, int]:
    """(M_O, M_X, M, 2A) of one state.  On singular grids M_O is None (no
    NWO state) while M is still defined through the embedding."""
    mo, mx = _absolute_tables(g)[x]
    m, a2 = bigradings(g)[x]
    return (mo, mx, m, a2)


# --- boundary ---------------------------------------------------------------

def boundary(g: GridDiagram, x: State) -> list[State]:
    """Tilde-flavor boundary: states y reached by an odd number of empty
    rectangles (no markings, no state points inside)."""
    n = g.n
    marks = sorted(g.all_markings())
    out = []
    for a1 in range(n):
        for a2 in range(a1 + 1, n):
            y = list(x)
            y[a1], y[a2] = y[a2], y[a1]
            y = tuple(y)
            count = 0
            for rect in rectangles(x, y, n):
                if _state_points_inside(rect, x, n):
                    continue
                if _marks_in_rect(rect, marks, n):
                    continue
                count += 1
            if count % 2:
                out.append(y)
    return out


def grid_complex(g: GridDiagram, threads: int = 1) -> "BigradedComplex":
    """The tilde-flavor chain complex of the grid, generators in
    lexicographic state order.  With threads > 1 the boundary columns are
    computed by a worker pool (output order is unchanged)."""
    from .f2_algebra import BigradedComplex

    gens = list(states(g))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            bnds = list(ex.map(lambda x: boundary(g, x), gens))
        table = dict(zip(gens, bnds))
        return BigradedComplex.from_boundary(gens, bigradings(g), table.__getitem__)
    return BigradedComplex.from_boundary(
        gens, bigradings(g), lambda x: boundary(g, x)
    )


# --- linking number ---------------------------------------------------------

def linking_number(g: GridDiagram) -> int:
    """Linking number of a two-component grid, as half the signed count of
    inter-component crossings of the planar realization (vertical strands
    cross over horizontal ones; columns run X to O, rows run O to X)."""
    if g.singular or g.components != 2:
        raise NotTwoComponents(
            f"linking number needs a non-singular 2-component grid, got {g.components} component(s)"
        )
    col_o = {i: j for (i, j) in g.O}
    col_x = {i: j for (i, j) in g.X}
    row_o = {j: i for (i, j) in g.O}
    row_x = {j: i for (i, j) in g.X}

    comp_of = {}
    comp = 0
    for start in sorted(g.X):
        if start in comp_of:
            continue
        comp += 1
        cur = start
        while cur not in comp_of:
            comp_of[cur] = comp
            i = cur[0]
            j2 = col_o[i]
            cur = (row_x[j2], j2)

    signed = 0
    for i in range(1, g.n + 1):
        jx, jo = col_x[i], col_o[i]
        v_comp = comp_of[(i, jx)]
        v_dir = 1 if jo > jx else -1
        lo, hi = min(jx, jo), max(jx, jo)
        for j in range(lo + 1, hi):
            # horizontal strand of row j passes under column i iff i lies
            # strictly between its endpoints
            io, ix = row_o[j], row_x[j]
            if comp_of[(ix, j)] == v_comp:
                continue
            if min(io, ix) < i < max(io, ix):
                h_dir = 1 if ix > io else -1
                signed -= v_dir * h_dir
    if signed % 2:
        raise NotTwoComponents("signed crossing count must be even")
    return signed // 2
