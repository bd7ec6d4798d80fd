"""Structural invariants over randomized grids (plus the corpus)."""

import itertools
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from gridhom import detect, grid_complex, poincare, states, strip_V, validate
from gridhom.errors import NotSymmetric
from gridhom.f2_algebra import mat_apply
from gridhom.grid_model import _absolute_tables, bigradings, boundary, rel_grading
from gridhom.symmetry import verify_equivariance


def grid_from(n, perm_o, perm_x):
    O = {(i + 1, perm_o[i] + 1) for i in range(n)}
    X = {(i + 1, perm_x[i] + 1) for i in range(n)}
    assume(not O & X)
    return validate(n, O, X)


@st.composite
def random_grids(draw, max_n=6):
    n = draw(st.integers(min_value=2, max_value=max_n))
    perm_o = draw(st.permutations(range(n)))
    perm_x = draw(st.permutations(range(n)))
    return grid_from(n, perm_o, perm_x)


@st.composite
def symmetric_grids(draw, max_n=6):
    """Grids whose X set is a rotation of the O set (swap-symmetric)."""
    n = draw(st.integers(min_value=2, max_value=max_n))
    perm_o = draw(st.permutations(range(n)))
    c = draw(st.integers(min_value=0, max_value=n - 1))
    O = {(i + 1, perm_o[i] + 1) for i in range(n)}
    X = {(((c - i) % n) + 1, ((c - j) % n) + 1) for (i, j) in O}
    assume(not O & X)
    return validate(n, O, X)


@settings(max_examples=60, deadline=None)
@given(random_grids())
def test_complex_is_a_bigraded_complex(g):
    # d^2 = 0 and every boundary term drops (M, A) by exactly (1, 0)
    grid_complex(g).check()


@settings(max_examples=40, deadline=None)
@given(random_grids(max_n=5), st.randoms(use_true_random=False))
def test_rel_grading_is_a_cocycle(g, rng):
    sts = list(states(g))
    x, y, z = (rng.choice(sts) for _ in range(3))
    for marks in (g.O, g.x_type):
        assert (rel_grading(x, y, marks, g.n) + rel_grading(y, z, marks, g.n)
                == rel_grading(x, z, marks, g.n))


@settings(max_examples=40, deadline=None)
@given(random_grids(max_n=5), st.randoms(use_true_random=False))
def test_closed_form_gradings_match_propagation(g, rng):
    table = _absolute_tables(g)
    sts = list(states(g))
    x, y = rng.choice(sts), rng.choice(sts)
    assert table[x][0] - table[y][0] == rel_grading(x, y, g.O, g.n)
    assert table[x][1] - table[y][1] == rel_grading(x, y, g.x_type, g.n)


@settings(max_examples=60, deadline=None)
@given(symmetric_grids())
def test_involution_laws(g):
    try:
        specs = detect(g, expected="SwapsOX")
    except NotSymmetric:
        assume(False)
    spec = specs[0]
    big = bigradings(g)
    sts = list(states(g))
    for x in sts:
        assert spec.act(spec.act(x)) == x
        assert sorted(spec.act(y) for y in boundary(g, x)) == sorted(
            boundary(g, spec.act(x)))
    if g.components == 1:
        # chain-level Alexander sum is the constant -(n-1) (doubled: -2(n-1))
        assert {big[spec.act(x)][1] + big[x][1] for x in sts} == {-2 * (g.n - 1)}


@settings(max_examples=30, deadline=None)
@given(random_grids(max_n=5))
def test_homology_reps_are_homogeneous_cycles(g):
    c = grid_complex(g)
    h = c.homology()
    for rep in h.reps:
        assert mat_apply(c.cols, rep) == 0
        c.grading_of(rep)


@st.composite
def random_knot_grids(draw, max_n=6):
    """One-component grids: X is O composed with a random n-cycle."""
    n = draw(st.integers(min_value=2, max_value=max_n))
    perm_o = draw(st.permutations(range(n)))
    order = draw(st.permutations(range(n)))
    cycle = {order[i]: order[(i + 1) % n] for i in range(n)}
    perm_x = [cycle[perm_o[i]] for i in range(n)]
    return grid_from(n, perm_o, perm_x)


@settings(max_examples=40, deadline=None)
@given(random_knot_grids())
def test_hfk_symmetry(g):
    # rank_d(s) = rank_{d-2s}(-s) after stripping the extra V factors
    assert g.components == 1
    h = grid_complex(g).homology()
    stripped = dict(strip_V(poincare(h.table), g.n - 1).c)
    for (m, a2), k in stripped.items():
        assert stripped.get((m - a2, -a2)) == k


def test_singular_involution_preserves_gradings(singular_trefoil_5x5):
    g = singular_trefoil_5x5
    spec = detect(g, expected="PreservesOX")[0]
    big = bigradings(g)
    for x in states(g):
        assert big[spec.act(x)] == big[x]


@pytest.mark.parametrize("name", [
    "unknot_2x2", "unknot_3x3_symmetric", "trefoil_31plus_5x5",
    "trefoil_31minus_7x7_symmetric", "singular_trefoil_5x5",
    "hopf_gminus_6x6", "unknot_gzero_6x6",
])
def test_corpus_complexes_check(name):
    from gridhom.io_cli import load_corpus

    g = load_corpus(name)
    if g.n <= 6:
        grid_complex(g).check()
    else:
        c = grid_complex(g)
        assert all(mat_apply(c.cols, col) == 0 for col in c.cols)


@pytest.mark.parametrize("name", [
    "unknot_3x3_symmetric", "trefoil_31plus_5x5", "figure8_7x7_symmetric",
    "trefoil_31minus_7x7_symmetric",
])
def test_corpus_swap_grids_satisfy_structural_laws(name):
    from gridhom.io_cli import load_corpus

    g = load_corpus(name)
    rep = verify_equivariance(g, detect(g, expected="SwapsOX")[0])
    by_name = {l.name: l.passed for l in rep.laws}
    assert by_name["tau^2 = id"]
    assert by_name["boundary . tau = tau . boundary"]
    assert rep.measured["A(tau x) + A(x) (doubled, if constant)"] == [-2 * (g.n - 1)]
