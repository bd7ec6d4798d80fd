import pytest

from gridhom import alexander_polynomial, grid_complex, validate
from gridhom.errors import CentralPatternMismatch, InvariantViolation, NotChainMap
from gridhom.f2_algebra import BigradedComplex, TPoly
from gridhom.skein_lab import (
    ChainMap,
    SkeinTriple,
    center_split,
    cone,
    resolve,
    singularize,
    verify_triangle,
)


class TestSingularize:
    def test_trefoil_exact(self, trefoil_5x5, singular_trefoil_5x5):
        gs = singularize(trefoil_5x5)
        assert gs == singular_trefoil_5x5
        assert gs.XX == (3, 3)

    def test_unknot_3x3(self, unknot_3x3_symmetric):
        gs = singularize(unknot_3x3_symmetric)
        assert gs.XX == (2, 2)
        assert gs.O == frozenset({(1, 2), (2, 1), (2, 3), (3, 2)})
        assert gs.X == frozenset({(1, 3), (3, 1)})

    def test_trefoil_7x7(self, trefoil_7x7_minus):
        gs = singularize(trefoil_7x7_minus)
        assert gs.XX == (4, 4)
        assert gs.O == frozenset(
            {(1, 3), (2, 4), (3, 6), (4, 1), (4, 7), (5, 2), (6, 4), (7, 5)})
        assert gs.X == frozenset(
            {(1, 1), (2, 2), (3, 3), (5, 5), (6, 6), (7, 7)})

    def test_output_is_preserve_symmetric(self, trefoil_5x5):
        from gridhom import detect

        gs = singularize(trefoil_5x5)
        assert [s.behavior for s in detect(gs)] == ["PreservesOX"]

    def test_grid_without_swap_symmetry_rejected(self, unknot_2x2):
        from gridhom.errors import NotSymmetric

        with pytest.raises(NotSymmetric):
            singularize(unknot_2x2)

    def test_positive_central_crossing_rejected(self):
        # symmetric 7x7 trefoil grid whose central crossing has the wrong sign
        def rot(cell, c=4, n=7):
            i, j = cell
            return (((c - i) % n) + 1, ((c - j) % n) + 1)

        O = {(1, 1), (2, 2), (3, 4), (4, 7), (5, 6), (6, 5), (7, 3)}
        g = validate(7, O, {rot(o) for o in O})
        with pytest.raises(CentralPatternMismatch):
            singularize(g)


class TestResolve:
    def test_trefoil_resolutions_exact(self, singular_trefoil_5x5,
                                       unknot_6x6, hopf_6x6):
        g0, gm = resolve(singular_trefoil_5x5)
        assert g0 == unknot_6x6
        assert gm == hopf_6x6

    def test_shared_o_set(self, singular_trefoil_5x5):
        g0, gm = resolve(singular_trefoil_5x5)
        assert g0.O == gm.O
        assert g0.n == gm.n == singular_trefoil_5x5.n + 1

    def test_resolutions_differ_by_center_block(self, singular_trefoil_5x5):
        g0, gm = resolve(singular_trefoil_5x5)
        zc, zr = singular_trefoil_5x5.XX
        assert g0.X - gm.X == {(zc, zr + 1), (zc + 1, zr)}
        assert gm.X - g0.X == {(zc, zr), (zc + 1, zr + 1)}

    def test_needs_singular(self, trefoil_5x5):
        with pytest.raises(InvariantViolation):
            resolve(trefoil_5x5)


class TestCenterSplit:
    def test_sizes_and_sides(self, singular_trefoil_5x5):
        g0, gm = resolve(singular_trefoil_5x5)
        c = singular_trefoil_5x5.XX
        sp0 = center_split(g0, c)
        spm = center_split(gm, c)
        assert sp0.I.dim == 120 and sp0.N.dim == 600
        assert sp0.sub == "N"
        assert spm.sub == "I"

    def test_connecting_bidegrees(self, singular_trefoil_5x5):
        g0, gm = resolve(singular_trefoil_5x5)
        c = singular_trefoil_5x5.XX
        assert center_split(g0, c).connecting.bidegree() == (-1, 0)
        assert center_split(gm, c).connecting.bidegree() == (-1, 0)

    def test_connecting_is_chain_map(self, singular_trefoil_5x5):
        g0, _ = resolve(singular_trefoil_5x5)
        center_split(g0, singular_trefoil_5x5.XX).connecting.check()

    def test_quotient_of_singular_complex(self, singular_trefoil_5x5):
        # the I-side of the 0-resolution computes the singular homology up to
        # the Alexander shift of the embedding
        g0, _ = resolve(singular_trefoil_5x5)
        sp0 = center_split(g0, singular_trefoil_5x5.XX)
        hi = sp0.I.homology()
        hs = grid_complex(singular_trefoil_5x5).homology()
        assert hi.table == {(m, a2 - 1): k for (m, a2), k in hs.table.items()}


class TestChainMapAndCone:
    def two_complexes(self):
        a = BigradedComplex(gens=["x"], gr={"x": (0, 0)}, cols=[0])
        b = BigradedComplex(gens=["y", "z"], gr={"y": (-1, 0), "z": (-2, 0)},
                            cols=[0b10, 0])
        return a, b

    def test_zero_map_needs_declared_degree(self):
        a, b = self.two_complexes()
        f = ChainMap(src=a, tgt=b, cols=[0])
        with pytest.raises(InvariantViolation):
            f.bidegree()
        assert ChainMap(src=a, tgt=b, cols=[0], deg=(-1, 0)).bidegree() == (-1, 0)

    def test_declared_degree_must_match(self):
        a, b = self.two_complexes()
        f = ChainMap(src=a, tgt=b, cols=[0b01], deg=(0, 0))
        with pytest.raises(InvariantViolation):
            f.bidegree()

    def test_non_chain_map_rejected(self):
        a, b = self.two_complexes()
        # x is a cycle but maps to y, which is not: d(f(x)) = z != 0 = f(d(x))
        f = ChainMap(src=a, tgt=b, cols=[0b01])
        with pytest.raises(NotChainMap):
            f.check()

    def test_cone_of_zero_map_is_shifted_sum(self):
        a = BigradedComplex(gens=["x"], gr={"x": (0, 0)}, cols=[0])
        b = BigradedComplex(gens=["y"], gr={"y": (-1, 0)}, cols=[0])
        f = ChainMap(src=a, tgt=b, cols=[0], deg=(-1, 0))
        cn = cone(f)
        cn.check()
        # A-part shifted by (deg_M + 1, deg_A) = (0, 0); homology is the sum
        assert cn.homology().table == {(0, 0): 1, (-1, 0): 1}

    def test_compose(self):
        a, b = self.two_complexes()
        f = ChainMap(src=a, tgt=b, cols=[0b10])  # x -> z
        g = ChainMap(src=b, tgt=b, cols=[0b10, 0b01])  # swap basis
        assert g.compose(f).cols == [0b01]


class TestVerifyTriangle:
    def test_trefoil_triangle(self, trefoil_5x5):
        t = SkeinTriple.from_symmetric_knot(trefoil_5x5)
        rep = verify_triangle(t)
        assert rep.passed, rep.failures()
        assert len(rep.checks) == 17
        assert rep.tables["GH(g_minus)"] == grid_complex(t.g_minus).homology().table

    def test_unknot_triangle(self, unknot_3x3_symmetric):
        rep = verify_triangle(SkeinTriple.from_symmetric_knot(unknot_3x3_symmetric))
        assert rep.passed, rep.failures()

    def test_skein_relation_directly(self, trefoil_5x5):
        t = SkeinTriple.from_symmetric_knot(trefoil_5x5)
        d_m = alexander_polynomial(t.g_minus)
        d_s = alexander_polynomial(t.g_s)
        d_0 = alexander_polynomial(t.g_0)
        assert d_m == d_s + TPoly({-1: 1}) * d_0

    def test_from_singular_matches(self, singular_trefoil_5x5, trefoil_5x5):
        t1 = SkeinTriple.from_singular(singular_trefoil_5x5)
        t2 = SkeinTriple.from_symmetric_knot(trefoil_5x5)
        assert (t1.g_s, t1.g_0, t1.g_minus, t1.c) == (t2.g_s, t2.g_0, t2.g_minus, t2.c)
