import numpy as np
import pytest

from moltwave.errors import NoInteriorNodes, PointOutsideCell
from moltwave.geometry import (GHOST, INTERIOR, CircleLevelSet,
                               DoubleCircleLevelSet, bilinear_weights,
                               build_ghost_stencils, build_mesh,
                               rectangle_mesh, slit_grating_mesh)


class TestBuildMesh:
    def test_unit_circle_on_node(self):
        # grid with nodes exactly at (+-1, 0): intersections land on nodes
        ls = CircleLevelSet(1.0)
        mesh = build_mesh(ls, ((-2, 2), (-2, 2)), 100, 100)
        line = next(ln for ln in mesh.x_lines if abs(ln.fixed) < 1e-14)
        assert line.left.coord == pytest.approx(-1.0, abs=1e-12)
        assert line.right.coord == pytest.approx(1.0, abs=1e-12)

    def test_endpoints_on_levelset(self):
        r = np.pi / 2
        ls = CircleLevelSet(r)
        mesh = build_mesh(ls, ((-2, 2), (-2, 2)), 100, 100)
        for ln in mesh.x_lines:
            for end in (ln.left, ln.right):
                assert abs(ls(end.coord, ln.fixed)) < 1e-12 * 4.0
        for ln in mesh.y_lines:
            for end in (ln.left, ln.right):
                assert abs(ls(ln.fixed, end.coord)) < 1e-12 * 4.0

    def test_interior_has_negative_levelset(self):
        ls = CircleLevelSet(1.3)
        mesh = build_mesh(ls, ((-2, 2), (-2, 2)), 64, 64)
        X, Y = mesh.meshgrid()
        inter = mesh.mask == INTERIOR
        assert np.all(ls(X[inter], Y[inter]) < 0)

    def test_partition_and_ghosts(self):
        ls = CircleLevelSet(1.3)
        mesh = build_mesh(ls, ((-2, 2), (-2, 2)), 64, 64)
        # ghosts are exterior (positive level set) with an interior neighbor
        for (j, i) in mesh.ghosts():
            assert ls(mesh.xs[i], mesh.ys[j]) >= 0
            neigh = [(j + 1, i), (j - 1, i), (j, i + 1), (j, i - 1)]
            assert any(mesh.mask[a, b] == INTERIOR for a, b in neigh)

    def test_interior_covered_by_lines(self):
        ls = CircleLevelSet(1.3)
        mesh = build_mesh(ls, ((-2, 2), (-2, 2)), 48, 48)
        cov_x = np.zeros(mesh.shape, dtype=int)
        for ln in mesh.x_lines:
            cov_x[ln.k, ln.i0:ln.i1 + 1] += 1
        cov_y = np.zeros(mesh.shape, dtype=int)
        for ln in mesh.y_lines:
            cov_y[ln.i0:ln.i1 + 1, ln.k] += 1
        inter = mesh.mask == INTERIOR
        assert np.all(cov_x[inter] == 1)
        assert np.all(cov_y[inter] == 1)

    def test_double_circle_splits_lines(self):
        ls = DoubleCircleLevelSet(0.3, 0.2)
        mesh = build_mesh(ls, ((-0.525, 0.525), (-0.325, 0.325)), 150, 150)
        # near the top the two lobes separate: some rows carry two segments
        per_row = {}
        for ln in mesh.x_lines:
            per_row.setdefault(ln.k, 0)
            per_row[ln.k] += 1
        assert max(per_row.values()) == 2
        # the waist rows carry a single segment
        mid_row = next(ln.k for ln in mesh.x_lines if abs(ln.fixed) < 1e-12)
        assert per_row[mid_row] == 1

    def test_no_interior(self):
        with pytest.raises(NoInteriorNodes):
            build_mesh(CircleLevelSet(0.001), ((-2, 2), (-2, 2)), 16, 16)

    def test_quarter_circle_mixed_ends(self):
        r = np.pi / 2
        mesh = build_mesh(CircleLevelSet(r), ((-1.8, 0.0), (0.0, 1.8)), 48, 48)
        # x-lines: embedded on the arc (left), grid end on the y-axis (right)
        row = next(ln for ln in mesh.x_lines if 0.2 < ln.fixed < 0.8)
        assert row.left.kind == "embedded" and row.left.tag == "levelset"
        assert row.right.kind == "grid" and row.right.tag == "edge:right"
        col = next(ln for ln in mesh.y_lines if -0.8 < ln.fixed < -0.2)
        assert col.left.kind == "grid" and col.left.tag == "edge:bottom"
        assert col.right.kind == "embedded"

    def test_rectangle_mesh_uniform(self):
        mesh = rectangle_mesh(((0, 1), (0, 2)), 10, 20)
        assert all(ln.left.kind == "grid" for ln in mesh.x_lines)
        assert np.all(mesh.mask == INTERIOR)
        assert len(mesh.x_lines) == 21 and len(mesh.y_lines) == 11


class TestSlitMesh:
    def test_screen_splits_vertical_lines(self):
        mesh = slit_grating_mesh(1.0, 0.1, 1.0, 50, 50)
        # lines in the aperture stay whole; screen lines split in two
        whole = [ln for ln in mesh.y_lines if abs(ln.fixed) < 0.05 - 1e-9]
        split = [ln for ln in mesh.y_lines if abs(ln.fixed) > 0.06]
        assert all(ln.i0 == 0 and ln.i1 == 50 for ln in whole)
        counts = {}
        for ln in split:
            counts.setdefault(ln.k, []).append(ln)
        assert all(len(v) == 2 for v in counts.values())
        assert mesh.periodic_x
        assert len(mesh.dirichlet_nodes) > 0


class TestBilinear:
    CELL = ((0.0, 1.0), (0.0, 1.0))

    def test_corner(self):
        assert bilinear_weights((0.0, 0.0), self.CELL) == pytest.approx((1, 0, 0, 0))
        assert bilinear_weights((1.0, 1.0), self.CELL) == pytest.approx((0, 0, 1, 0))

    def test_center(self):
        assert bilinear_weights((0.5, 0.5), self.CELL) == pytest.approx((0.25,) * 4)

    def test_partition_of_unity(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = rng.uniform(0, 1, 2)
            w = bilinear_weights(tuple(p), self.CELL)
            assert sum(w) == pytest.approx(1.0, abs=1e-14)
            assert all(0 <= wi <= 1 for wi in w)

    def test_outside(self):
        with pytest.raises(PointOutsideCell):
            bilinear_weights((1.5, 0.5), self.CELL)


class TestGhostStencils:
    def test_circle_stencils(self):
        r = np.pi / 2
        ls = CircleLevelSet(r)
        mesh = build_mesh(ls, ((-1.8, 1.8), (-1.8, 1.8)), 48, 48)
        stencils = build_ghost_stencils(mesh, ls)
        assert len(stencils) == len(mesh.ghosts())
        for st in stencils:
            assert st.gamma_i + st.gamma_ii == pytest.approx(1.0, abs=1e-12)
            assert st.gamma_i > 0 and st.gamma_ii < 0
            # boundary point on the circle, normal radial outward
            assert np.hypot(*st.boundary_pt) == pytest.approx(r, abs=1e-9)
            nx, ny = st.normal
            bx, by = st.boundary_pt
            assert nx * bx + ny * by == pytest.approx(r, abs=1e-8)
            for flat, w in (st.interp_i, st.interp_ii):
                assert sum(w) == pytest.approx(1.0, abs=1e-12)
                for idx in flat:
                    j, i = divmod(idx, mesh.xs.size)
                    assert mesh.mask[j, i] == INTERIOR

    def test_stencils_across_resolutions(self):
        # stencil construction must survive a sweep of grid sizes
        r = np.pi / 2
        ls = CircleLevelSet(r)
        for n in (32, 48, 64, 96):
            mesh = build_mesh(ls, ((-1.8, 1.8), (-1.8, 1.8)), n, n)
            stencils = build_ghost_stencils(mesh, ls)
            assert len(stencils) == len(mesh.ghosts())
