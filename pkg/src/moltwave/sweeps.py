"""Packed per-direction line structures for 2D sweeps.

All segments of one sweep direction are concatenated into flat arrays so a
whole sweep is: one vectorized gather from the grid, one batched scan over
the packed quadrature plans, a vectorized per-line closure, and one
scatter back.  Slots holding embedded boundary endpoints are off-grid;
their values are supplied per sweep from boundary data and never written
back.
"""

import numpy as np

from .convolve import build_line_plan
from .kernels import scan_lines


class PackedSweep:
    """One direction's sweep segments, packed and bound to a kernel rate.

    Parameters
    ----------
    mesh : EmbeddedMesh
    lines : list of MeshLine for this direction
    axis : "x" or "y"
    alpha : kernel rate
    periodic : all lines of the direction are periodic
    extend_to_ghosts : grow every segment by one grid node at each end
        (embedded Neumann); all slots are then grid nodes.
    """

    def __init__(self, mesh, lines, axis, alpha, periodic=False,
                 extend_to_ghosts=False):
        self.mesh = mesh
        self.axis = axis
        self.alpha = alpha
        self.periodic = periodic
        self.lines = lines
        ncols = mesh.xs.size
        axis_coords = mesh.xs if axis == "x" else mesh.ys
        h = mesh.dx if axis == "x" else mesh.dy

        offsets = [0]
        coords = []          # along-axis coordinate per slot
        grid_flat = []       # flat grid index per slot, -1 for off-grid
        fixed = []           # fixed coordinate per slot (for data/sources)
        wl, sl, wr, sr, dl, dr = [], [], [], [], [], []
        mu = []
        a_coord, b_coord = [], []
        end_pts = {"a": [], "b": []}     # (x, y) of each line's endpoints

        for ln in lines:
            i0, i1 = ln.i0, ln.i1
            if extend_to_ghosts:
                if i0 - 1 < 0 or i1 + 1 >= axis_coords.size:
                    raise ValueError("no room for ghost endpoints; enlarge the bbox")
                i0, i1 = i0 - 1, i1 + 1
                x_line = axis_coords[i0:i1 + 1]
                flats = self._flat_range(axis, ln.k, i0, i1, ncols)
            else:
                x_line = ln.node_coords(axis_coords)
                flats = self._flat_range(axis, ln.k, i0, i1, ncols)
                if ln.left.kind == "embedded":
                    flats = np.concatenate(([-1], flats))
                if ln.right.kind == "embedded":
                    flats = np.concatenate((flats, [-1]))

            m = x_line.size
            off = offsets[-1]
            plan = build_line_plan(x_line, alpha, h=h, index_offset=off,
                                   periodic=periodic)
            coords.append(x_line)
            grid_flat.append(flats)
            fixed.append(np.full(m, ln.fixed))
            wl.append(plan.wl); sl.append(plan.sl)
            wr.append(plan.wr); sr.append(plan.sr)
            dl.append(plan.dl); dr.append(plan.dr)
            mu.append(np.exp(-alpha * (x_line[-1] - x_line[0])))
            a_coord.append(x_line[0])
            b_coord.append(x_line[-1])
            if axis == "x":
                end_pts["a"].append((x_line[0], ln.fixed))
                end_pts["b"].append((x_line[-1], ln.fixed))
            else:
                end_pts["a"].append((ln.fixed, x_line[0]))
                end_pts["b"].append((ln.fixed, x_line[-1]))
            offsets.append(off + m)

        self.n_lines = len(lines)
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.coords = np.concatenate(coords)
        self.fixed = np.concatenate(fixed)
        self.grid_flat = np.concatenate(grid_flat).astype(np.int64)
        self.wl = np.ascontiguousarray(np.concatenate(wl))
        self.sl = np.ascontiguousarray(np.concatenate(sl))
        self.wr = np.ascontiguousarray(np.concatenate(wr))
        self.sr = np.ascontiguousarray(np.concatenate(sr))
        self.dl = np.concatenate(dl)
        self.dr = np.concatenate(dr)
        self.mu = np.asarray(mu)
        self.a_coord = np.asarray(a_coord)
        self.b_coord = np.asarray(b_coord)
        self.end_points = {side: np.asarray(pts) for side, pts in end_pts.items()}

        n_total = self.coords.size
        self.size = n_total
        self.idx_a = self.offsets[:-1]
        self.idx_b = self.offsets[1:] - 1
        counts = np.diff(self.offsets)
        self.line_of_slot = np.repeat(np.arange(self.n_lines), counts)
        a_rep = self.a_coord[self.line_of_slot]
        b_rep = self.b_coord[self.line_of_slot]
        self.ea = np.exp(-alpha * (self.coords - a_rep))
        self.eb = np.exp(-alpha * (b_rep - self.coords))

        self.is_grid = self.grid_flat >= 0
        self.grid_slots = np.nonzero(self.is_grid)[0]
        self.grid_targets = self.grid_flat[self.grid_slots]
        self.bdry_slots = np.nonzero(~self.is_grid)[0]
        # slot coordinates as (x, y) pairs for data/source evaluation
        if axis == "x":
            self.slot_x, self.slot_y = self.coords, self.fixed
        else:
            self.slot_x, self.slot_y = self.fixed, self.coords
        self._il = np.empty(n_total)
        self._ir = np.empty(n_total)

    @staticmethod
    def _flat_range(axis, k, i0, i1, ncols):
        idx = np.arange(i0, i1 + 1, dtype=np.int64)
        if axis == "x":
            return k * ncols + idx      # row k, varying column
        return idx * ncols + k          # column k, varying row

    def gather(self, field: np.ndarray, boundary_values=None) -> np.ndarray:
        """Packed slot values of ``field``; off-grid slots from ``boundary_values``."""
        f = np.empty(self.size)
        f[self.grid_slots] = field.ravel()[self.grid_targets]
        if self.bdry_slots.size:
            if boundary_values is None:
                f[self.bdry_slots] = 0.0
            else:
                f[self.bdry_slots] = boundary_values
        return f

    def convolve(self, f_packed: np.ndarray) -> np.ndarray:
        scan_lines(np.ascontiguousarray(f_packed), self.wl, self.sl, self.wr,
                   self.sr, self.dl, self.dr, self.offsets, self._il, self._ir)
        return self._il + self._ir

    def apply_closure(self, I_packed: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        lid = self.line_of_slot
        return I_packed + A[lid] * self.ea + B[lid] * self.eb

    def scatter(self, out_packed: np.ndarray, field: np.ndarray) -> None:
        field.ravel()[self.grid_targets] = out_packed[self.grid_slots]

    def endpoint_values(self, packed: np.ndarray):
        return packed[self.idx_a], packed[self.idx_b]
