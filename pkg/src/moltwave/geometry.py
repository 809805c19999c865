"""Embedded Cartesian meshes: sweep lines terminated on level-set boundaries.

A domain given by a level set C(x, y) (negative inside, positive outside)
is embedded in a regular bounding-box grid.  Each grid line is scanned for
sign changes of C; every maximal interior run becomes one sweep segment
whose endpoints either sit exactly on grid nodes ("grid" ends: bounding-box
edges, or intersections landing on a node) or are off-grid boundary points
found by bisection ("embedded" ends, carrying the short end-cell width).
Non-convex domains naturally yield several segments per line.

Ghost nodes (exterior nodes with an interior 4-neighbor) support the
embedded Neumann treatment: for each ghost, the closest boundary point is
found by projecting along the level-set gradient, and the ghost value is
tied to two interior interpolation points on the inward normal through a
quadratic interpolant with zero slope at the boundary.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (NoInteriorNodes, PointOutsideCell, StencilNotInterior,
                     TangentIntersection)

logger = logging.getLogger(__name__)

EXTERIOR, INTERIOR, GHOST = 0, 1, 2

_MIN_RUN = 3  # interior runs shorter than this are merged into the boundary


class CircleLevelSet:
    """Signed distance to a circle of radius r centered at (cx, cy)."""

    def __init__(self, r: float, cx: float = 0.0, cy: float = 0.0):
        self.r = r
        self.cx = cx
        self.cy = cy

    def __call__(self, x, y):
        return np.hypot(x - self.cx, y - self.cy) - self.r

    def gradient(self, x, y):
        dx = x - self.cx
        dy = y - self.cy
        d = np.hypot(dx, dy)
        d = np.where(d == 0.0, 1.0, d)
        return dx / d, dy / d


class DoubleCircleLevelSet:
    """Union of two radius-r disks centered at (-gamma, 0) and (gamma, 0)."""

    def __init__(self, r: float, gamma: float):
        if not gamma < r:
            raise ValueError("need gamma < r for overlapping disks")
        self.r = r
        self.gamma = gamma

    def __call__(self, x, y):
        d1 = np.hypot(x + self.gamma, y)
        d2 = np.hypot(x - self.gamma, y)
        return np.minimum(d1, d2) - self.r

    def gradient(self, x, y):
        d1 = np.hypot(x + self.gamma, y)
        d2 = np.hypot(x - self.gamma, y)
        use1 = d1 <= d2
        dx = np.where(use1, x + self.gamma, x - self.gamma)
        d = np.where(use1, d1, d2)
        d = np.where(d == 0.0, 1.0, d)
        return dx / d, y / d


def numeric_gradient(level_set, x, y, step):
    gx = (level_set(x + step, y) - level_set(x - step, y)) / (2.0 * step)
    gy = (level_set(x, y + step) - level_set(x, y - step)) / (2.0 * step)
    return gx, gy


@dataclass
class LineEnd:
    """One end of a sweep segment.

    ``kind`` is "grid" when the endpoint is a grid node (its value lives in
    the field array) or "embedded" when it is an off-grid boundary point
    whose value is prescribed by boundary data.  ``coord`` is the endpoint
    coordinate along the line axis; ``tag`` records which boundary piece the
    end touches ("edge:left", ..., "levelset", "screen").
    """

    kind: str
    coord: float
    tag: str


@dataclass
class MeshLine:
    """One sweep segment: grid nodes [i0, i1] plus its two ends."""

    axis: str          # "x": varying x at fixed y; "y": varying y at fixed x
    k: int             # index of the fixed coordinate
    fixed: float       # value of the fixed coordinate
    i0: int
    i1: int            # inclusive
    left: LineEnd
    right: LineEnd

    def node_coords(self, axis_coords: np.ndarray) -> np.ndarray:
        """Full coordinate array including any embedded endpoints."""
        core = axis_coords[self.i0:self.i1 + 1]
        parts = []
        if self.left.kind == "embedded":
            parts.append([self.left.coord])
        parts.append(core)
        if self.right.kind == "embedded":
            parts.append([self.right.coord])
        return np.concatenate(parts)


@dataclass
class EmbeddedMesh:
    xs: np.ndarray
    ys: np.ndarray
    dx: float
    dy: float
    mask: np.ndarray                  # (ny+1, nx+1) int8
    x_lines: list
    y_lines: list
    periodic_x: bool = False
    periodic_y: bool = False
    level_set: object = None
    dirichlet_nodes: list = field(default_factory=list)   # (j, i) prescribed grid nodes

    @property
    def shape(self):
        return self.ys.size, self.xs.size

    def meshgrid(self):
        return np.meshgrid(self.xs, self.ys)

    def interior(self) -> np.ndarray:
        inter = self.mask == INTERIOR
        if self.periodic_x:
            inter[:, -1] = False
        if self.periodic_y:
            inter[-1, :] = False
        return inter

    def ghosts(self):
        return [tuple(ix) for ix in np.argwhere(self.mask == GHOST)]


def _bisect(f, lo, hi, flo, fhi, tol):
    """Root of f on [lo, hi] given f(lo) > 0 > f(hi) or the reverse."""
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise TangentIntersection(f"no sign change on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or abs(hi - lo) < tol:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def _scan_axis(coords, cvals, ztol, root_tol, cfun, axis_name, k, fixed):
    """Interior runs and their ends along one grid line."""
    n = coords.size
    sign = np.zeros(n, dtype=np.int8)
    sign[cvals < -ztol] = -1
    sign[cvals > ztol] = 1
    lines = []
    i = 0
    while i < n:
        if sign[i] != -1:
            i += 1
            continue
        s = i
        while i < n and sign[i] == -1:
            i += 1
        e = i - 1
        if e - s + 1 < _MIN_RUN:
            logger.warning("dropping %d-node interior run on %s-line %d (grazing intersection)",
                           e - s + 1, axis_name, k)
            continue
        # left end
        if s == 0:
            left = LineEnd("grid", coords[0], f"edge:{'left' if axis_name == 'x' else 'bottom'}")
        elif sign[s - 1] == 0:
            left = LineEnd("grid", coords[s - 1], "levelset")
            s = s - 1
        else:
            a = _bisect(cfun, coords[s - 1], coords[s], cvals[s - 1], cvals[s], root_tol)
            left = LineEnd("embedded", a, "levelset")
        # right end
        if e == n - 1:
            right = LineEnd("grid", coords[-1], f"edge:{'right' if axis_name == 'x' else 'top'}")
        elif sign[e + 1] == 0:
            right = LineEnd("grid", coords[e + 1], "levelset")
            e = e + 1
        else:
            b = _bisect(cfun, coords[e + 1], coords[e], cvals[e + 1], cvals[e], root_tol)
            right = LineEnd("embedded", b, "levelset")
        lines.append(MeshLine(axis_name, k, fixed, s, e, left, right))
    return lines


def build_mesh(level_set, bbox, nx: int, ny: int) -> EmbeddedMesh:
    """Embed the level-set domain into an (nx x ny)-cell grid over bbox.

    ``bbox`` is ((x0, x1), (y0, y1)); the level set must be negative inside
    the domain.  Boundary intersections are bisected to ~1e-13 of the
    domain scale.  Nodes with |C| below the classification tolerance count
    as boundary nodes: they terminate runs as on-node "grid" ends.
    """
    (x0, x1), (y0, y1) = bbox
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    scale = max(x1 - x0, y1 - y0)
    ztol = 1e-12 * scale
    root_tol = 1e-14 * scale

    X, Y = np.meshgrid(xs, ys)
    C = np.asarray(level_set(X, Y), dtype=float)

    mask = np.zeros(C.shape, dtype=np.int8)
    mask[C < -ztol] = INTERIOR

    x_lines = []
    for j in range(ny + 1):
        cfun = lambda x, yj=ys[j]: float(level_set(x, yj))
        x_lines.extend(_scan_axis(xs, C[j], ztol, root_tol, cfun, "x", j, ys[j]))
    y_lines = []
    for i in range(nx + 1):
        cfun = lambda y, xi=xs[i]: float(level_set(xi, y))
        y_lines.extend(_scan_axis(ys, C[:, i], ztol, root_tol, cfun, "y", i, xs[i]))

    # keep only nodes that belong to a surviving run in both directions
    covered = np.zeros_like(mask, dtype=bool)
    cov_x = np.zeros_like(mask, dtype=bool)
    for ln in x_lines:
        cov_x[ln.k, ln.i0:ln.i1 + 1] = True
    cov_y = np.zeros_like(mask, dtype=bool)
    for ln in y_lines:
        cov_y[ln.i0:ln.i1 + 1, ln.k] = True
    covered = cov_x & cov_y
    dropped = (mask == INTERIOR) & ~covered
    if dropped.any():
        logger.warning("declassifying %d interior nodes not covered by both sweep "
                       "directions", int(dropped.sum()))
        mask[dropped] = EXTERIOR
        x_lines = [ln for ln in x_lines
                   if np.all(mask[ln.k, ln.i0:ln.i1 + 1] == INTERIOR)]
        y_lines = [ln for ln in y_lines
                   if np.all(mask[ln.i0:ln.i1 + 1, ln.k] == INTERIOR)]

    if not np.any(mask == INTERIOR):
        raise NoInteriorNodes("level set admits no interior nodes on this grid")

    # ghosts: exterior nodes with an interior 4-neighbor
    inter = mask == INTERIOR
    nb = np.zeros_like(inter)
    nb[1:, :] |= inter[:-1, :]
    nb[:-1, :] |= inter[1:, :]
    nb[:, 1:] |= inter[:, :-1]
    nb[:, :-1] |= inter[:, 1:]
    mask[(mask == EXTERIOR) & nb] = GHOST

    dirichlet_nodes = []
    for ln in x_lines:
        if ln.left.tag == "levelset" and ln.left.kind == "grid":
            dirichlet_nodes.append((ln.k, ln.i0))
        if ln.right.tag == "levelset" and ln.right.kind == "grid":
            dirichlet_nodes.append((ln.k, ln.i1))
    for ln in y_lines:
        if ln.left.tag == "levelset" and ln.left.kind == "grid":
            dirichlet_nodes.append((ln.i0, ln.k))
        if ln.right.tag == "levelset" and ln.right.kind == "grid":
            dirichlet_nodes.append((ln.i1, ln.k))

    return EmbeddedMesh(xs, ys, xs[1] - xs[0], ys[1] - ys[0], mask,
                        x_lines, y_lines, level_set=level_set,
                        dirichlet_nodes=sorted(set(dirichlet_nodes)))


def rectangle_mesh(bbox, nx: int, ny: int, periodic_x=False, periodic_y=False) -> EmbeddedMesh:
    """Grid-aligned rectangular mesh; every node is interior."""
    (x0, x1), (y0, y1) = bbox
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    mask = np.full((ny + 1, nx + 1), INTERIOR, dtype=np.int8)
    x_lines = [MeshLine("x", j, ys[j], 0, nx,
                        LineEnd("grid", x0, "edge:left"), LineEnd("grid", x1, "edge:right"))
               for j in range(ny + 1)]
    y_lines = [MeshLine("y", i, xs[i], 0, ny,
                        LineEnd("grid", y0, "edge:bottom"), LineEnd("grid", y1, "edge:top"))
               for i in range(nx + 1)]
    return EmbeddedMesh(xs, ys, xs[1] - xs[0], ys[1] - ys[0], mask,
                        x_lines, y_lines, periodic_x=periodic_x, periodic_y=periodic_y)


def slit_grating_mesh(period: float, aperture: float, ly: float,
                      nx: int, ny: int) -> EmbeddedMesh:
    """One period of an idealized slit screen at y = 0.

    The screen (zero thickness, Dirichlet) occupies |x| >= aperture/2 on
    the row closest to y = 0; vertical lines crossing it split into a lower
    and an upper segment sharing the screen node.  Horizontal lines are
    periodic in x; the top and bottom edges are left to the caller's BC
    (typically outflow).  ny should be even so a node row sits at y = 0.
    """
    mesh = rectangle_mesh(((-period / 2, period / 2), (-ly / 2, ly / 2)),
                          nx, ny, periodic_x=True)
    j_mid = int(round(ny / 2))
    if abs(mesh.ys[j_mid]) > 1e-12 * ly:
        raise ValueError("slit mesh needs a node row at y = 0 (even ny)")
    y_lines = []
    screen_nodes = []
    for ln in mesh.y_lines:
        x_i = mesh.xs[ln.k]
        if abs(x_i) < aperture / 2 - 1e-12 * period:
            y_lines.append(ln)
            continue
        screen_nodes.append((j_mid, ln.k))
        y_lines.append(MeshLine("y", ln.k, x_i, 0, j_mid, ln.left,
                                LineEnd("grid", 0.0, "screen")))
        y_lines.append(MeshLine("y", ln.k, x_i, j_mid, ny,
                                LineEnd("grid", 0.0, "screen"), ln.right))
    mesh.y_lines = y_lines
    mesh.dirichlet_nodes = sorted(set(screen_nodes))
    return mesh


def bilinear_weights(p, cell):
    """Standard bilinear weights of point ``p`` in cell ((x_i, x_ip1), (y_j, y_jp1)).

    Returns weights ordered (i,j), (i+1,j), (i+1,j+1), (i,j+1).
    """
    (xi, xip), (yj, yjp) = cell
    x, y = p
    dx = xip - xi
    dy = yjp - yj
    tol = 1e-12 * max(dx, dy)
    if not (xi - tol <= x <= xip + tol and yj - tol <= y <= yjp + tol):
        raise PointOutsideCell(f"point {p} outside cell {cell}")
    w1 = (xip - x) * (yjp - y) / (dx * dy)
    w2 = (x - xi) * (yjp - y) / (dx * dy)
    w3 = (x - xi) * (y - yj) / (dx * dy)
    w4 = (xip - x) * (y - yj) / (dx * dy)
    return w1, w2, w3, w4


@dataclass
class GhostStencil:
    ghost: tuple                 # (j, i) grid index
    boundary_pt: tuple           # (x_B, y_B)
    normal: tuple                # outward unit normal
    xi_g: float
    xi_i: float
    xi_ii: float
    gamma_i: float
    gamma_ii: float
    interp_i: tuple              # (4 flat node indices, 4 weights)
    interp_ii: tuple


def _project_to_boundary(level_set, p, scale, grad):
    """Closest boundary point by damped gradient projection."""
    q = np.array(p, dtype=float)
    for _ in range(100):
        c = float(level_set(q[0], q[1]))
        gx, gy = grad(q[0], q[1])
        g2 = gx * gx + gy * gy
        if g2 == 0.0:
            break
        q[0] -= c * gx / g2
        q[1] -= c * gy / g2
        if abs(c) < 1e-14 * scale:
            break
    if abs(float(level_set(q[0], q[1]))) > 1e-10 * scale:
        raise StencilNotInterior(f"boundary projection failed near {p}")
    return q


def _owning_cells(x, y, xs, ys):
    """Candidate cells containing (x, y); several when on a cell edge."""
    fx = (x - xs[0]) / (xs[1] - xs[0])
    fy = (y - ys[0]) / (ys[1] - ys[0])
    ixs = {int(np.clip(np.floor(fx), 0, xs.size - 2))}
    iys = {int(np.clip(np.floor(fy), 0, ys.size - 2))}
    if abs(fx - round(fx)) < 1e-9:
        k = int(round(fx))
        ixs.update(i for i in (k - 1, k) if 0 <= i <= xs.size - 2)
    if abs(fy - round(fy)) < 1e-9:
        k = int(round(fy))
        iys.update(j for j in (k - 1, k) if 0 <= j <= ys.size - 2)
    return [(i, j) for i in sorted(ixs) for j in sorted(iys)]


def _interp_stencil(mesh, pt):
    """All-interior bilinear stencil for ``pt``, or None."""
    x, y = pt
    ncols = mesh.xs.size
    for (i, j) in _owning_cells(x, y, mesh.xs, mesh.ys):
        corners = ((j, i), (j, i + 1), (j + 1, i + 1), (j + 1, i))
        if all(mesh.mask[cj, ci] == INTERIOR for cj, ci in corners):
            w = bilinear_weights((x, y), ((mesh.xs[i], mesh.xs[i + 1]),
                                          (mesh.ys[j], mesh.ys[j + 1])))
            flat = tuple(cj * ncols + ci for cj, ci in corners)
            return flat, w
    return None


def build_ghost_stencils(mesh: EmbeddedMesh, level_set=None, ds_i: float | None = None):
    """Normal-intersection interpolation stencils for every ghost node.

    The interpolation distance defaults to sqrt(2)*max(dx, dy); when the
    first interpolation point's cell touches non-interior nodes the
    distance is stretched (up to just under 1.5 cells) before failing.
    """
    level_set = level_set or mesh.level_set
    if level_set is None:
        raise ValueError("mesh carries no level set")
    h = max(mesh.dx, mesh.dy)
    base = math.sqrt(2.0) * h if ds_i is None else ds_i
    scale = max(mesh.xs[-1] - mesh.xs[0], mesh.ys[-1] - mesh.ys[0])
    if hasattr(level_set, "gradient"):
        grad = level_set.gradient
    else:
        step = mesh.dx / 100.0
        grad = lambda x, y: numeric_gradient(level_set, x, y, step)

    stencils = []
    for (j, i) in mesh.ghosts():
        p = (mesh.xs[i], mesh.ys[j])
        q = _project_to_boundary(level_set, p, scale, grad)
        gx, gy = grad(q[0], q[1])
        gn = math.hypot(gx, gy)
        n_hat = (gx / gn, gy / gn)
        xi_g = math.hypot(p[0] - q[0], p[1] - q[1])

        found = None
        for stretch in (1.0, 1.02, 1.04, 1.06):
            ds = base * stretch
            if ds >= 1.5 * h * math.sqrt(2.0):
                break
            pt_i = (q[0] - ds * n_hat[0], q[1] - ds * n_hat[1])
            pt_ii = (q[0] - 2 * ds * n_hat[0], q[1] - 2 * ds * n_hat[1])
            st_i = _interp_stencil(mesh, pt_i)
            st_ii = _interp_stencil(mesh, pt_ii)
            if st_i is not None and st_ii is not None:
                found = (ds, st_i, st_ii)
                break
        if found is None:
            raise StencilNotInterior(f"no all-interior stencil for ghost {(j, i)}")
        ds, st_i, st_ii = found
        xi_i, xi_ii = ds, 2 * ds
        denom = xi_ii**2 - xi_i**2
        gamma_i = (xi_ii**2 - xi_g**2) / denom
        gamma_ii = (xi_g**2 - xi_i**2) / denom
        stencils.append(GhostStencil((j, i), (q[0], q[1]), n_hat, xi_g, xi_i, xi_ii,
                                     gamma_i, gamma_ii, st_i, st_ii))
    return stencils
