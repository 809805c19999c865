"""Advance one line in time: dispersive, diffusive, and dissipative updates.

The centered (dispersive) step assembles

    u^{n+1} = 2u^n - u^{n-1} - beta^2 u^n
              + beta^2 ( I[u^n + S^n/alpha^2] + A e^{-alpha(x-a)} + B e^{-alpha(b-x)} ),

the diffusive step solves (1 - dxx/alpha^2) u^{n+1} = (5u^n - 4u^{n-1} + u^{n-2})/2
+ S^{n+1}/alpha^2 directly, and the dissipative step adds eps * D^2[u^{n-1}]
to the centered update, where D[v] = v - (I[v] + closure).
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import boundary
from .boundary import OutflowState
from .convolve import SweepLine, fast_convolve
from .errors import IncompatibleBC
from .params import FieldHistory, SchemeParams, make_params
from .sources import source_field

BC_KINDS = ("dirichlet", "neumann", "outflow")


@dataclass
class EndCondition:
    """Boundary condition at one line end; ``data`` is U(t) or V(t)."""

    kind: str
    data: Callable[[float], float] | None = None

    def value(self, t: float) -> float:
        return 0.0 if self.data is None else float(self.data(t))


@dataclass
class LineBC:
    """Both ends of a line, or a periodic identification of them.

    ``outflow_state`` holds the line's time-history memory when either end
    is an outflow condition; it is rewritten once per step (single writer).
    """

    left: EndCondition | None = None
    right: EndCondition | None = None
    periodic: bool = False
    outflow_state: OutflowState = field(default_factory=OutflowState)

    @classmethod
    def dirichlet(cls, left=None, right=None):
        return cls(EndCondition("dirichlet", left), EndCondition("dirichlet", right))

    @classmethod
    def neumann(cls, left=None, right=None):
        return cls(EndCondition("neumann", left), EndCondition("neumann", right))

    @classmethod
    def outflow(cls):
        return cls(EndCondition("outflow"), EndCondition("outflow"))


def _bracket3(end: EndCondition, t: float, dt: float, beta: float) -> float:
    um1, u0, up1 = end.value(t - dt), end.value(t), end.value(t + dt)
    return u0 + (up1 - 2.0 * u0 + um1) / beta**2


def _update_row(side, end, state, I_end, mu, params, t_n, u_end_n, u_end_nm1):
    if end.kind == "dirichlet":
        return boundary.dirichlet_row(side, _bracket3(end, t_n, params.dt, params.beta), I_end, mu)
    if end.kind == "neumann":
        return boundary.neumann_row(side, _bracket3(end, t_n, params.dt, params.beta),
                                    I_end, mu, params.alpha)
    if end.kind == "outflow":
        coef_prev = state.A_prev if side == "a" else state.B_prev
        return boundary.outflow_row(side, coef_prev, I_end, u_end_n, u_end_nm1, mu,
                                    boundary.outflow_gammas(params.beta))
    raise ValueError(f"unknown boundary kind {end.kind!r}")


def _plain_row(side, end, I_end, mu, alpha, target):
    if end.kind == "dirichlet":
        return boundary.dirichlet_row(side, target, I_end, mu)
    if end.kind == "neumann":
        return boundary.neumann_row(side, target, I_end, mu, alpha)
    raise IncompatibleBC(f"{end.kind} end not supported in this pass")


def _homogeneous(line, alpha, A, B):
    x = line.nodes
    return A * np.exp(-alpha * (x - line.a)) + B * np.exp(-alpha * (line.b - x))


def step_dispersive(hist: FieldHistory, bc: LineBC, sources, params: SchemeParams,
                    line: SweepLine) -> FieldHistory:
    """One centered step; shifts and returns the history."""
    alpha, beta = params.alpha, params.beta
    conv = fast_convolve(hist.u_n, params, line, periodic=bc.periodic)
    I_tot = conv.I + source_field(sources, line, params, hist.t_n)
    I_a, I_b = I_tot[0], I_tot[-1]

    if bc.periodic:
        A, B = boundary.periodic_coeffs(I_a, I_b, conv.mu)
    else:
        row_a = _update_row("a", bc.left, bc.outflow_state, I_a, conv.mu, params, hist.t_n,
                            hist.u_n[0], hist.u_nm1[0])
        row_b = _update_row("b", bc.right, bc.outflow_state, I_b, conv.mu, params, hist.t_n,
                            hist.u_n[-1], hist.u_nm1[-1])
        A, B = boundary.solve_rows(row_a, row_b)
        if bc.left.kind == "outflow" or bc.right.kind == "outflow":
            bc.outflow_state = OutflowState(A, B, (hist.u_n[0], hist.u_nm1[0]),
                                            (hist.u_n[-1], hist.u_nm1[-1]))

    u_new = (2.0 * hist.u_n - hist.u_nm1 - beta**2 * hist.u_n
             + beta**2 * (I_tot + _homogeneous(line, alpha, A, B)))

    t_new = hist.t_n + params.dt
    if bc.periodic:
        u_new[-1] = u_new[0]
    else:
        if bc.left.kind == "dirichlet":
            u_new[0] = bc.left.value(t_new)
        if bc.right.kind == "dirichlet":
            u_new[-1] = bc.right.value(t_new)
    return hist.shifted(u_new, params.dt)


def apply_bvp(f: np.ndarray, bc: LineBC, params: SchemeParams, line: SweepLine,
              targets=(0.0, 0.0)) -> np.ndarray:
    """Solve (1 - dxx/alpha^2) v = f directly: v = I[f] + closure.

    ``targets`` are the plain endpoint targets (values for Dirichlet ends,
    slopes for Neumann ends); periodic lines ignore them.
    """
    conv = fast_convolve(f, params, line, periodic=bc.periodic)
    if bc.periodic:
        A, B = boundary.periodic_coeffs(conv.I[0], conv.I[-1], conv.mu)
    else:
        A, B = boundary.solve_rows(
            _plain_row("a", bc.left, conv.I[0], conv.mu, params.alpha, targets[0]),
            _plain_row("b", bc.right, conv.I[-1], conv.mu, params.alpha, targets[1]))
    return conv.I + _homogeneous(line, params.alpha, A, B)


def step_dissipative(hist: FieldHistory, bc: LineBC, params: SchemeParams,
                     line: SweepLine, epsilon: float | None = None) -> FieldHistory:
    """Centered step plus eps * D^2[u^{n-1}] artificial damping.

    The outer D pass closes against the line's own boundary data at
    t^{n-1}; the inner pass uses homogeneous data, which perturbs the
    update only at O(eps).
    """
    eps = params.epsilon if epsilon is None else epsilon
    base = step_dispersive(hist, bc, (), params, line)
    if eps == 0.0:
        return FieldHistory(base.u_n, base.u_nm1, hist.u_nm1, base.t_n)
    t_nm1 = hist.t_n - params.dt
    if bc.periodic:
        targets_outer = (0.0, 0.0)
    else:
        if bc.left.kind == "outflow" or bc.right.kind == "outflow":
            raise IncompatibleBC("dissipative D passes do not support outflow ends")
        targets_outer = (bc.left.value(t_nm1), bc.right.value(t_nm1))
    d1 = hist.u_nm1 - apply_bvp(hist.u_nm1, bc, params, line, targets_outer)
    d2 = d1 - apply_bvp(d1, bc, params, line)
    u_new = base.u_n + eps * d2
    if bc.periodic:
        u_new[-1] = u_new[0]
    elif bc.left.kind == "dirichlet" or bc.right.kind == "dirichlet":
        if bc.left.kind == "dirichlet":
            u_new[0] = bc.left.value(base.t_n)
        if bc.right.kind == "dirichlet":
            u_new[-1] = bc.right.value(base.t_n)
    return FieldHistory(u_new, hist.u_n, hist.u_nm1, base.t_n)


def step_diffusive(hist: FieldHistory, bc: LineBC, sources, params: SchemeParams,
                   line: SweepLine) -> FieldHistory:
    """One BDF step; requires three history levels."""
    if hist.u_nm2 is None:
        raise ValueError("diffusive step needs u^{n-2}; bootstrap first")
    t_new = hist.t_n + params.dt
    rhs = 0.5 * (5.0 * hist.u_n - 4.0 * hist.u_nm1 + hist.u_nm2)
    conv = fast_convolve(rhs, params, line, periodic=bc.periodic)
    I_tot = conv.I + source_field(sources, line, params, t_new)
    if bc.periodic:
        A, B = boundary.periodic_coeffs(I_tot[0], I_tot[-1], conv.mu)
    else:
        A, B = boundary.solve_rows(
            _plain_row("a", bc.left, I_tot[0], conv.mu, params.alpha, bc.left.value(t_new)),
            _plain_row("b", bc.right, I_tot[-1], conv.mu, params.alpha, bc.right.value(t_new)))
    u_new = I_tot + _homogeneous(line, params.alpha, A, B)
    if bc.periodic:
        u_new[-1] = u_new[0]
    else:
        if bc.left.kind == "dirichlet":
            u_new[0] = bc.left.value(t_new)
        if bc.right.kind == "dirichlet":
            u_new[-1] = bc.right.value(t_new)
    return hist.shifted(u_new, params.dt, keep_three=True)


def taylor_second_level(u0: np.ndarray, g: np.ndarray, params: SchemeParams,
                        laplacian: np.ndarray | None = None,
                        line: SweepLine | None = None,
                        source0: np.ndarray | None = None) -> np.ndarray:
    """Second-order accurate u^1 = u^0 + dt*g + (c*dt)^2/2 * (lap u^0 + S^0)."""
    if laplacian is None:
        if line is None:
            raise ValueError("need an analytic laplacian or a line for differencing")
        lap = np.zeros_like(u0)
        h = line.h
        lap[1:-1] = (u0[2:] - 2.0 * u0[1:-1] + u0[:-2]) / h**2
        lap[0] = lap[1]
        lap[-1] = lap[-2]
    else:
        lap = laplacian
    extra = lap if source0 is None else lap + source0
    return u0 + params.dt * g + 0.5 * (params.c * params.dt) ** 2 * extra


class LineRun:
    """Owns one line's history and steps it under the configured variant.

    The diffusive variant bootstraps its third level by running the first
    two steps with a centered scheme at the same c, dt.
    """

    def __init__(self, line: SweepLine, bc: LineBC, params: SchemeParams,
                 sources=(), u0=None, u1=None, t0: float = 0.0):
        self.line = line
        self.bc = bc
        self.params = params
        self.sources = tuple(sources)
        keep3 = params.variant in ("diffusive", "dissipative")
        self.hist = FieldHistory(np.array(u1, dtype=float), np.array(u0, dtype=float),
                                 np.zeros_like(u0) if keep3 else None, t_n=t0 + params.dt)
        if params.variant == "diffusive":
            self._boot = make_params(params.c, params.dt, beta=2.0, variant="dispersive")
            self._boot_steps = 2
        else:
            self._boot = None
            self._boot_steps = 0

    def step(self):
        p = self.params
        if p.variant == "diffusive":
            if self._boot_steps > 0:
                nxt = step_dispersive(self.hist, self.bc, self.sources, self._boot, self.line)
                self.hist = FieldHistory(nxt.u_n, nxt.u_nm1, self.hist.u_nm1, nxt.t_n)
                self._boot_steps -= 1
            else:
                self.hist = step_diffusive(self.hist, self.bc, self.sources, p, self.line)
        elif p.variant == "dissipative":
            self.hist = step_dissipative(self.hist, self.bc, p, self.line)
        else:
            self.hist = step_dispersive(self.hist, self.bc, self.sources, p, self.line)
        return self.hist

    def run_until(self, t_final: float, on_step=None):
        while self.hist.t_n < t_final - 1e-9 * self.params.dt:
            self.step()
            if on_step is not None:
                on_step(self.hist)
        return self.hist
