"""Homogeneous-solution coefficients A, B closing one line's update.

Inverting the modified Helmholtz operator on (a, b) leaves a two-parameter
homogeneous solution

    A * exp(-alpha*(x - a)) + B * exp(-alpha*(b - x)),

and each boundary condition pins (A, B) through a 2x2 linear system built
from the endpoint values of the particular (convolution) solution.  Every
closure here works in "composite" units: the quantity being closed is
I[f] + A e + B e evaluated against a prescribed endpoint target (value,
slope, or outflow recursion).  Mixed condition kinds at the two ends are
supported by assembling one row per end.

Outflow uses the fact that the exterior contribution to the free-space
solution is a pure time convolution at the endpoint: with beta = alpha*c*dt
the coefficient obeys B^n = e^{-beta} B^{n-1} + (quadratic-in-time local
integral), whose weights gamma_i are printed below in closed form.  The
unknown new endpoint value is eliminated against the update equation,
giving rows with the Gamma_i coefficients.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLine, SingularOutflowSystem

_DEGENERATE_TOL = 1e-14


def dirichlet_row(side: str, target, I_end, mu):
    """Row enforcing composite(end) = target. side is 'a' or 'b'."""
    one = np.ones_like(np.asarray(I_end, dtype=float))
    rhs = np.asarray(target, dtype=float) - I_end
    if side == "a":
        return one, one * mu, rhs
    return one * mu, one, rhs


def neumann_row(side: str, slope_target, I_end, mu, alpha):
    """Row enforcing d/dx composite(end) = slope_target.

    Uses I'(a) = alpha*I(a) and I'(b) = -alpha*I(b), which hold because all
    x-dependence of the kernel is exponential.
    """
    one = np.ones_like(np.asarray(I_end, dtype=float))
    if side == "a":
        return one, -one * mu, I_end - np.asarray(slope_target) / alpha
    return -one * mu, one, I_end + np.asarray(slope_target) / alpha


def outflow_row(side: str, coef_prev, I_end, u_end_n, u_end_nm1, mu, gammas):
    """Row from the outflow time-history recursion at one end."""
    _, _, _, G0, G1, G2, exp_mbeta = gammas
    one = np.ones_like(np.asarray(I_end, dtype=float))
    rhs = exp_mbeta * coef_prev + G0 * I_end + G1 * u_end_n + G2 * u_end_nm1
    if side == "a":
        return one * (1.0 - G0), -one * (G0 * mu), rhs
    return -one * (G0 * mu), one * (1.0 - G0), rhs


def solve_rows(row_a, row_b, singular_exc=DegenerateLine):
    """Solve the stacked per-end rows for (A, B); broadcasts over arrays."""
    m11, m12, r1 = row_a
    m21, m22, r2 = row_b
    det = m11 * m22 - m12 * m21
    if np.any(np.abs(det) < _DEGENERATE_TOL):
        raise singular_exc(f"closure system singular: |det| ~ {np.min(np.abs(det)):.3e}")
    A = (r1 * m22 - r2 * m12) / det
    B = (m11 * r2 - m21 * r1) / det
    return A, B


def _bracket(data3, beta):
    """Target U^n + (U^{n+1} - 2U^n + U^{n-1})/beta^2 from three time levels.

    ``data3`` is ordered (t^{n-1}, t^n, t^{n+1}).
    """
    um1, u0, up1 = data3
    return u0 + (up1 - 2.0 * u0 + um1) / beta**2


def dirichlet_coeffs(I_a, I_b, data, params, mu):
    """(A, B) for Dirichlet data at both ends of the centered update.

    ``data`` is a pair of three-level tuples ((U_L at n-1, n, n+1),
    (U_R at n-1, n, n+1)).
    """
    ta = _bracket(data[0], params.beta)
    tb = _bracket(data[1], params.beta)
    return solve_rows(dirichlet_row("a", ta, I_a, mu),
                      dirichlet_row("b", tb, I_b, mu))


def neumann_coeffs(I_a, I_b, data, params, mu):
    """(A, B) for Neumann data (V_L, V_R), each at three time levels."""
    ga = _bracket(data[0], params.beta)
    gb = _bracket(data[1], params.beta)
    return solve_rows(neumann_row("a", ga, I_a, mu, params.alpha),
                      neumann_row("b", gb, I_b, mu, params.alpha))


def periodic_coeffs(I_a, I_b, mu):
    """(A, B) making the composite and its slope match across the ends."""
    denom = 1.0 - mu
    if np.any(np.abs(denom) < _DEGENERATE_TOL):
        raise DegenerateLine("periodic closure: 1 - mu underflows")
    return I_b / denom, I_a / denom


def outflow_gammas(beta: float):
    """Time-quadrature weights of the outflow recursion at parameter beta.

    Returns (g0, g1, g2, G0, G1, G2, e^{-beta}).  The g_i integrate the
    quadratic endpoint-history interpolant against (beta/2) e^{-beta z} on
    one step; the G_i absorb the elimination of the unknown new endpoint
    value: G0 = beta^2 g0, G1 = g1 - g0 (beta^2 - 2), G2 = g2 - g0.
    """
    em = math.exp(-beta)
    b2 = beta * beta
    g0 = (1.0 - em) / (2.0 * b2) - (1.0 + em) / (4.0 * beta)
    g1 = -(1.0 - em) / b2 + em / beta + 0.5
    g2 = (1.0 - em) / (2.0 * b2) + (1.0 - 3.0 * em) / (4.0 * beta) - em / 2.0
    G0 = b2 * g0
    G1 = g1 - g0 * (b2 - 2.0)
    G2 = g2 - g0
    return g0, g1, g2, G0, G1, G2, em


@dataclass
class OutflowState:
    """Per-line outflow memory: previous coefficients and endpoint values.

    Zero initialization is consistent with compactly supported initial data
    that has not yet reached the boundary.
    """

    A_prev: float | np.ndarray = 0.0
    B_prev: float | np.ndarray = 0.0
    u_a_hist: tuple = (0.0, 0.0)   # (u^n(a), u^{n-1}(a))
    u_b_hist: tuple = (0.0, 0.0)


def outflow_coeffs(state: OutflowState, I_a, I_b, u_endpoints_hist, mu, params):
    """(A, B, new_state) from the eliminated outflow update.

    ``u_endpoints_hist`` is (u^n(a), u^{n-1}(a), u^n(b), u^{n-1}(b)).  The
    returned state stores the new coefficients and the endpoint history it
    was fed, ready for the next step.
    """
    gam = outflow_gammas(params.beta)
    u_a_n, u_a_nm1, u_b_n, u_b_nm1 = u_endpoints_hist
    row_a = outflow_row("a", state.A_prev, I_a, u_a_n, u_a_nm1, mu, gam)
    row_b = outflow_row("b", state.B_prev, I_b, u_b_n, u_b_nm1, mu, gam)
    A, B = solve_rows(row_a, row_b, singular_exc=SingularOutflowSystem)
    new_state = OutflowState(A, B, (u_a_n, u_a_nm1), (u_b_n, u_b_nm1))
    return A, B, new_state
