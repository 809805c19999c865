"""Scheme parameters and field history shared by the 1D and 2D steppers.

The solver advances the wave equation implicitly: each time step requires
inverting the modified Helmholtz operator 1 - (1/alpha^2) d^2/dx^2, where
the kernel rate alpha couples the time step to the spatial decay length of
the inverse.  Three time discretizations are supported:

``dispersive``
    Time-centered second order, non-dissipative, alpha = beta/(c*dt) with
    0 < beta <= 2 required for A-stability.
``diffusive``
    BDF-based second order with inherent damping, alpha = sqrt(2)/(c*dt);
    beta is unused.
``dissipative``
    The centered scheme plus a tunable eps*D^2[u^{n-1}] damping term; the
    stability bound widens/narrows to 0 < beta <= sqrt(2 + 2*sqrt(1-eps)).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BetaOutOfRange, NonPositiveStep

VARIANTS = ("dispersive", "diffusive", "dissipative")


@dataclass(frozen=True)
class SchemeParams:
    """Immutable bundle of time-scheme constants.

    Attributes
    ----------
    c : wave speed
    dt : time step
    beta : dimensionless CFL-like parameter of the centered schemes
    alpha : kernel rate, beta/(c*dt) or sqrt(2)/(c*dt) depending on variant
    epsilon : artificial-dissipation strength in [0, 1)
    variant : one of ``dispersive``, ``diffusive``, ``dissipative``
    """

    c: float
    dt: float
    beta: float
    alpha: float
    epsilon: float = 0.0
    variant: str = "dispersive"


def dissipative_beta_max(epsilon: float) -> float:
    """Largest beta keeping the dissipative scheme A-stable."""
    return math.sqrt(2.0 + 2.0 * math.sqrt(1.0 - epsilon))


def make_params(c: float, dt: float, beta: float = 2.0, epsilon: float = 0.0,
                variant: str = "dispersive") -> SchemeParams:
    """Validate inputs and derive the kernel rate alpha.

    Raises
    ------
    NonPositiveStep
        If ``c`` or ``dt`` is not strictly positive.
    BetaOutOfRange
        If ``beta`` violates the variant's A-stability bound, or epsilon
        lies outside [0, 1).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if c <= 0.0 or dt <= 0.0:
        raise NonPositiveStep(f"need c > 0 and dt > 0, got c={c}, dt={dt}")
    if not 0.0 <= epsilon < 1.0:
        raise BetaOutOfRange(f"epsilon must lie in [0, 1), got {epsilon}")

    if variant == "diffusive":
        # beta plays no role; alpha fixed by the BDF discretization.
        alpha = math.sqrt(2.0) / (c * dt)
        return SchemeParams(c, dt, float("nan"), alpha, epsilon, variant)

    if beta <= 0.0:
        raise BetaOutOfRange(f"beta must be positive, got {beta}")
    beta_max = 2.0 if variant == "dispersive" else dissipative_beta_max(epsilon)
    if beta > beta_max * (1.0 + 1e-14):
        raise BetaOutOfRange(
            f"beta={beta} exceeds the A-stability bound {beta_max:.6g} "
            f"for the {variant} scheme (epsilon={epsilon})")
    alpha = beta / (c * dt)
    return SchemeParams(c, dt, beta, alpha, epsilon, variant)


@dataclass
class FieldHistory:
    """Solution values at the trailing time levels of one mesh.

    ``u_nm2`` is carried only by the three-level variants (diffusive,
    dissipative); the dispersive scheme needs two levels.
    """

    u_n: np.ndarray
    u_nm1: np.ndarray
    u_nm2: np.ndarray | None = None
    t_n: float = 0.0

    def shifted(self, u_new: np.ndarray, dt: float, keep_three: bool | None = None) -> "FieldHistory":
        """Return the history after accepting ``u_new`` as the newest level."""
        if keep_three is None:
            keep_three = self.u_nm2 is not None
        return FieldHistory(
            u_n=u_new,
            u_nm1=self.u_n,
            u_nm2=self.u_nm1 if keep_three else None,
            t_n=self.t_n + dt,
        )
