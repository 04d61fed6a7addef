"""Bearing feasibility in excess wind.

The wind-bearing angle ``lam`` is measured from the wind vector to the L1
look-ahead vector: 0 is a downwind bearing, +-pi upwind. ``beta`` is the wind
ratio (wind speed over airspeed). Only ``|lam|`` enters the feasibility
function, and every bearing at or beyond crosswind is treated as crosswind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDirectionError, GuidanceFault, InvalidArgumentError
from .geom2d import Vec2NE, bearing_of, constrain, cross_z, dot

HALF_PI = 0.5 * math.pi
AIRSPEED_FLOOR = 0.1  # m/s, denominator floor for the wind and buffer ratios
NAV_SPEED_FLOOR = 1e-3  # m/s


@dataclass(frozen=True)
class WindState:
    w: Vec2NE

    @property
    def speed(self) -> float:
        return math.sqrt(self.w[0] * self.w[0] + self.w[1] * self.w[1])


@dataclass(frozen=True)
class FeasibilityParams:
    v_A_buf: float = 1.0
    lambda_co: float = math.radians(15.0)
    w_eps: float = 0.01

    def __post_init__(self) -> None:
        if not self.v_A_buf >= 0:
            raise InvalidArgumentError("v_A_buf must be non-negative")
        if not 0 < self.lambda_co < HALF_PI:
            raise InvalidArgumentError("lambda_co must lie in (0, pi/2)")
        if not self.w_eps > 0:
            raise InvalidArgumentError("w_eps must be positive")


@dataclass(frozen=True)
class FeasibilityEval:
    beta: float
    beta_buf: float
    lam: float
    beta_plus: float
    beta_minus: float
    sigma: float


def wind_ratio(w_norm: float, v_A_norm: float) -> float:
    return w_norm / max(v_A_norm, AIRSPEED_FLOOR)


def buffer_ratio(v_A_norm: float, params: FeasibilityParams) -> float:
    return params.v_A_buf / max(v_A_norm, AIRSPEED_FLOOR)


def wind_bearing_angle(w: Vec2NE, l1_vec: Vec2NE, params: FeasibilityParams) -> float:
    """Signed angle from the wind vector to the look-ahead vector, in [-pi, pi].

    Returns 0 when the wind is below ``params.w_eps``.
    """
    if l1_vec[0] == 0.0 and l1_vec[1] == 0.0:
        raise DegenerateDirectionError("look-ahead vector has zero length")
    if math.sqrt(w[0] * w[0] + w[1] * w[1]) < params.w_eps:
        return 0.0
    return math.atan2(cross_z(w, l1_vec), dot(w, l1_vec))


def binary_feasibility(beta: float, lam: float) -> bool:
    """Exact feasible/infeasible classification of a bearing, symmetric in ``lam``."""
    lam_sym = constrain(abs(lam), 0.0, math.pi)
    infeasible = beta * math.sin(lam_sym) >= 1.0 and lam_sym >= HALF_PI
    return not infeasible


def sigma_legacy(beta: float, lam: float) -> float:
    """Earlier square-root transition function, kept for comparison only.

    Uses the same crosswind-saturated angle as :func:`sigma_feas`. It is
    continuous but not smooth at the boundary and singular at crosswind with
    ``beta`` near one.
    """
    lam_c = constrain(abs(lam), 0.0, HALF_PI)
    c = math.cos(lam_c)
    s = beta * math.sin(lam_c)
    rad = 1.0 - s * s
    if rad < 0.0:
        return 0.0
    if abs(c) < 1e-9:
        return 1.0 if binary_feasibility(beta, HALF_PI) else 0.0
    return constrain(math.sqrt(rad) / c, 0.0, 1.0)


def beta_bounds(lam: float, beta_buf: float, params: FeasibilityParams) -> tuple[float, float]:
    """Upper and lower wind-ratio limits ``(beta_plus, beta_minus)`` of the transition band."""
    lam_ctsr = constrain(abs(lam), 0.0, HALF_PI)
    lam_co = params.lambda_co
    if lam_ctsr < lam_co:
        s_co = math.sin(lam_co)
        m_co = math.cos(lam_co) / (s_co * s_co)
        beta_plus = 1.0 / s_co + m_co * (lam_co - lam_ctsr)
        beta_minus = (1.0 / s_co - 2.0) * beta_buf + 1.0 + beta_buf * m_co * (lam_co - lam_ctsr)
    else:
        inv_s = 1.0 / math.sin(lam_ctsr)
        beta_plus = inv_s
        beta_minus = (inv_s - 2.0) * beta_buf + 1.0
    return beta_plus, beta_minus


def sigma_feas(beta: float, lam: float, beta_buf: float, params: FeasibilityParams) -> FeasibilityEval:
    """Smooth bearing feasibility in [0, 1]: 1 feasible, 0 infeasible.

    A cos^2 ramp across ``[beta_minus, beta_plus]`` keeps the value and its
    slope continuous at both ends of the band.
    """
    beta_plus, beta_minus = beta_bounds(lam, beta_buf, params)
    if beta_plus < beta_minus:
        raise GuidanceFault("sigma_feas", f"empty transition band (beta_buf={beta_buf:g})")
    return FeasibilityEval(beta, beta_buf, lam, beta_plus, beta_minus, _ramp(beta, beta_plus, beta_minus))


def _ramp(beta: float, beta_plus: float, beta_minus: float) -> float:
    if beta > beta_plus:
        return 0.0
    if beta > beta_minus:
        x = constrain((beta - beta_minus) / (beta_plus - beta_minus), 0.0, 1.0)
        c = math.cos(HALF_PI * x)
        return c * c
    return 1.0


def nav_velocity(v_G: Vec2NE, v_A: Vec2NE, sigma: float) -> tuple[Vec2NE, float, float]:
    """Blend ground and air velocity by feasibility.

    Returns ``(v_nav, chi_nav, |v_nav|)``. A vanishing blend falls back to the
    air velocity.
    """
    v_nav = Vec2NE(sigma * v_G[0] + (1.0 - sigma) * v_A[0], sigma * v_G[1] + (1.0 - sigma) * v_A[1])
    v_norm = math.sqrt(v_nav[0] * v_nav[0] + v_nav[1] * v_nav[1])
    if v_norm < NAV_SPEED_FLOOR:
        v_nav = Vec2NE(v_A[0], v_A[1])
        v_norm = math.sqrt(v_nav[0] * v_nav[0] + v_nav[1] * v_nav[1])
    return v_nav, bearing_of(v_nav), v_norm


def sigma_feas_grid(betas, lams, beta_buf: float, params: FeasibilityParams, backend: str = "auto") -> np.ndarray:
    """:func:`sigma_feas` over the outer product of ``betas`` and ``lams``, shape ``(len(betas), len(lams))``."""
    from . import _backend

    b = np.ascontiguousarray(betas, dtype=float)
    lam = np.ascontiguousarray(lams, dtype=float)
    out = np.empty((b.size, lam.size))
    if _backend.resolve(backend) == "compiled":
        if _backend._kernels.sigma_grid(b, lam, float(beta_buf), float(params.lambda_co), out):
            raise GuidanceFault("sigma_feas", f"empty transition band (beta_buf={beta_buf:g})")
        return out
    # the band edges depend on lambda only
    bounds = [beta_bounds(lj, beta_buf, params) for lj in lam.tolist()]
    if any(bp < bm for bp, bm in bounds):
        raise GuidanceFault("sigma_feas", f"empty transition band (beta_buf={beta_buf:g})")
    for i, bi in enumerate(b.tolist()):
        out[i] = [_ramp(bi, bp, bm) for bp, bm in bounds]
    return out
