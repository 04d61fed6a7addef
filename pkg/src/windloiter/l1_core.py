"""Baseline L2+ loiter guidance: L1 geometry, error angle, acceleration and roll references."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidArgumentError
from .geom2d import Vec2NE, bearing_of, constrain, wrap_pi

HALF_PI = 0.5 * math.pi
# floor on L1*d in the law-of-cosines denominator (m^2)
_L1D_FLOOR = 1e-9


@dataclass(frozen=True)
class GuidanceParams:
    """Operator tuning of the loiter guidance.

    ``P_L`` is the L1 period in seconds. The published parameter table prints
    its unit as metres; it is a period and is treated as such here.
    """

    P_L: float = 25.0
    zeta_L: float = 0.707
    phi_lim: float = math.radians(35.0)
    v_G_min: float = 2.0
    eps_center: float = 0.1
    g: float = 9.81

    def __post_init__(self) -> None:
        if not self.P_L > 0:
            raise InvalidArgumentError("P_L must be positive")
        if not 0 < self.zeta_L <= 1:
            raise InvalidArgumentError("zeta_L must lie in (0, 1]")
        if not 0 < self.phi_lim < HALF_PI:
            raise InvalidArgumentError("phi_lim must lie in (0, pi/2)")
        if not self.v_G_min > 0:
            raise InvalidArgumentError("v_G_min must be positive")
        if not self.eps_center > 0:
            raise InvalidArgumentError("eps_center must be positive")
        if not self.g > 0:
            raise InvalidArgumentError("g must be positive")


@dataclass(frozen=True)
class LoiterPath:
    center: Vec2NE
    radius: float
    direction: int = 1  # +1 clockwise, -1 counter-clockwise

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", Vec2NE(*self.center))
        if not self.radius > 0:
            raise InvalidArgumentError("loiter radius must be positive")
        if self.direction not in (1, -1):
            raise InvalidArgumentError("loiter direction must be +1 or -1")


@dataclass(frozen=True)
class L1Geometry:
    q_L: float
    k_L: float
    L1: float
    gamma: float
    chi_L: float
    e_t: float
    d: float = 0.0
    chi_d: float = 0.0


@dataclass(frozen=True)
class GuidanceOutput:
    a_ref: float
    phi_ref: float
    eta: float
    geometry: L1Geometry
    sigma_feas: float
    beta: float
    lam: float
    v_A_ref: float
    chi_nav: float
    chi: float = 0.0
    v_nav_norm: float = 0.0
    P_eff: float = 0.0
    feasibility: Optional[object] = field(default=None, compare=False)


def l1_ratio_and_gain(params: GuidanceParams) -> tuple[float, float]:
    """Return ``(q_L, k_L)`` from the L1 period and damping."""
    q_L = params.P_L * params.zeta_L / math.pi
    k_L = 4.0 * params.zeta_L * params.zeta_L
    return q_L, k_L


def guarded_center_offset(p: Vec2NE, path: LoiterPath, eps_center: float) -> tuple[float, float, float]:
    """Vector from aircraft to loiter center and its length, with the center singularity removed."""
    d_n = path.center[0] - p[0]
    d_e = path.center[1] - p[1]
    d = math.sqrt(d_n * d_n + d_e * d_e)
    if d < eps_center:
        d_n, d_e, d = eps_center, 0.0, eps_center
    return d_n, d_e, d


def loiter_geometry(
    p: Vec2NE,
    v_norm: float,
    path: LoiterPath,
    q_L: float,
    k_L: float = 0.0,
    eps_center: float = 0.1,
    L1: float | None = None,
) -> L1Geometry:
    """Compute the L1 bearing for loiter tracking.

    ``L1`` defaults to ``q_L * v_norm``; pass it explicitly when it has been
    adapted (see :func:`windloiter.radius_adapt.adapt_l1`).
    """
    d_n, d_e, d = guarded_center_offset(p, path, eps_center)
    if L1 is None:
        L1 = q_L * v_norm
    R = path.radius
    den = max(2.0 * L1 * d, 2.0 * _L1D_FLOOR)
    gamma = math.acos(constrain((L1 * L1 + d * d - R * R) / den, -1.0, 1.0))
    chi_d = bearing_of(Vec2NE(d_n, d_e))
    chi_L = wrap_pi(chi_d - path.direction * gamma)
    return L1Geometry(q_L=q_L, k_L=k_L, L1=L1, gamma=gamma, chi_L=chi_L, e_t=d - R, d=d, chi_d=chi_d)


def error_angle(chi_ref: float, chi: float) -> float:
    return constrain(wrap_pi(chi_ref - chi), -HALF_PI, HALF_PI)


def accel_ref(k_L: float, v_nav_norm: float, q_L: float, eta: float) -> float:
    if not q_L > 0:
        raise InvalidArgumentError("q_L must be positive")
    return k_L * v_nav_norm / q_L * math.sin(eta)


def roll_ref(a_ref: float, params: GuidanceParams) -> float:
    """Coordinated-turn roll reference, saturated at the roll limit."""
    return constrain(math.atan(a_ref / params.g), -params.phi_lim, params.phi_lim)
