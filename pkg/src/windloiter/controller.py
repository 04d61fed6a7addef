"""One guidance evaluation composing L1 loiter tracking, radius adaptation,
feasibility blending and airspeed compensation."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .airspeed_comp import AirspeedPolicy, airspeed_ref
from .errors import GuidanceFault, InvalidArgumentError
from .geom2d import Vec2NE, bearing_of
from .l1_core import (
    GuidanceOutput,
    GuidanceParams,
    L1Geometry,
    LoiterPath,
    accel_ref,
    error_angle,
    guarded_center_offset,
    l1_ratio_and_gain,
    loiter_geometry,
    roll_ref,
)
from .radius_adapt import adapt_l1, effective_period
from .wind_feas import (
    FeasibilityParams,
    buffer_ratio,
    nav_velocity,
    sigma_feas,
    wind_bearing_angle,
    wind_ratio,
)


@dataclass(frozen=True)
class GuidanceMode:
    adapt_radius: bool = False
    feasibility_blend: bool = False
    airspeed_compensation: bool = False

    def __post_init__(self) -> None:
        if self.airspeed_compensation and not self.feasibility_blend:
            raise InvalidArgumentError("airspeed compensation requires feasibility blending")

    @classmethod
    def named(cls, name: str) -> "GuidanceMode":
        try:
            return MODES[name]
        except KeyError:
            raise InvalidArgumentError(f"unknown guidance mode {name!r}; choose from {sorted(MODES)}") from None

    @property
    def name(self) -> str:
        for key, mode in MODES.items():
            if mode == self:
                return key
        return "custom"


# Each named configuration adds one extension on top of the previous one.
MODES: dict[str, GuidanceMode] = {
    "original": GuidanceMode(),
    "adaptive": GuidanceMode(adapt_radius=True),
    "mitigation": GuidanceMode(adapt_radius=True, feasibility_blend=True),
    "prevention": GuidanceMode(adapt_radius=True, feasibility_blend=True, airspeed_compensation=True),
}


@dataclass(frozen=True)
class GuidanceInput:
    p: Vec2NE
    v_G: Vec2NE
    w: Vec2NE
    path: LoiterPath


def _check(stage: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise GuidanceFault(stage, f"non-finite value {v!r}")


def guidance_step(
    inp: GuidanceInput,
    params: GuidanceParams,
    feas: FeasibilityParams,
    policy: AirspeedPolicy,
    mode: GuidanceMode,
) -> GuidanceOutput:
    """Evaluate the loiter guidance once.

    Order: ground speed floor, nominal ratio, optional radius adaptation, L1
    bearing, optional feasibility blend, error angle, acceleration and roll
    references, then the airspeed reference.
    """
    p, v_G, w, path = inp.p, inp.v_G, inp.w, inp.path
    _check("input", p[0], p[1], v_G[0], v_G[1], w[0], w[1])

    v_A = Vec2NE(v_G[0] - w[0], v_G[1] - w[1])
    v_G_raw = math.sqrt(v_G[0] * v_G[0] + v_G[1] * v_G[1])
    v_A_norm = math.sqrt(v_A[0] * v_A[0] + v_A[1] * v_A[1])
    w_norm = math.sqrt(w[0] * w[0] + w[1] * w[1])
    v_G_norm = max(v_G_raw, params.v_G_min)

    q_L, k_L = l1_ratio_and_gain(params)
    if mode.adapt_radius:
        d = guarded_center_offset(p, path, params.eps_center)[2]
        L1, q_L = adapt_l1(q_L, v_G_norm, path.radius, d - path.radius)
    else:
        L1 = q_L * v_G_norm
    _check("l1_ratio", q_L, L1)

    geom = loiter_geometry(p, v_G_norm, path, q_L, k_L, params.eps_center, L1=L1)
    _check("loiter_geometry", geom.gamma, geom.chi_L)
    chi_L = geom.chi_L
    l1_vec = Vec2NE(L1 * math.cos(chi_L), L1 * math.sin(chi_L))

    # ground course is undefined near zero ground speed; fall back to the air course
    if v_G_raw < params.v_G_min and v_A_norm > 0.0:
        chi = bearing_of(v_A)
    elif v_G_raw > 0.0:
        chi = bearing_of(v_G)
    else:
        raise GuidanceFault("course", "both ground and air velocity vanish")

    beta = wind_ratio(w_norm, v_A_norm)
    lam = wind_bearing_angle(w, l1_vec, feas)
    feas_eval = None
    if mode.feasibility_blend:
        feas_eval = sigma_feas(beta, lam, buffer_ratio(v_A_norm, feas), feas)
        sigma = feas_eval.sigma
        _, chi_nav, v_nav_norm = nav_velocity(v_G, v_A, sigma)
    else:
        sigma = 1.0
        chi_nav = chi
        v_nav_norm = v_G_raw
    _check("feasibility", sigma, beta, lam, chi_nav, v_nav_norm)

    eta = error_angle(chi_L, chi_nav)
    a_ref = accel_ref(k_L, v_nav_norm, q_L, eta)
    phi_ref = roll_ref(a_ref, params)
    _check("references", eta, a_ref, phi_ref)

    if mode.airspeed_compensation:
        v_A_ref = airspeed_ref(w_norm, sigma, policy)
    else:
        v_A_ref = policy.v_A_nom
    _check("airspeed_ref", v_A_ref)

    return GuidanceOutput(
        a_ref=a_ref,
        phi_ref=phi_ref,
        eta=eta,
        geometry=geom,
        sigma_feas=sigma,
        beta=beta,
        lam=lam,
        v_A_ref=v_A_ref,
        chi_nav=chi_nav,
        chi=chi,
        v_nav_norm=v_nav_norm,
        P_eff=effective_period(q_L, params.zeta_L),
        feasibility=feas_eval,
    )
