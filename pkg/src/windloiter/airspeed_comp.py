"""Airspeed reference increment that cancels excess wind on infeasible bearings."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError
from .geom2d import constrain


@dataclass(frozen=True)
class AirspeedPolicy:
    v_A_nom: float = 9.0
    v_A_max: float = 12.0

    def __post_init__(self) -> None:
        if not 0 < self.v_A_nom <= self.v_A_max:
            raise InvalidArgumentError("need 0 < v_A_nom <= v_A_max")

    @property
    def dv_max(self) -> float:
        return self.v_A_max - self.v_A_nom


def airspeed_ref(w_norm: float, sigma: float, policy: AirspeedPolicy) -> float:
    """Nominal airspeed plus the wind excess, scaled by bearing infeasibility ``1 - sigma``."""
    dv = constrain(w_norm - policy.v_A_nom, 0.0, policy.dv_max) * (1.0 - sigma)
    return policy.v_A_nom + dv
