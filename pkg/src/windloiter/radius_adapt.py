"""Adaptive L1 ratio for loiter radii smaller than the nominal L1 length."""
from __future__ import annotations

import math

from .errors import InvalidArgumentError


def adapt_l1(q_L_nom: float, v_G_norm: float, R: float, e_t: float) -> tuple[float, float]:
    """Shrink the L1 length when it would violate the circle convergence criterion.

    Starting from the nominal ``L1 = q_L_nom * v_G_norm``: if ``L1 > R`` and the
    aircraft is within ``L1`` of the perimeter, the length ramps linearly with
    the track error down to ``R`` on the circle. ``v_G_norm`` must already be
    floored at the minimum ground speed.

    Returns ``(L1, q_L)``.
    """
    if not R > 0:
        raise InvalidArgumentError("loiter radius must be positive")
    if not v_G_norm > 0:
        raise InvalidArgumentError("ground speed must be positive (apply the floor first)")
    L1 = q_L_nom * v_G_norm
    q_L = q_L_nom
    abs_e = abs(e_t)
    if L1 > R and abs_e <= L1:
        L1 = max(abs_e, R)
        q_L = L1 / v_G_norm
    return L1, q_L


def effective_period(q_L: float, zeta_L: float) -> float:
    """L1 period implied by a (possibly adapted) ratio."""

    return q_L * math.pi / zeta_L
