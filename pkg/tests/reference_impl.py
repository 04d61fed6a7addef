"""Independent, literal transcriptions used as test oracles.

Kept deliberately naive: no shared helpers from the package so a bug in the
library cannot hide in both places.
"""
import math


def _wrap(a):
    r = math.remainder(a, 2.0 * math.pi)
    return math.pi if r <= -math.pi else r


def _clamp(x, lo, hi):
    return min(max(x, lo), hi)


def baseline_l1(p, v_G, center, R, s, P_L=25.0, zeta=0.707, phi_lim=math.radians(35.0),
                v_min=2.0, eps=0.1, g=9.81):
    """Plain L1 loiter guidance: fixed ratio, no wind handling. Returns (a_ref, phi_ref, eta)."""
    q = P_L * zeta / math.pi
    k = 4.0 * zeta * zeta
    vx, vy = v_G
    v_raw = math.sqrt(vx * vx + vy * vy)
    v = max(v_raw, v_min)
    L1 = q * v
    dn = center[0] - p[0]
    de = center[1] - p[1]
    d = math.sqrt(dn * dn + de * de)
    if d < eps:
        dn, de, d = eps, 0.0, eps
    cos_g = (L1 * L1 + d * d - R * R) / max(2.0 * L1 * d, 2e-9)
    gamma = math.acos(_clamp(cos_g, -1.0, 1.0))
    chi_d = math.atan2(de, dn)
    if chi_d == -math.pi:
        chi_d = math.pi
    chi_L = _wrap(chi_d - s * gamma)
    chi = math.atan2(vy, vx)
    if chi == -math.pi:
        chi = math.pi
    eta = _clamp(_wrap(chi_L - chi), -math.pi / 2, math.pi / 2)
    a = k * v_raw / q * math.sin(eta)
    phi = _clamp(math.atan(a / g), -phi_lim, phi_lim)
    return a, phi, eta


def algorithm_one(q_L, v_G, R, e_t):
    """Adaptive L1 rule, transcribed line by line."""
    L1 = q_L * v_G
    if L1 > R:
        if abs(e_t) <= L1:
            L1 = abs(e_t)
            if L1 < R:
                L1 = R
            q_L = L1 / v_G
    return L1, q_L
