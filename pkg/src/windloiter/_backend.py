"""Selects the simulation kernel at import: the compiled extension when it was
built, otherwise the pure-Python loop in :mod:`windloiter.vehicle_sim`.
Setting ``WINDLOITER_PURE_PYTHON=1`` forces the fallback."""
from __future__ import annotations

import os

import numpy as np

from .errors import InvalidArgumentError, SimulationFault

if os.environ.get("WINDLOITER_PURE_PYTHON"):
    _kernels = None
else:
    try:
        from . import _kernels
    except ImportError:  # extension not built
        _kernels = None

HAVE_COMPILED = _kernels is not None
DEFAULT = "compiled" if HAVE_COMPILED else "python"

# stage names reported by the kernel's fault codes
_FAULTS = {
    1: "airspeed at or below model floor",
    2: "guidance fault at stage 'input'",
    3: "guidance fault at stage 'l1_ratio'",
    4: "guidance fault at stage 'loiter_geometry'",
    5: "guidance fault at stage 'course'",
    6: "guidance fault at stage 'sigma_feas'",
    7: "guidance fault at stage 'feasibility'",
    8: "guidance fault at stage 'references'",
    9: "guidance fault at stage 'airspeed_ref'",
}


def resolve(backend: str) -> str:
    if backend == "auto":
        return DEFAULT
    if backend == "python":
        return "python"
    if backend == "compiled":
        if not HAVE_COMPILED:
            raise InvalidArgumentError("compiled kernel is not available; build the extension or use backend='python'")
        return "compiled"
    raise InvalidArgumentError(f"unknown backend {backend!r}")


def run_compiled(init, path, mode, bundle, w_model, p) -> np.ndarray:
    from .vehicle_sim import COLUMNS

    gp, fp, ap = bundle.params, bundle.feas, bundle.policy
    guidance = np.array([gp.P_L, gp.zeta_L, gp.phi_lim, gp.v_G_min, gp.eps_center, gp.g,
                         fp.v_A_buf, fp.lambda_co, fp.w_eps, ap.v_A_nom, ap.v_A_max], dtype=float)
    loiter = np.array([path.center[0], path.center[1], path.radius, float(path.direction)], dtype=float)
    sinusoidal = w_model.kind == "sinusoidal"
    wind = np.array([w_model.mean[0], w_model.mean[1], w_model.amplitude, w_model.period,
                     w_model.direction[0], w_model.direction[1]], dtype=float)
    sim = np.array([p.tau_v, p.tau_phi, p.g, p.dt], dtype=float)
    x0 = np.array(init.as_tuple(), dtype=float)
    n = p.n_steps
    out = np.empty((n + 1, len(COLUMNS)), dtype=float)
    flags = (1 if mode.adapt_radius else 0) | (2 if mode.feasibility_blend else 0) | (4 if mode.airspeed_compensation else 0)
    code, step = _kernels.simulate(x0, guidance, loiter, wind, int(sinusoidal), sim, flags, n, int(p.decimation), out)
    if code != 0:
        raise SimulationFault(_FAULTS.get(code, f"kernel fault {code}"), step=step)
    return out
