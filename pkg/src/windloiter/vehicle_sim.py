"""Planar point-mass fixed-wing model with first-order airspeed and roll lags.

State ``(n, e, v_A, xi, phi)``: position north/east, airspeed, heading of the
air-relative velocity, roll. Integration is classical RK4 with the guidance
output held between guidance updates and the wind sampled at stage times.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterator, NamedTuple, Optional, Union

import numpy as np

from . import _backend
from .airspeed_comp import AirspeedPolicy
from .controller import GuidanceInput, GuidanceMode, guidance_step
from .errors import GuidanceFault, InvalidArgumentError, SimulationFault
from .geom2d import TWO_PI, Vec2NE
from .l1_core import GuidanceOutput, GuidanceParams, LoiterPath
from .wind_feas import FeasibilityParams

MIN_AIRSPEED = 0.1  # m/s, below this the turn-rate model is invalid

CSV_COLUMNS = (
    "t", "n", "e", "v_A", "xi", "phi", "phi_ref", "v_A_ref", "a_ref", "sigma_feas",
    "beta", "lambda", "e_t", "L1", "q_L", "P_eff", "w_n", "w_e", "chi", "eta",
)
EXTRA_COLUMNS = ("vg_n", "vg_e", "chi_nav", "chi_L", "v_nav_norm")
COLUMNS = CSV_COLUMNS + EXTRA_COLUMNS
COLUMN_INDEX = {name: i for i, name in enumerate(COLUMNS)}


@dataclass(frozen=True)
class SimState:
    n: float
    e: float
    v_A: float
    xi: float
    phi: float
    t: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.n, self.e, self.v_A, self.xi, self.phi, self.t)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidArgumentError("state components must be finite")
        if not self.v_A > 0:
            raise InvalidArgumentError("airspeed must be positive")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.n, self.e, self.v_A, self.xi, self.phi)

    def air_velocity(self) -> Vec2NE:
        return Vec2NE(self.v_A * math.cos(self.xi), self.v_A * math.sin(self.xi))


@dataclass(frozen=True)
class SimParams:
    tau_v: float = 1.0
    tau_phi: float = 0.5
    g: float = 9.81
    dt: float = 0.01
    t_end: float = 120.0
    decimation: int = 1  # integration steps per guidance update

    def __post_init__(self) -> None:
        if not (self.tau_v > 0 and self.tau_phi > 0 and self.g > 0):
            raise InvalidArgumentError("time constants and g must be positive")
        if not 0 < self.dt <= 0.1:
            raise InvalidArgumentError("dt must lie in (0, 0.1]")
        if not self.t_end > 0:
            raise InvalidArgumentError("t_end must be positive")
        if int(self.decimation) != self.decimation or self.decimation < 1:
            raise InvalidArgumentError("decimation must be a positive integer")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))


@dataclass(frozen=True)
class WindModel:
    kind: str = "constant"
    mean: Vec2NE = Vec2NE(0.0, 0.0)
    amplitude: float = 0.0
    period: float = 1.0
    direction: Vec2NE = Vec2NE(0.0, 1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", Vec2NE(*self.mean))
        object.__setattr__(self, "direction", Vec2NE(*self.direction))
        if self.kind not in ("constant", "sinusoidal"):
            raise InvalidArgumentError(f"unknown wind kind {self.kind!r}")
        if self.kind == "sinusoidal" and not (self.period > 0 and self.amplitude >= 0):
            raise InvalidArgumentError("sinusoidal wind needs period > 0 and amplitude >= 0")

    @classmethod
    def constant(cls, n: float, e: float) -> "WindModel":
        return cls("constant", Vec2NE(n, e))

    @classmethod
    def sinusoidal(cls, mean: Vec2NE, amplitude: float, period: float, direction: Vec2NE) -> "WindModel":
        return cls("sinusoidal", Vec2NE(*mean), amplitude, period, Vec2NE(*direction))


@dataclass(frozen=True)
class GuidanceBundle:
    """Every tuning record the guidance needs, with the published defaults."""

    params: GuidanceParams = field(default_factory=GuidanceParams)
    feas: FeasibilityParams = field(default_factory=FeasibilityParams)
    policy: AirspeedPolicy = field(default_factory=AirspeedPolicy)


def wind_at(model: WindModel, t: float) -> Vec2NE:
    if model.kind == "constant":
        return model.mean
    s = model.amplitude * math.sin(TWO_PI * t / model.period)
    return Vec2NE(model.mean[0] + model.direction[0] * s, model.mean[1] + model.direction[1] * s)


def _deriv(x: tuple, phi_ref: float, v_A_ref: float, w: Vec2NE, p: SimParams) -> tuple:
    n, e, v_A, xi, phi = x
    if not v_A > MIN_AIRSPEED:
        raise SimulationFault(f"airspeed {v_A:.6g} m/s at or below model floor {MIN_AIRSPEED}")
    return (
        v_A * math.cos(xi) + w[0],
        v_A * math.sin(xi) + w[1],
        (v_A_ref - v_A) / p.tau_v,
        p.g * math.tan(phi) / v_A,
        (phi_ref - phi) / p.tau_phi,
    )


class StateRate(NamedTuple):
    n_dot: float
    e_dot: float
    v_A_dot: float
    xi_dot: float
    phi_dot: float


def derivatives(s: SimState, phi_ref: float, v_A_ref: float, w: Vec2NE, p: SimParams) -> StateRate:
    return StateRate(*_deriv(s.as_tuple(), phi_ref, v_A_ref, w, p))


def _rk4(x: tuple, t: float, phi_ref: float, v_A_ref: float, w_model: WindModel, p: SimParams) -> tuple:
    dt = p.dt
    h2 = 0.5 * dt
    w0 = wind_at(w_model, t)
    wh = wind_at(w_model, t + h2)
    w1 = wind_at(w_model, t + dt)
    k1 = _deriv(x, phi_ref, v_A_ref, w0, p)
    k2 = _deriv(tuple(a + h2 * b for a, b in zip(x, k1)), phi_ref, v_A_ref, wh, p)
    k3 = _deriv(tuple(a + h2 * b for a, b in zip(x, k2)), phi_ref, v_A_ref, wh, p)
    k4 = _deriv(tuple(a + dt * b for a, b in zip(x, k3)), phi_ref, v_A_ref, w1, p)
    dt6 = dt / 6.0
    return tuple(a + dt6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(x, k1, k2, k3, k4))


def step_rk4(s: SimState, controls: tuple[float, float], w_model: WindModel, p: SimParams) -> SimState:
    """Advance one step of ``p.dt`` with ``controls = (phi_ref, v_A_ref)`` held constant."""
    x = _rk4(s.as_tuple(), s.t, controls[0], controls[1], w_model, p)
    return SimState(*x, t=s.t + p.dt)


@dataclass
class Trajectory:
    """Time-series log: one row per integration step, columns per :data:`COLUMNS`."""

    data: np.ndarray
    dt: float
    backend: str = "python"

    def __len__(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, COLUMN_INDEX[name]]

    def state(self, k: int) -> SimState:
        row = self.data[k]
        return SimState(row[1], row[2], row[3], row[4], row[5], t=row[0])

    def rows(self) -> Iterator[dict[str, float]]:
        for row in self.data:
            yield dict(zip(COLUMNS, row.tolist()))

    @property
    def ground_speed(self) -> np.ndarray:
        return np.hypot(self["vg_n"], self["vg_e"])

    def write_csv(self, out: Union[str, os.PathLike, IO[str]]) -> None:
        """Write the documented CSV columns, 9 significant digits."""
        if isinstance(out, (str, os.PathLike)):
            with open(out, "w", newline="") as fh:
                self.write_csv(fh)
            return
        out.write(",".join(CSV_COLUMNS) + "\n")
        block = self.data[:, : len(CSV_COLUMNS)]
        for row in block.tolist():
            out.write(",".join(format(v, ".9g") for v in row) + "\n")

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def read_trajectory_csv(path: Union[str, os.PathLike]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in r] for r in reader])
    return {name: rows[:, i] for i, name in enumerate(header)}


def _row(t: float, x: tuple, out: GuidanceOutput, w: Vec2NE, vg: Vec2NE) -> list[float]:
    g = out.geometry
    return [
        t, x[0], x[1], x[2], x[3], x[4], out.phi_ref, out.v_A_ref, out.a_ref, out.sigma_feas,
        out.beta, out.lam, g.e_t, g.L1, g.q_L, out.P_eff, w[0], w[1], out.chi, out.eta,
        vg[0], vg[1], out.chi_nav, g.chi_L, out.v_nav_norm,
    ]


def _run_python(
    init: SimState,
    path: LoiterPath,
    mode: GuidanceMode,
    bundle: GuidanceBundle,
    w_model: WindModel,
    p: SimParams,
) -> np.ndarray:
    N = p.n_steps
    x = init.as_tuple()
    rows = []
    out: Optional[GuidanceOutput] = None
    for k in range(N + 1):
        t = k * p.dt
        w = wind_at(w_model, t)
        vg = Vec2NE(x[2] * math.cos(x[3]) + w[0], x[2] * math.sin(x[3]) + w[1])
        try:
            if k % p.decimation == 0:
                inp = GuidanceInput(Vec2NE(x[0], x[1]), vg, w, path)
                out = guidance_step(inp, bundle.params, bundle.feas, bundle.policy, mode)
            assert out is not None
            rows.append(_row(t, x, out, w, vg))
            if k < N:
                x = _rk4(x, t, out.phi_ref, out.v_A_ref, w_model, p)
        except SimulationFault as exc:
            raise SimulationFault(str(exc), step=k) from exc
        except GuidanceFault as exc:
            raise SimulationFault(f"guidance fault at stage '{exc.stage}'", step=k) from exc
    return np.array(rows, dtype=float)


def run_scenario(
    init: SimState,
    path: LoiterPath,
    mode: GuidanceMode,
    bundle: GuidanceBundle,
    w_model: WindModel,
    p: SimParams,
    backend: str = "auto",
) -> Trajectory:
    """Simulate the closed loop from ``init`` to ``p.t_end``.

    ``backend`` is ``"auto"`` (compiled kernel when built), ``"compiled"`` or
    ``"python"``. Both produce the same rows.
    """
    use = _backend.resolve(backend)
    if use == "compiled":
        data = _backend.run_compiled(init, path, mode, bundle, w_model, p)
    else:
        data = _run_python(init, path, mode, bundle, w_model, p)
    return Trajectory(data=data, dt=p.dt, backend=use)
