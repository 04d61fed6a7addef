"""Scenario catalog, INI-style config files and run summaries."""
from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .airspeed_comp import AirspeedPolicy
from .controller import MODES, GuidanceMode
from .errors import InvalidArgumentError
from .geom2d import Vec2NE
from .l1_core import GuidanceParams, LoiterPath
from .vehicle_sim import GuidanceBundle, SimParams, SimState, Trajectory, WindModel, run_scenario
from .wind_feas import FeasibilityParams


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    path: LoiterPath
    wind: WindModel
    mode: str = "original"
    modes: tuple[str, ...] = tuple(MODES)
    bundle: GuidanceBundle = field(default_factory=GuidanceBundle)
    sim: SimParams = field(default_factory=SimParams)
    init: Optional[SimState] = None
    description: str = ""

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InvalidArgumentError(f"unknown mode {self.mode!r}")

    def initial_state(self) -> SimState:
        """Explicit initial state, or the default: south of the center heading north at nominal airspeed."""
        if self.init is not None:
            return self.init
        R = self.path.radius
        offset = 100.0 if R >= 50.0 else 2.0 * R
        c = self.path.center
        return SimState(c[0] - offset, c[1], self.bundle.policy.v_A_nom, 0.0, 0.0)

    def with_mode(self, mode: str) -> "ScenarioSpec":
        return replace(self, mode=mode)

    def run(self, backend: str = "auto") -> Trajectory:
        return run_scenario(
            self.initial_state(), self.path, GuidanceMode.named(self.mode), self.bundle, self.wind, self.sim, backend=backend
        )


_ORIGIN = Vec2NE(0.0, 0.0)


def builtin_catalog() -> list[ScenarioSpec]:
    """The four studies: small radius, small radius in wind, constant over-wind, gusting over-wind."""
    return [
        ScenarioSpec(
            "small-radius",
            LoiterPath(_ORIGIN, 15.0, 1),
            WindModel.constant(0.0, 0.0),
            mode="adaptive",
            modes=("original", "adaptive"),
            description="15 m loiter in no wind",
        ),
        ScenarioSpec(
            "small-radius-wind",
            LoiterPath(_ORIGIN, 15.0, 1),
            WindModel.constant(0.0, 3.0),
            mode="adaptive",
            modes=("original", "adaptive"),
            description="15 m loiter in 3 m/s eastward wind",
        ),
        ScenarioSpec(
            "const-overwind",
            LoiterPath(_ORIGIN, 50.0, 1),
            WindModel.constant(0.0, 12.0),
            mode="prevention",
            modes=("original", "mitigation", "prevention"),
            description="50 m loiter in constant 12 m/s eastward wind",
        ),
        ScenarioSpec(
            "sine-gust",
            LoiterPath(_ORIGIN, 50.0, 1),
            WindModel.sinusoidal(Vec2NE(0.0, 10.0), 2.0, 30.0, Vec2NE(0.0, 1.0)),
            mode="prevention",
            modes=("original", "mitigation", "prevention"),
            description="50 m loiter in 10 m/s eastward wind with 2 m/s, 30 s sinusoidal gusts",
        ),
    ]


def get_scenario(name: str) -> ScenarioSpec:
    for spec in builtin_catalog():
        if spec.name == name:
            return spec
    raise InvalidArgumentError(f"unknown scenario {name!r}")


# ---- config files -----------------------------------------------------------

_FLOAT_SECTIONS = {
    "guidance": GuidanceParams,
    "feasibility": FeasibilityParams,
    "airspeed": AirspeedPolicy,
    "sim": SimParams,
}


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def dump_config(spec: ScenarioSpec) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep parameter case (P_L, v_A_nom, ...)
    cp["scenario"] = {"name": spec.name, "mode": spec.mode}
    c = spec.path.center
    cp["loiter"] = {
        "center_n": _fmt(c[0]), "center_e": _fmt(c[1]),
        "radius": _fmt(spec.path.radius), "direction": str(spec.path.direction),
    }
    w = spec.wind
    cp["wind"] = {
        "kind": w.kind, "mean_n": _fmt(w.mean[0]), "mean_e": _fmt(w.mean[1]),
        "amplitude": _fmt(w.amplitude), "period": _fmt(w.period),
        "direction_n": _fmt(w.direction[0]), "direction_e": _fmt(w.direction[1]),
    }
    records = {"guidance": spec.bundle.params, "feasibility": spec.bundle.feas,
               "airspeed": spec.bundle.policy, "sim": spec.sim}
    for section, rec in records.items():
        cp[section] = {f.name: _fmt(getattr(rec, f.name)) for f in fields(rec)}
    if spec.init is not None:
        s = spec.init
        cp["initial"] = {k: _fmt(getattr(s, k)) for k in ("n", "e", "v_A", "xi", "phi")}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _section_floats(cp: configparser.ConfigParser, section: str) -> dict:
    if not cp.has_section(section):
        return {}
    return {k: float(v) for k, v in cp.items(section)}


def parse_config(text: str, base: Optional[ScenarioSpec] = None) -> ScenarioSpec:
    """Build a scenario from config text; missing keys fall back to ``base`` or the named catalog entry."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidArgumentError(f"malformed config: {exc}") from exc

    name = cp.get("scenario", "name", fallback=None)
    if base is None:
        if name is not None and name in {s.name for s in builtin_catalog()}:
            base = get_scenario(name)
        else:
            base = ScenarioSpec(name or "custom", LoiterPath(_ORIGIN, 50.0, 1), WindModel.constant(0.0, 0.0))
    mode = cp.get("scenario", "mode", fallback=base.mode)

    lo = _section_floats(cp, "loiter")
    c = base.path.center
    path = LoiterPath(
        Vec2NE(lo.get("center_n", c[0]), lo.get("center_e", c[1])),
        lo.get("radius", base.path.radius),
        int(lo.get("direction", base.path.direction)),
    )

    w = base.wind
    wind_kind = cp.get("wind", "kind", fallback=w.kind)
    wv = {k: float(v) for k, v in cp.items("wind") if k != "kind"} if cp.has_section("wind") else {}
    wind = WindModel(
        wind_kind,
        Vec2NE(wv.get("mean_n", w.mean[0]), wv.get("mean_e", w.mean[1])),
        wv.get("amplitude", w.amplitude),
        wv.get("period", w.period),
        Vec2NE(wv.get("direction_n", w.direction[0]), wv.get("direction_e", w.direction[1])),
    )

    def merged(section: str, rec):
        vals = _section_floats(cp, section)
        unknown = set(vals) - {f.name for f in fields(rec)}
        if unknown:
            raise InvalidArgumentError(f"unknown keys in [{section}]: {sorted(unknown)}")
        if "decimation" in vals:
            vals["decimation"] = int(vals["decimation"])
        return replace(rec, **vals)

    bundle = GuidanceBundle(
        merged("guidance", base.bundle.params),
        merged("feasibility", base.bundle.feas),
        merged("airspeed", base.bundle.policy),
    )
    sim = merged("sim", base.sim)

    init = base.init
    if cp.has_section("initial"):
        iv = _section_floats(cp, "initial")
        ref = init or replace(base, bundle=bundle, path=path).initial_state()
        init = SimState(
            iv.get("n", ref.n), iv.get("e", ref.e), iv.get("v_A", ref.v_A), iv.get("xi", ref.xi), iv.get("phi", ref.phi)
        )
    return replace(base, name=name or base.name, mode=mode, path=path, wind=wind, bundle=bundle, sim=sim, init=init)


def load_config(path: str, base: Optional[ScenarioSpec] = None) -> ScenarioSpec:
    with open(path) as fh:
        return parse_config(fh.read(), base)


# ---- summaries --------------------------------------------------------------


@dataclass(frozen=True)
class RunSummary:
    final_abs_e_t: float
    mean_abs_e_t_last_quarter: float
    max_dphi_ref: float
    terminal_ground_speed: float
    v_A_ref_min: float
    v_A_ref_max: float
    P_eff_min: float
    P_eff_max: float

    @classmethod
    def from_trajectory(cls, traj: Trajectory) -> "RunSummary":
        e_t = np.abs(traj["e_t"])
        tail = e_t[int(0.75 * len(e_t)):]
        dphi = np.abs(np.diff(traj["phi_ref"]))
        return cls(
            final_abs_e_t=float(e_t[-1]),
            mean_abs_e_t_last_quarter=float(tail.mean()),
            max_dphi_ref=float(dphi.max()) if dphi.size else 0.0,
            terminal_ground_speed=float(traj.ground_speed[-1]),
            v_A_ref_min=float(traj["v_A_ref"].min()),
            v_A_ref_max=float(traj["v_A_ref"].max()),
            P_eff_min=float(traj["P_eff"].min()),
            P_eff_max=float(traj["P_eff"].max()),
        )

    def format(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            extra = f"  ({math.degrees(v):.3f} deg)" if f.name == "max_dphi_ref" else ""
            lines.append(f"{f.name} = {v:.6g}{extra}")
        return "\n".join(lines)
