"""Wind-aware L1 loiter guidance and a planar fixed-wing simulator.

The guidance extends L2+ style loiter tracking with an adaptive L1 ratio for
small radii, feasibility-blended navigation velocity for over-wind run-away
mitigation, and airspeed reference compensation for run-away prevention.
"""
from .airspeed_comp import AirspeedPolicy, airspeed_ref
from .controller import MODES, GuidanceInput, GuidanceMode, guidance_step
from .errors import DegenerateDirectionError, GuidanceFault, InvalidArgumentError, SimulationFault
from .geom2d import Vec2NE, bearing_of, constrain, cross_z, dot, norm, wrap_pi
from .l1_core import GuidanceOutput, GuidanceParams, L1Geometry, LoiterPath
from .radius_adapt import adapt_l1
from .scenarios import RunSummary, ScenarioSpec, builtin_catalog, get_scenario
from .vehicle_sim import GuidanceBundle, SimParams, SimState, Trajectory, WindModel, run_scenario
from .wind_feas import FeasibilityEval, FeasibilityParams, sigma_feas

__all__ = [
    "AirspeedPolicy", "airspeed_ref", "MODES", "GuidanceInput", "GuidanceMode", "guidance_step",
    "DegenerateDirectionError", "GuidanceFault", "InvalidArgumentError", "SimulationFault",
    "Vec2NE", "bearing_of", "constrain", "cross_z", "dot", "norm", "wrap_pi",
    "GuidanceOutput", "GuidanceParams", "L1Geometry", "LoiterPath", "adapt_l1",
    "GuidanceBundle", "SimParams", "SimState", "Trajectory", "WindModel", "run_scenario",
    "FeasibilityEval", "FeasibilityParams", "sigma_feas",
    "RunSummary", "ScenarioSpec", "builtin_catalog", "get_scenario",
]
