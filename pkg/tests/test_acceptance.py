"""Acceptance criteria, one test each. Every test reports a single PASS/FAIL line
(see the "acceptance criteria" section of the pytest summary) before asserting."""
import math
import random
import time
from dataclasses import replace

import numpy as np

from reference_impl import algorithm_one, baseline_l1
from windloiter import _backend
from windloiter.controller import MODES, GuidanceInput, guidance_step
from windloiter.geom2d import Vec2NE
from windloiter.l1_core import GuidanceParams, LoiterPath
from windloiter.radius_adapt import adapt_l1
from windloiter.scenarios import ScenarioSpec, get_scenario
from windloiter.vehicle_sim import GuidanceBundle, SimParams, WindModel
from windloiter.wind_feas import FeasibilityParams, beta_bounds, binary_feasibility, sigma_feas, sigma_feas_grid

PARAMS = GuidanceParams()
PHI_LIM = PARAMS.phi_lim
TWO_DEG = math.radians(2.0)


def timed(spec, backend="auto"):
    t0 = time.perf_counter()
    traj = spec.run(backend=backend)
    return traj, time.perf_counter() - t0


def last_quarter(x):
    return x[int(0.75 * len(x)):]


def final_orbits(traj, center, n_orbits=2):
    """Boolean mask over the samples covering the last ``n_orbits`` revolutions about ``center``."""
    ang = np.unwrap(np.arctan2(traj["e"] - center[1], traj["n"] - center[0]))
    swept = np.abs(ang - ang[-1])
    return swept <= 2.0 * math.pi * n_orbits


def dphi(traj):
    return np.abs(np.diff(traj["phi_ref"]))


def test_c1_baseline_convergence(report):
    spec = ScenarioSpec("baseline", LoiterPath(Vec2NE(0.0, 0.0), 50.0, 1), WindModel.constant(0.0, 0.0), "original")
    traj, elapsed = timed(spec)
    mean_et = float(np.mean(np.abs(last_quarter(traj["e_t"]))))
    v = float(np.mean(last_quarter(traj.ground_speed)))
    oracle = math.atan(v * v / (9.81 * 50.0))
    phi = float(np.mean(np.abs(last_quarter(traj["phi"]))))
    err_deg = math.degrees(abs(phi - oracle))
    ok = mean_et < 0.5 and err_deg < 0.5 and elapsed < 1.0
    report("C1 baseline loiter convergence", ok,
           f"mean|e_t|={mean_et:.4f} m (<0.5), roll {math.degrees(phi):.4f} vs oracle {math.degrees(oracle):.4f} deg "
           f"(err {err_deg:.4f} < 0.5), runtime {elapsed:.3f} s (<1) [{traj.backend}]")
    assert ok


def test_c2_small_radius(report):
    spec = get_scenario("small-radius")
    ada = spec.with_mode("adaptive").run()
    orig = spec.with_mode("original").run()
    ada_mean = float(np.mean(np.abs(last_quarter(ada["e_t"]))))
    orig_tail = np.abs(last_quarter(orig["e_t"]))
    orig_mean = float(np.mean(orig_tail))
    # non-convergent: the orbit keeps a persistent offset or oscillation
    orig_bad = orig_mean > 5.0 or float(np.ptp(orig_tail)) > 1.0
    p_eff_ok = bool(np.all(ada["P_eff"] <= PARAMS.P_L * (1 + 1e-12)) and np.all(orig["P_eff"] <= PARAMS.P_L * (1 + 1e-12)))
    on = (np.abs(ada["e_t"]) < 0.5) & (ada["t"] > 60.0)
    oracle = math.pi * 15.0 / (PARAMS.zeta_L * ada.ground_speed[on])
    rel = float(np.max(np.abs(ada["P_eff"][on] / oracle - 1.0))) if on.any() else math.inf
    ok = ada_mean < 1.0 and orig_bad and p_eff_ok and rel <= 0.02
    report("C2 small-radius convergence", ok,
           f"adaptive mean|e_t|={ada_mean:.4f} m (<1), original mean|e_t|={orig_mean:.3f} m (>5 or limit cycle), "
           f"P_eff<=P_L {p_eff_ok}, on-circle P_eff rel err {rel:.2e} (<=0.02, {int(on.sum())} samples)")
    assert ok


def test_c3_moderate_wind(report):
    spec = get_scenario("small-radius-wind")
    c = spec.path.center
    ada = spec.with_mode("adaptive").run()
    orig = spec.with_mode("original").run()
    ma = final_orbits(ada, c)
    mo = final_orbits(orig, c)
    ada_mean = float(np.mean(np.abs(ada["e_t"][ma])))
    orig_mean = float(np.mean(np.abs(orig["e_t"][mo])))
    p = ada["P_eff"][ma]
    spread = float((p.max() - p.min()) / p.max())
    ok = ada_mean < orig_mean and spread > 0.10
    report("C3 moderate-wind adaptation", ok,
           f"final two orbits mean|e_t| adaptive {ada_mean:.3f} < original {orig_mean:.3f} m, "
           f"P_eff range {p.min():.2f}..{p.max():.2f} s (spread {spread:.1%} > 10%)")
    assert ok


def test_c4_runaway_mitigation(report):
    spec = get_scenario("const-overwind")
    mit = spec.with_mode("mitigation").run()
    orig = spec.with_mode("original").run()
    late = mit["t"][1:] > 20.0
    mit_max = float(dphi(mit)[late].max())
    orig_max = float(dphi(orig).max())
    ok = mit_max < TWO_DEG and orig_max > PHI_LIM
    report("C4 run-away mitigation", ok,
           f"mitigation max|dphi_ref| (t>20 s) {math.degrees(mit_max):.4f} deg (<2), "
           f"original max|dphi_ref| {math.degrees(orig_max):.2f} deg (>{math.degrees(PHI_LIM):.0f})")
    assert ok


def test_c5_runaway_prevention(report):
    spec = get_scenario("const-overwind").with_mode("prevention")
    traj, elapsed = timed(spec)
    vg = float(traj.ground_speed[-1])
    va_ref = float(traj["v_A_ref"][-1])
    heading_err = abs(math.remainder(float(traj["xi"][-1]) + math.pi / 2, 2 * math.pi))
    k30 = int(round((spec.sim.t_end - 30.0) / spec.sim.dt))
    drift = math.hypot(traj["n"][-1] - traj["n"][k30], traj["e"][-1] - traj["e"][k30])
    ok = vg < 0.1 and 11.9 <= va_ref <= 12.0 and math.degrees(heading_err) < 2.0 and drift < 3.0 and elapsed < 2.0
    report("C5 run-away prevention", ok,
           f"terminal |v_G| {vg:.2e} m/s (<0.1), v_A_ref {va_ref:.4f} (in [11.9,12]), "
           f"heading off west {math.degrees(heading_err):.4f} deg (<2), drift last 30 s {drift:.4f} m (<3), "
           f"runtime {elapsed:.3f} s (<2) [{traj.backend}]")
    assert ok


def test_c6_sinusoidal_gust(report):
    spec = get_scenario("sine-gust")
    prev = spec.with_mode("prevention").run()
    mit = spec.with_mode("mitigation").run()
    dv = float(np.max(np.abs(np.diff(prev["v_A_ref"]))))
    w = np.hypot(prev["w_n"], prev["w_e"])
    low = prev["sigma_feas"] < 0.1
    track = float(np.max(np.abs(prev["v_A_ref"][low] - np.maximum(w[low], 9.0)))) if low.any() else 0.0
    jp = float(dphi(prev).max())
    jm = float(dphi(mit).max())
    ok = dv < 0.05 and track <= 0.5 and jp <= TWO_DEG and jm <= TWO_DEG
    report("C6 sinusoidal gust", ok,
           f"max|dv_A_ref| {dv:.4f} m/s (<0.05), tracking err when sigma<0.1 {track:.4f} m/s (<=0.5, "
           f"{int(low.sum())} samples), max|dphi_ref| prevention {math.degrees(jp):.4f}, "
           f"mitigation {math.degrees(jm):.4f} deg (<=2, whole run)")
    assert ok


def test_c7_sigma_property_suite(report):
    feas = FeasibilityParams()
    buf = 1.0 / 9.0
    t0 = time.perf_counter()
    betas = np.linspace(0.0, 10.0, 1000)
    lams = np.linspace(-math.pi, math.pi, 1000)
    grid = sigma_feas_grid(betas, lams, buf, feas)
    mirrored = sigma_feas_grid(betas, -lams, buf, feas)
    bounds = bool(np.all((grid >= 0.0) & (grid <= 1.0)))
    monotone = bool(np.all(np.diff(grid, axis=0) <= 0.0))
    symmetric = bool(np.array_equal(grid, mirrored))

    h = 1e-5
    worst_slope = 0.0
    for lam in lams.tolist():
        bp, bm = beta_bounds(lam, buf, feas)
        for edge in (bm, bp):
            s = (sigma_feas(edge + h, lam, buf, feas).sigma - sigma_feas(edge - h, lam, buf, feas).sigma) / (2 * h)
            worst_slope = max(worst_slope, abs(s))

    lc = feas.lambda_co
    cont = 0.0
    for b in (0.0, buf):
        lo = beta_bounds(np.nextafter(lc, 0.0), b, feas)
        at = beta_bounds(lc, b, feas)
        cont = max(cont, abs(at[0] - 1.0 / math.sin(lc)), abs(lo[0] - at[0]), abs(lo[1] - at[1]))

    # binary consistency with a vanishing buffer, on the grid part with |lambda| >= lambda_co
    tiny = 1e-9
    g0 = sigma_feas_grid(betas, lams, tiny, feas)
    consistent = True
    for j, lam in enumerate(lams.tolist()):
        if abs(lam) < lc:
            continue
        bp, bm = beta_bounds(lam, tiny, feas)
        for i, b in enumerate(betas.tolist()):
            if not binary_feasibility(b - 1e-3, lam) and g0[i, j] != 0.0:
                consistent = False
            if b < bm and g0[i, j] != 1.0:
                consistent = False
    elapsed = time.perf_counter() - t0
    ok = bounds and monotone and symmetric and worst_slope < 1e-3 and cont <= 1e-12 and consistent and elapsed < 5.0
    report("C7 sigma_feas property suite", ok,
           f"1000x1000 bounds {bounds}, monotone {monotone}, symmetric {symmetric}, "
           f"edge slope {worst_slope:.2e} (<1e-3), cutoff continuity {cont:.1e} (<=1e-12), "
           f"binary consistency {consistent}, runtime {elapsed:.2f} s (<5)")
    assert ok


def test_c8_baseline_equivalence(report):
    rng = random.Random(2024)
    feas = FeasibilityParams()
    bundle = GuidanceBundle()
    mismatches = 0
    n = 10_000
    for _ in range(n):
        p = (rng.uniform(-400, 400), rng.uniform(-400, 400))
        b = rng.uniform(-math.pi, math.pi)
        speed = rng.uniform(PARAMS.v_G_min, 25.0)
        v_G = (speed * math.cos(b), speed * math.sin(b))
        w = (rng.uniform(-15, 15), rng.uniform(-15, 15))
        path = LoiterPath(Vec2NE(rng.uniform(-20, 20), rng.uniform(-20, 20)), rng.uniform(1, 300), rng.choice((1, -1)))
        out = guidance_step(GuidanceInput(Vec2NE(*p), Vec2NE(*v_G), Vec2NE(*w), path),
                            PARAMS, feas, bundle.policy, MODES["original"])
        ref = baseline_l1(p, v_G, path.center, path.radius, path.direction)
        if (out.a_ref, out.phi_ref, out.eta) != ref:
            mismatches += 1
    ok = mismatches == 0
    report("C8 baseline equivalence", ok, f"{n} random inputs, {mismatches} bitwise mismatches")
    assert ok


def _terminal(spec, dt, decimation):
    s = replace(spec, sim=replace(spec.sim, dt=dt, t_end=60.0, decimation=decimation))
    t = s.run()
    return t.data[-1, 1:6]


def test_c9_integrator_order(report):
    # Guidance is refreshed every 0.04 s in all three runs so that only the
    # integration step changes; with a per-step update the sampled-data loop
    # itself changes with dt and the error is first order by construction.
    spec = get_scenario("const-overwind").with_mode("prevention")
    x = [_terminal(spec, dt, dec) for dt, dec in ((0.02, 2), (0.01, 4), (0.005, 8))]
    ratio = float(np.max(np.abs(x[0] - x[1])) / np.max(np.abs(x[1] - x[2])))
    y = [_terminal(spec, dt, 1) for dt in (0.02, 0.01, 0.005)]
    zoh = float(np.max(np.abs(y[0] - y[1])) / np.max(np.abs(y[1] - y[2])))
    ok = 12.0 <= ratio <= 20.0
    report("C9 integrator order", ok,
           f"Richardson ratio {ratio:.2f} (in [12,20]) with fixed 0.04 s guidance period; "
           f"per-step guidance update gives {zoh:.2f} (closed-loop sampling effect)")
    assert ok


def test_c10_algorithm_oracle(report):
    rng = random.Random(77)
    n = 100_000
    mismatches = 0
    for _ in range(n):
        q = rng.uniform(0.1, 20.0)
        v = rng.uniform(0.5, 40.0)
        R = rng.uniform(0.5, 500.0)
        e = rng.choice((0.0, rng.uniform(-1000, 1000), rng.uniform(-R, R)))
        if adapt_l1(q, v, R, e) != algorithm_one(q, v, R, e):
            mismatches += 1
    q0 = PARAMS.P_L * PARAMS.zeta_L / math.pi
    worst = 0.0
    for v, R in ((9.0, 15.0), (12.0, 30.0), (5.0, 40.0)):
        h = 1e-3
        e = np.arange(-2 * q0 * v, 2 * q0 * v, h).tolist()
        L = np.array([adapt_l1(q0, v, R, x)[0] for x in e])
        worst = max(worst, float(np.max(np.abs(np.diff(L)))) / h)
    ok = mismatches == 0 and worst <= 1.0 + 1e-6
    report("C10 adaptive L1 oracle", ok,
           f"{n} random tuples, {mismatches} mismatches; continuity sweep max |dL1/de_t| {worst:.6f} (<=1)")
    assert ok
