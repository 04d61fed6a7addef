# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled closed-loop simulation kernel.

Reproduces the arithmetic of ``controller.guidance_step`` and
``vehicle_sim._rk4`` expression by expression so that both backends return
identical rows. Any edit to the Python path must be mirrored here; the
backend equivalence tests catch a drift.
"""
from libc.string cimport memset
from libc.math cimport sqrt, sin, cos, tan, atan, atan2, acos, fabs, remainder, isfinite, M_PI

cdef double PI = M_PI
cdef double TWO_PI = 2.0 * M_PI
cdef double HALF_PI = 0.5 * M_PI
cdef double L1D_FLOOR2 = 2.0 * 1e-9
cdef double AIRSPEED_FLOOR = 0.1
cdef double NAV_SPEED_FLOOR = 1e-3
cdef double MIN_AIRSPEED = 0.1

# column layout, see vehicle_sim.COLUMNS
cdef Py_ssize_t NCOL = 25


cdef inline double pymax(double a, double b) noexcept nogil:
    return b if b > a else a


cdef inline double pymin(double a, double b) noexcept nogil:
    return b if b < a else a


cdef inline double constrain(double x, double lo, double hi) noexcept nogil:
    return pymin(pymax(x, lo), hi)


cdef inline double wrap_pi(double a) noexcept nogil:
    cdef double r = remainder(a, TWO_PI)
    if r <= -PI:
        r = PI
    return r


cdef inline double bearing(double n, double e) noexcept nogil:
    cdef double b = atan2(e, n)
    if b == -PI:
        b = PI
    return b


cdef struct Guidance:
    double P_L, zeta_L, phi_lim, v_G_min, eps_center, g
    double v_A_buf, lambda_co, w_eps, v_A_nom, v_A_max
    double c_n, c_e, R, direction
    int adapt, blend, airspeed


cdef struct Out:
    double phi_ref, v_A_ref, a_ref, sigma, beta, lam, e_t, L1, q_L, P_eff
    double chi, eta, chi_nav, chi_L, v_nav_norm


cdef struct Wind:
    int sinusoidal
    double mean_n, mean_e, amp, period, dir_n, dir_e


cdef inline void wind_at(const Wind* wm, double t, double* wn, double* we) noexcept nogil:
    cdef double s
    if not wm.sinusoidal:
        wn[0] = wm.mean_n
        we[0] = wm.mean_e
        return
    s = wm.amp * sin(TWO_PI * t / wm.period)
    wn[0] = wm.mean_n + wm.dir_n * s
    we[0] = wm.mean_e + wm.dir_e * s


cdef int sigma_feas(double beta, double lam, double beta_buf, double lambda_co, double* sigma) noexcept nogil:
    cdef double lam_ctsr, s_co, m_co, beta_plus, beta_minus, inv_s, x, c
    lam_ctsr = constrain(fabs(lam), 0.0, HALF_PI)
    if lam_ctsr < lambda_co:
        s_co = sin(lambda_co)
        m_co = cos(lambda_co) / (s_co * s_co)
        beta_plus = 1.0 / s_co + m_co * (lambda_co - lam_ctsr)
        beta_minus = (1.0 / s_co - 2.0) * beta_buf + 1.0 + beta_buf * m_co * (lambda_co - lam_ctsr)
    else:
        inv_s = 1.0 / sin(lam_ctsr)
        beta_plus = inv_s
        beta_minus = (inv_s - 2.0) * beta_buf + 1.0
    if beta_plus < beta_minus:
        return 1
    if beta > beta_plus:
        sigma[0] = 0.0
    elif beta > beta_minus:
        x = constrain((beta - beta_minus) / (beta_plus - beta_minus), 0.0, 1.0)
        c = cos(HALF_PI * x)
        sigma[0] = c * c
    else:
        sigma[0] = 1.0
    return 0


cdef int guidance(const Guidance* G, double p_n, double p_e, double vg_n, double vg_e,
                  double w_n, double w_e, Out* o) noexcept nogil:
    cdef double va_n, va_e, v_G_raw, v_A_norm, w_norm, v_G_norm
    cdef double q_L, k_L, L1, d_n, d_e, d, abs_e, den, gamma, chi_d, chi_L
    cdef double l1_n, l1_e, chi, beta, lam, sigma, chi_nav, v_nav_norm
    cdef double beta_buf
    cdef double nv_n, nv_e, eta, a_ref, phi_ref, v_A_ref, dv

    if not (isfinite(p_n) and isfinite(p_e) and isfinite(vg_n) and isfinite(vg_e)
            and isfinite(w_n) and isfinite(w_e)):
        return 2

    va_n = vg_n - w_n
    va_e = vg_e - w_e
    v_G_raw = sqrt(vg_n * vg_n + vg_e * vg_e)
    v_A_norm = sqrt(va_n * va_n + va_e * va_e)
    w_norm = sqrt(w_n * w_n + w_e * w_e)
    v_G_norm = pymax(v_G_raw, G.v_G_min)

    q_L = G.P_L * G.zeta_L / PI
    k_L = 4.0 * G.zeta_L * G.zeta_L

    d_n = G.c_n - p_n
    d_e = G.c_e - p_e
    d = sqrt(d_n * d_n + d_e * d_e)
    if d < G.eps_center:
        d_n = G.eps_center
        d_e = 0.0
        d = G.eps_center

    if G.adapt:
        L1 = q_L * v_G_norm
        abs_e = fabs(d - G.R)
        if L1 > G.R and abs_e <= L1:
            L1 = pymax(abs_e, G.R)
            q_L = L1 / v_G_norm
    else:
        L1 = q_L * v_G_norm
    if not (isfinite(q_L) and isfinite(L1)):
        return 3

    den = pymax(2.0 * L1 * d, L1D_FLOOR2)
    gamma = acos(constrain((L1 * L1 + d * d - G.R * G.R) / den, -1.0, 1.0))
    chi_d = bearing(d_n, d_e)
    if not (isfinite(gamma) and isfinite(chi_d)):
        return 4
    chi_L = wrap_pi(chi_d - G.direction * gamma)
    if not isfinite(chi_L):
        return 4
    l1_n = L1 * cos(chi_L)
    l1_e = L1 * sin(chi_L)

    if v_G_raw < G.v_G_min and v_A_norm > 0.0:
        chi = bearing(va_n, va_e)
    elif v_G_raw > 0.0:
        chi = bearing(vg_n, vg_e)
    else:
        return 5

    beta = w_norm / pymax(v_A_norm, AIRSPEED_FLOOR)
    if sqrt(w_n * w_n + w_e * w_e) < G.w_eps:
        lam = 0.0
    else:
        lam = atan2(w_n * l1_e - w_e * l1_n, w_n * l1_n + w_e * l1_e)

    if G.blend:
        beta_buf = G.v_A_buf / pymax(v_A_norm, AIRSPEED_FLOOR)
        if sigma_feas(beta, lam, beta_buf, G.lambda_co, &sigma):
            return 6
        nv_n = sigma * vg_n + (1.0 - sigma) * va_n
        nv_e = sigma * vg_e + (1.0 - sigma) * va_e
        v_nav_norm = sqrt(nv_n * nv_n + nv_e * nv_e)
        if v_nav_norm < NAV_SPEED_FLOOR:
            nv_n = va_n
            nv_e = va_e
            v_nav_norm = sqrt(nv_n * nv_n + nv_e * nv_e)
        if nv_n == 0.0 and nv_e == 0.0:
            return 7
        chi_nav = bearing(nv_n, nv_e)
    else:
        sigma = 1.0
        chi_nav = chi
        v_nav_norm = v_G_raw
    if not (isfinite(sigma) and isfinite(beta) and isfinite(lam) and isfinite(chi_nav)
            and isfinite(v_nav_norm)):
        return 7

    eta = constrain(wrap_pi(chi_L - chi_nav), -HALF_PI, HALF_PI)
    a_ref = k_L * v_nav_norm / q_L * sin(eta)
    phi_ref = constrain(atan(a_ref / G.g), -G.phi_lim, G.phi_lim)
    if not (isfinite(eta) and isfinite(a_ref) and isfinite(phi_ref)):
        return 8

    if G.airspeed:
        dv = constrain(w_norm - G.v_A_nom, 0.0, G.v_A_max - G.v_A_nom) * (1.0 - sigma)
        v_A_ref = G.v_A_nom + dv
    else:
        v_A_ref = G.v_A_nom
    if not isfinite(v_A_ref):
        return 9

    o.phi_ref = phi_ref
    o.v_A_ref = v_A_ref
    o.a_ref = a_ref
    o.sigma = sigma
    o.beta = beta
    o.lam = lam
    o.e_t = d - G.R
    o.L1 = L1
    o.q_L = q_L
    o.P_eff = q_L * PI / G.zeta_L
    o.chi = chi
    o.eta = eta
    o.chi_nav = chi_nav
    o.chi_L = chi_L
    o.v_nav_norm = v_nav_norm
    return 0


cdef inline int deriv(const double* x, double phi_ref, double v_A_ref, double w_n, double w_e,
                      double tau_v, double tau_phi, double g, double* k) noexcept nogil:
    if not x[2] > MIN_AIRSPEED:
        return 1
    k[0] = x[2] * cos(x[3]) + w_n
    k[1] = x[2] * sin(x[3]) + w_e
    k[2] = (v_A_ref - x[2]) / tau_v
    k[3] = g * tan(x[4]) / x[2]
    k[4] = (phi_ref - x[4]) / tau_phi
    return 0


cdef int rk4(double* x, double t, double phi_ref, double v_A_ref, const Wind* wm,
             double tau_v, double tau_phi, double g, double dt) noexcept nogil:
    cdef double k1[5]
    cdef double k2[5]
    cdef double k3[5]
    cdef double k4[5]
    cdef double y[5]
    cdef double w0n, w0e, whn, whe, w1n, w1e
    cdef double h2 = 0.5 * dt
    cdef double dt6
    cdef int i
    wind_at(wm, t, &w0n, &w0e)
    wind_at(wm, t + h2, &whn, &whe)
    wind_at(wm, t + dt, &w1n, &w1e)
    if deriv(x, phi_ref, v_A_ref, w0n, w0e, tau_v, tau_phi, g, k1):
        return 1
    for i in range(5):
        y[i] = x[i] + h2 * k1[i]
    if deriv(y, phi_ref, v_A_ref, whn, whe, tau_v, tau_phi, g, k2):
        return 1
    for i in range(5):
        y[i] = x[i] + h2 * k2[i]
    if deriv(y, phi_ref, v_A_ref, whn, whe, tau_v, tau_phi, g, k3):
        return 1
    for i in range(5):
        y[i] = x[i] + dt * k3[i]
    if deriv(y, phi_ref, v_A_ref, w1n, w1e, tau_v, tau_phi, g, k4):
        return 1
    dt6 = dt / 6.0
    for i in range(5):
        x[i] = x[i] + dt6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return 0


def simulate(double[::1] x0, double[::1] guidance_params, double[::1] loiter, double[::1] wind,
             int sinusoidal, double[::1] sim, int flags, Py_ssize_t n_steps, Py_ssize_t decimation,
             double[:, ::1] out):
    """Run the closed loop; fill ``out`` (``n_steps + 1`` rows). Returns ``(code, step)``."""
    cdef Guidance G
    cdef Wind wm
    cdef Out o
    cdef double x[5]
    cdef double tau_v = sim[0], tau_phi = sim[1], g = sim[2], dt = sim[3]
    cdef double t, w_n, w_e, vg_n, vg_e
    cdef Py_ssize_t k
    cdef int i, code = 0

    if out.shape[0] < n_steps + 1 or out.shape[1] < NCOL:
        raise ValueError("output buffer too small")
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    memset(&o, 0, sizeof(Out))

    G.P_L = guidance_params[0]
    G.zeta_L = guidance_params[1]
    G.phi_lim = guidance_params[2]
    G.v_G_min = guidance_params[3]
    G.eps_center = guidance_params[4]
    G.g = guidance_params[5]
    G.v_A_buf = guidance_params[6]
    G.lambda_co = guidance_params[7]
    G.w_eps = guidance_params[8]
    G.v_A_nom = guidance_params[9]
    G.v_A_max = guidance_params[10]
    G.c_n = loiter[0]
    G.c_e = loiter[1]
    G.R = loiter[2]
    G.direction = loiter[3]
    G.adapt = flags & 1
    G.blend = (flags >> 1) & 1
    G.airspeed = (flags >> 2) & 1
    wm.sinusoidal = sinusoidal
    wm.mean_n = wind[0]
    wm.mean_e = wind[1]
    wm.amp = wind[2]
    wm.period = wind[3]
    wm.dir_n = wind[4]
    wm.dir_e = wind[5]
    for i in range(5):
        x[i] = x0[i]

    with nogil:
        for k in range(n_steps + 1):
            t = k * dt
            wind_at(&wm, t, &w_n, &w_e)
            vg_n = x[2] * cos(x[3]) + w_n
            vg_e = x[2] * sin(x[3]) + w_e
            if k % decimation == 0:
                code = guidance(&G, x[0], x[1], vg_n, vg_e, w_n, w_e, &o)
                if code:
                    break
            out[k, 0] = t
            for i in range(5):
                out[k, 1 + i] = x[i]
            out[k, 6] = o.phi_ref
            out[k, 7] = o.v_A_ref
            out[k, 8] = o.a_ref
            out[k, 9] = o.sigma
            out[k, 10] = o.beta
            out[k, 11] = o.lam
            out[k, 12] = o.e_t
            out[k, 13] = o.L1
            out[k, 14] = o.q_L
            out[k, 15] = o.P_eff
            out[k, 16] = w_n
            out[k, 17] = w_e
            out[k, 18] = o.chi
            out[k, 19] = o.eta
            out[k, 20] = vg_n
            out[k, 21] = vg_e
            out[k, 22] = o.chi_nav
            out[k, 23] = o.chi_L
            out[k, 24] = o.v_nav_norm
            if k < n_steps:
                code = rk4(x, t, o.phi_ref, o.v_A_ref, &wm, tau_v, tau_phi, g, dt)
                if code:
                    break
    return code, (k if code else -1)


def sigma_grid(double[::1] betas, double[::1] lams, double beta_buf, double lambda_co, double[:, ::1] out):
    """Feasibility over the outer product ``betas x lams`` into ``out``. Returns nonzero on an empty band."""
    cdef Py_ssize_t i, j
    cdef int code = 0
    if out.shape[0] < betas.shape[0] or out.shape[1] < lams.shape[0]:
        raise ValueError("output buffer too small")
    with nogil:
        for i in range(betas.shape[0]):
            for j in range(lams.shape[0]):
                if sigma_feas(betas[i], lams[j], beta_buf, lambda_co, &out[i, j]):
                    code = 1
                    break
            if code:
                break
    return code
