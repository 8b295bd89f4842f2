# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels; mirrors kfks._kernels_py function for function.

Index arrays are np.intp, floats are float64.  All loops run without the
GIL so callers may fan disjoint slices out over threads.
"""

from libc.math cimport ceil, erfc, exp, fabs, floor, log, sqrt

import numpy as np

BACKEND_NAME = "compiled"
TAIL_MASS_WARN = 1e-6

cdef double TAIL_WARN_C = 1e-6
cdef double SQRT_2PI = sqrt(2.0 * 3.14159265358979323846)
cdef double INF = float("inf")


def analytic_params(rho, u, T):
    """Exponential-family parameters of the continuum Maxwellian."""
    a = np.log(rho / (SQRT_2PI * np.sqrt(T))) - u * u / (2.0 * T)
    b = u / T
    c = -1.0 / (2.0 * T)
    return a, b, c


def moments(const double[:, :] f, const double[:] v, double dv,
            double[:] rho, double[:] mom, double[:] en):
    """Discrete moments (rho, rho*u, E) of a cell distribution."""
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    cdef Py_ssize_t j, k
    cdef double s0, s1, s2, e, vk
    with nogil:
        for j in range(M):
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            for k in range(N):
                e = f[j, k]
                vk = v[k]
                s0 += e
                s1 += e * vk
                s2 += e * vk * vk
            rho[j] = dv * s0
            mom[j] = dv * s1
            en[j] = 0.5 * dv * s2


cdef inline void _eval_row(double a, double b, double c, const double[:] v, double dv,
                           double[:, :] E, Py_ssize_t j, bint write_e, double* m) noexcept nogil:
    cdef Py_ssize_t k, N = v.shape[0]
    cdef double e, vk, v2
    m[0] = 0.0
    m[1] = 0.0
    m[2] = 0.0
    m[3] = 0.0
    m[4] = 0.0
    for k in range(N):
        vk = v[k]
        v2 = vk * vk
        e = exp(a + b * vk + c * v2)
        if write_e:
            E[j, k] = e
        m[0] += e
        m[1] += e * vk
        m[2] += e * v2
        m[3] += e * v2 * vk
        m[4] += e * v2 * v2
    m[0] *= dv
    m[1] *= dv
    m[2] *= dv
    m[3] *= dv
    m[4] *= dv


cdef inline double _scaled_resid(double* m, double t0, double t1, double t2,
                                 double s0, double s1, double s2) noexcept nogil:
    cdef double r0 = fabs(m[0] - t0) / s0
    cdef double r1 = fabs(m[1] - t1) / s1
    cdef double r2 = fabs(0.5 * m[2] - t2) / s2
    cdef double r = r0
    if r1 > r:
        r = r1
    if r2 > r:
        r = r2
    if not (r == r):  # NaN
        return INF
    return r


cdef inline bint _solve3(double* J, double* g, double* d) noexcept nogil:
    # Gaussian elimination with partial pivoting on a 3x3 system J d = -g.
    cdef double A[3][4]
    cdef Py_ssize_t i, p, r, c
    cdef double piv, fac, tmp
    for i in range(3):
        for c in range(3):
            A[i][c] = J[3 * i + c]
        A[i][3] = -g[i]
    for p in range(3):
        r = p
        for i in range(p + 1, 3):
            if fabs(A[i][p]) > fabs(A[r][p]):
                r = i
        if A[r][p] == 0.0:
            return 0
        if r != p:
            for c in range(4):
                tmp = A[p][c]
                A[p][c] = A[r][c]
                A[r][c] = tmp
        piv = A[p][p]
        for i in range(p + 1, 3):
            fac = A[i][p] / piv
            for c in range(p, 4):
                A[i][c] -= fac * A[p][c]
    for p in range(2, -1, -1):
        tmp = A[p][3]
        for c in range(p + 1, 3):
            tmp -= A[p][c] * d[c]
        if A[p][p] == 0.0:
            return 0
        d[p] = tmp / A[p][p]
    return 1


cdef double _cell_newton(double rho_j, double u_j, double T_j, const double[:] v, double dv,
                         double tol, int max_iter, double[:, :] E, Py_ssize_t j,
                         double* abc) noexcept nogil:
    # Damped Newton for one cell; writes the equilibrium row E[j] and the
    # parameters abc; returns the final scaled residual.
    cdef Py_ssize_t it, h
    cdef double t0, t1, t2, s0, s1, s2, a, b, c
    cdef double resid, r_try, lam, ta, tb, tc
    cdef double m[5]
    cdef double mt[5]
    cdef double J[9]
    cdef double G[3]
    cdef double d[3]
    cdef bint accepted
    t0 = rho_j
    t1 = rho_j * u_j
    t2 = 0.5 * rho_j * (u_j * u_j + T_j)
    s0 = t0
    s1 = fabs(t1)
    if s1 < t0:
        s1 = t0
    s2 = t2
    if s2 < t0:
        s2 = t0
    a = log(rho_j / (SQRT_2PI * sqrt(T_j))) - u_j * u_j / (2.0 * T_j)
    b = u_j / T_j
    c = -1.0 / (2.0 * T_j)
    _eval_row(a, b, c, v, dv, E, j, 1, m)
    resid = _scaled_resid(m, t0, t1, t2, s0, s1, s2)
    for it in range(max_iter):
        if resid <= tol:
            break
        J[0] = m[0]
        J[1] = m[1]
        J[2] = m[2]
        J[3] = m[1]
        J[4] = m[2]
        J[5] = m[3]
        J[6] = 0.5 * m[2]
        J[7] = 0.5 * m[3]
        J[8] = 0.5 * m[4]
        G[0] = m[0] - t0
        G[1] = m[1] - t1
        G[2] = 0.5 * m[2] - t2
        if not _solve3(J, G, d):
            break
        lam = 1.0
        accepted = 0
        for h in range(30):
            ta = a + lam * d[0]
            tb = b + lam * d[1]
            tc = c + lam * d[2]
            if tc < 0.0:
                _eval_row(ta, tb, tc, v, dv, E, j, 0, mt)
                r_try = _scaled_resid(mt, t0, t1, t2, s0, s1, s2)
            else:
                r_try = INF
            if r_try < resid:
                a = ta
                b = tb
                c = tc
                accepted = 1
                break
            lam *= 0.5
        if not accepted:
            break
        _eval_row(a, b, c, v, dv, E, j, 1, m)
        resid = _scaled_resid(m, t0, t1, t2, s0, s1, s2)
    abc[0] = a
    abc[1] = b
    abc[2] = c
    if c >= 0.0 or not (a == a and b == b and c == c):
        return INF
    return resid


cdef inline double _tail_mass(double u_j, double T_j, double v_lo, double v_hi) noexcept nogil:
    cdef double sig = sqrt(2.0 * T_j)
    return 0.5 * (erfc((v_hi - u_j) / sig) + erfc((u_j - v_lo) / sig))


def maxwellian_batch(const double[:] rho, const double[:] u, const double[:] T,
                     const double[:] v, double dv, double tol, int max_iter,
                     double[:, :] params, double[:, :] E):
    """Moment-matched discrete Maxwellians for a batch of cells.

    Damped Newton on (a, b, c) per cell, seeded from the continuum
    parameters; returns (n_fail, first_fail, max_resid, n_tail_warn).
    """
    cdef Py_ssize_t M = rho.shape[0], N = v.shape[0]
    cdef Py_ssize_t j
    cdef int n_fail = 0, n_tail = 0
    cdef Py_ssize_t first_fail = -1
    cdef double max_resid = 0.0
    cdef double resid
    cdef double abc[3]
    with nogil:
        for j in range(M):
            if _tail_mass(u[j], T[j], v[0], v[N - 1]) > TAIL_WARN_C:
                n_tail += 1
            resid = _cell_newton(rho[j], u[j], T[j], v, dv, tol, max_iter, E, j, abc)
            params[j, 0] = abc[0]
            params[j, 1] = abc[1]
            params[j, 2] = abc[2]
            if resid > tol:
                n_fail += 1
                if first_fail < 0:
                    first_fail = j
            if resid > max_resid and resid < INF:
                max_resid = resid
    return n_fail, int(first_fail), max_resid, n_tail


def equilibrium_field(const double[:, :] f, const double[:] v, double dv,
                      double tol, int max_iter, double[:, :] E, double[:, :] params):
    """Per-cell moments plus moment-matched Maxwellians in one call.

    Returns a status tuple (code, cell, max_resid, n_tail) with code 0 ok,
    1 non-finite moments, 2 degenerate density/temperature, 3 correction
    failure; the caller maps codes to exceptions.
    """
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    cdef Py_ssize_t j, k
    cdef int status = 0, n_tail = 0
    cdef Py_ssize_t bad_cell = -1
    cdef double max_resid = 0.0
    cdef double r0, r1, r2, e, vk, rho_j, u_j, T_j, en_j, resid
    cdef double abc[3]
    with nogil:
        for j in range(M):
            r0 = 0.0
            r1 = 0.0
            r2 = 0.0
            for k in range(N):
                e = f[j, k]
                vk = v[k]
                r0 += e
                r1 += e * vk
                r2 += e * vk * vk
            rho_j = dv * r0
            en_j = 0.5 * dv * r2
            if not (rho_j - rho_j == 0.0 and r1 - r1 == 0.0 and en_j - en_j == 0.0):
                status = 1
                bad_cell = j
                break
            if rho_j <= 0.0:
                status = 2
                bad_cell = j
                break
            u_j = dv * r1 / rho_j
            T_j = 2.0 * en_j / rho_j - u_j * u_j
            if T_j <= 0.0:
                status = 2
                bad_cell = j
                break
            if _tail_mass(u_j, T_j, v[0], v[N - 1]) > TAIL_WARN_C:
                n_tail += 1
            resid = _cell_newton(rho_j, u_j, T_j, v, dv, tol, max_iter, E, j, abc)
            params[j, 0] = abc[0]
            params[j, 1] = abc[1]
            params[j, 2] = abc[2]
            if resid > tol:
                if status == 0:
                    status = 3
                    bad_cell = j
            if resid > max_resid and resid < INF:
                max_resid = resid
    return status, int(bad_cell), max_resid, n_tail


def bgk_relax(double[:, :] f, const double[:] v, double dv, double exp_fac,
              double tol, int max_iter):
    """Exact BGK relaxation toward the corrected Maxwellian, in place.

    One cache-local pass per cell: moments, Newton solve, blend.  Status
    tuple as for equilibrium_field; on failure f is left part-updated and
    the caller aborts the run.
    """
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    scratch = np.empty((1, N))
    cdef double[:, :] Erow = scratch
    cdef Py_ssize_t j, k
    cdef int status = 0, n_tail = 0
    cdef Py_ssize_t bad_cell = -1
    cdef double max_resid = 0.0
    cdef double r0, r1, r2, e, vk, rho_j, u_j, T_j, en_j, resid, w
    cdef double abc[3]
    w = 1.0 - exp_fac
    with nogil:
        for j in range(M):
            r0 = 0.0
            r1 = 0.0
            r2 = 0.0
            for k in range(N):
                e = f[j, k]
                vk = v[k]
                r0 += e
                r1 += e * vk
                r2 += e * vk * vk
            rho_j = dv * r0
            en_j = 0.5 * dv * r2
            if not (rho_j - rho_j == 0.0 and r1 - r1 == 0.0 and en_j - en_j == 0.0):
                status = 1
                bad_cell = j
                break
            if rho_j <= 0.0:
                status = 2
                bad_cell = j
                break
            u_j = dv * r1 / rho_j
            T_j = 2.0 * en_j / rho_j - u_j * u_j
            if T_j <= 0.0:
                status = 2
                bad_cell = j
                break
            if _tail_mass(u_j, T_j, v[0], v[N - 1]) > TAIL_WARN_C:
                n_tail += 1
            resid = _cell_newton(rho_j, u_j, T_j, v, dv, tol, max_iter, Erow, 0, abc)
            if resid > tol:
                if status == 0:
                    status = 3
                    bad_cell = j
                if resid > max_resid and resid < INF:
                    max_resid = resid
                continue
            if resid > max_resid:
                max_resid = resid
            for k in range(N):
                f[j, k] = exp_fac * f[j, k] + w * Erow[0, k]
    return status, int(bad_cell), max_resid, n_tail


cdef inline double _vl(double fm, double f0, double fp) noexcept nogil:
    cdef double dm = f0 - fm
    cdef double dp = fp - f0
    cdef double pr = dm * dp
    if pr > 0.0:
        return 2.0 * pr / (dm + dp)
    return 0.0


cdef inline Py_ssize_t _idx(Py_ssize_t i, Py_ssize_t M, bint periodic) noexcept nogil:
    if periodic:
        i = i % M
        if i < 0:
            i += M
        return i
    if i < 0:
        return 0
    if i >= M:
        return M - 1
    return i


def van_leer_deltas(const double[:, :] f, bint periodic, double[:, :] out):
    """Limited slope times dx: 2 d- d+ / (d- + d+) where signs agree, else 0."""
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    cdef Py_ssize_t j, k, jm, jp
    with nogil:
        for j in range(M):
            jm = _idx(j - 1, M, periodic)
            jp = _idx(j + 1, M, periodic)
            for k in range(N):
                out[j, k] = _vl(f[jm, k], f[j, k], f[jp, k])


def sl_upwind_transport(const double[:, :] f, const double[:] alpha, bint periodic,
                        double[:, :] out):
    """First-order semi-Lagrangian step: foot-point linear interpolation."""
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    cdef Py_ssize_t j, k, jup
    cdef double a, aa
    with nogil:
        for k in range(N):
            a = alpha[k]
            aa = fabs(a)
            for j in range(M):
                jup = _idx(j - 1, M, periodic) if a >= 0.0 else _idx(j + 1, M, periodic)
                out[j, k] = (1.0 - aa) * f[j, k] + aa * f[jup, k]


def sl_muscl_transport(const double[:, :] f, const double[:] alpha, bint periodic,
                       double[:, :] out):
    """Conservative MUSCL step: cell mean of the advected limited reconstruction."""
    cdef Py_ssize_t M = f.shape[0], N = f.shape[1]
    cdef Py_ssize_t j, k, jm, jp, jmm, jpp
    cdef double a, aa, w, D0, Dn
    with nogil:
        for k in range(N):
            a = alpha[k]
            aa = fabs(a)
            w = 0.5 * aa * (1.0 - aa)
            for j in range(M):
                jm = _idx(j - 1, M, periodic)
                jp = _idx(j + 1, M, periodic)
                D0 = _vl(f[jm, k], f[j, k], f[jp, k])
                if a >= 0.0:
                    jmm = _idx(j - 2, M, periodic)
                    Dn = _vl(f[jmm, k], f[jm, k], f[j, k])
                    out[j, k] = aa * f[jm, k] + (1.0 - aa) * f[j, k] + w * (Dn - D0)
                else:
                    jpp = _idx(j + 2, M, periodic)
                    Dn = _vl(f[j, k], f[jp, k], f[jpp, k])
                    out[j, k] = aa * f[jp, k] + (1.0 - aa) * f[j, k] - w * (Dn - D0)


def pc_sample(const double[:, :] g, const Py_ssize_t[:] r, double[:, :] out):
    """Evaluate shifted piecewise-constant rows at the cell centers."""
    cdef Py_ssize_t N = g.shape[0], M = g.shape[1]
    cdef Py_ssize_t k, j, i
    with nogil:
        for k in range(N):
            i = _idx(-r[k], M, 1)
            for j in range(M):
                out[j, k] = g[k, i]
                i += 1
                if i == M:
                    i = 0


def pc_update(double[:, :] g, const Py_ssize_t[:] r, const double[:, :] phi):
    """Scatter per-center values back onto the piece owning each center."""
    cdef Py_ssize_t N = g.shape[0], M = g.shape[1]
    cdef Py_ssize_t k, j, i
    with nogil:
        for k in range(N):
            i = _idx(-r[k], M, 1)
            for j in range(M):
                g[k, i] = phi[j, k]
                i += 1
                if i == M:
                    i = 0


def pl_sample(const double[:, :] g, const Py_ssize_t[:] q, const double[:] theta,
              double[:, :] out):
    """Evaluate shifted piecewise-linear rows at the cell centers."""
    cdef Py_ssize_t N = g.shape[0], M = g.shape[1]
    cdef Py_ssize_t k, j, i, i2
    cdef double th
    with nogil:
        for k in range(N):
            th = theta[k]
            i = _idx(-q[k], M, 1)
            for j in range(M):
                i2 = i + 1
                if i2 == M:
                    i2 = 0
                out[j, k] = (1.0 - th) * g[k, i] + th * g[k, i2]
                i += 1
                if i == M:
                    i = 0


def pl_knot_update(const double[:, :] g, const double[:, :] E, const Py_ssize_t[:] F,
                   const double[:] beta, double exp_fac, double[:, :] out_g):
    """Relax knot values toward the resolved Maxwellian at each knot.

    The Maxwellian at a knot is rebuilt from the two bracketing cell-center
    values extended with the distribution's own segment slopes: distance-
    weighted average when the slopes agree in sign, min/max otherwise.
    Row k of ``g`` pairs with column k of ``E``: callers slicing velocities
    must slice both.
    """
    cdef Py_ssize_t N = g.shape[0], M = g.shape[1]
    cdef Py_ssize_t k, i, jl, jr, im1, ip1, ip2
    cdef double bk, sl, sr, Em, Ep, res, gi
    with nogil:
        for k in range(N):
            bk = beta[k]
            jl = _idx(F[k], M, 1)
            for i in range(M):
                ip1 = i + 1
                if ip1 == M:
                    ip1 = 0
                gi = g[k, i]
                if bk > 0.0:
                    im1 = i - 1
                    if im1 < 0:
                        im1 = M - 1
                    sl = gi - g[k, im1]
                    sr = g[k, ip1] - gi
                else:
                    ip2 = ip1 + 1
                    if ip2 == M:
                        ip2 = 0
                    sl = g[k, ip1] - gi
                    sr = g[k, ip2] - g[k, ip1]
                jr = jl + 1
                if jr == M:
                    jr = 0
                Em = E[jl, k] + bk * sl
                Ep = E[jr, k] - (1.0 - bk) * sr
                if sl * sr >= 0.0:
                    res = (1.0 - bk) * Em + bk * Ep
                elif sl > 0.0:
                    res = Em if Em < Ep else Ep
                else:
                    res = Em if Em > Ep else Ep
                out_g[k, i] = exp_fac * gi + (1.0 - exp_fac) * res
                jl += 1
                if jl == M:
                    jl = 0
