"""Pure-numpy kernels: the reference implementation of the hot loops.

The compiled extension ``kfks._kernels`` mirrors this module function for
function; ``kfks.kernels`` picks one of the two at import time.  All kernels
write into caller-allocated outputs and touch only the slices they are given,
so callers may fan them out over threads.

Array conventions: cell distributions are ``(M, N)`` with velocity fastest;
nodal values are ``(N, M)`` with one row per lattice velocity.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erfc

BACKEND_NAME = "python"

#: relative lattice-truncation mass above which the equilibrium solve warns
TAIL_MASS_WARN = 1e-6

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def moments(f, v, dv, rho, mom, en):
    """Discrete moments (rho, rho*u, E) of a cell distribution."""
    np.multiply(dv, f.sum(axis=1), out=rho)
    np.multiply(dv, f @ v, out=mom)
    np.multiply(0.5 * dv, f @ (v * v), out=en)


def analytic_params(rho, u, T):
    """Exponential-family parameters of the continuum Maxwellian."""
    a = np.log(rho / (_SQRT_2PI * np.sqrt(T))) - u * u / (2.0 * T)
    b = u / T
    c = -1.0 / (2.0 * T)
    return a, b, c


def _eval_moments(params, v, dv):
    """Raw velocity moments m_p = dv * sum_k v^p exp(a + b v + c v^2), p = 0..4."""
    arg = params[:, 0:1] + params[:, 1:2] * v + params[:, 2:3] * (v * v)
    E = np.exp(arg)
    m = np.empty((params.shape[0], 5))
    vp = np.ones_like(v)
    for p in range(5):
        m[:, p] = dv * (E @ vp)
        vp = vp * v
    return E, m


def _residual(m, target, scale):
    G = np.stack([m[:, 0], m[:, 1], 0.5 * m[:, 2]], axis=1) - target
    r = np.abs(G) / scale
    r = np.where(np.isfinite(r), r, np.inf)
    return G, r.max(axis=1)


def maxwellian_batch(rho, u, T, v, dv, tol, max_iter, params, E):
    """Moment-matched discrete Maxwellians for a batch of cells.

    Damped Newton on (a, b, c) per cell, seeded from the continuum
    parameters; ``E`` receives exp(a + b v + c v^2).  Returns
    ``(n_fail, first_fail, max_resid, n_tail_warn)``; the caller raises.
    """
    M = rho.shape[0]
    en_t = 0.5 * rho * (u * u + T)
    target = np.stack([rho, rho * u, en_t], axis=1)
    scale = np.stack([rho, np.maximum(np.abs(rho * u), rho), np.maximum(en_t, rho)], axis=1)

    a, b, c = analytic_params(rho, u, T)
    params[:, 0], params[:, 1], params[:, 2] = a, b, c

    sig = np.sqrt(2.0 * T)
    tail = 0.5 * (erfc((v[-1] - u) / sig) + erfc((u - v[0]) / sig))
    n_tail_warn = int(np.count_nonzero(tail > TAIL_MASS_WARN))

    active = np.ones(M, dtype=bool)
    Ef, m = _eval_moments(params, v, dv)
    E[...] = Ef
    _, resid = _residual(m, target, scale)
    max_resid = 0.0
    for _ in range(max_iter):
        active &= resid > tol
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        p_act = params[idx]
        m_act = m[idx]
        G, _ = _residual(m_act, target[idx], scale[idx])
        J = np.empty((idx.size, 3, 3))
        J[:, 0, 0], J[:, 0, 1], J[:, 0, 2] = m_act[:, 0], m_act[:, 1], m_act[:, 2]
        J[:, 1, 0], J[:, 1, 1], J[:, 1, 2] = m_act[:, 1], m_act[:, 2], m_act[:, 3]
        J[:, 2, 0], J[:, 2, 1], J[:, 2, 2] = 0.5 * m_act[:, 2], 0.5 * m_act[:, 3], 0.5 * m_act[:, 4]
        try:
            delta = np.linalg.solve(J, -G[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            break
        lam = np.ones(idx.size)
        best = params[idx].copy()
        cur = resid[idx].copy()
        improved = np.zeros(idx.size, dtype=bool)
        for _h in range(30):
            trial = p_act + lam[:, None] * delta
            _, r_try = _eval_trial(trial, v, dv, target[idx], scale[idx])
            ok = (r_try < cur) & (trial[:, 2] < 0.0) & np.isfinite(r_try)
            take = ok & ~improved
            best[take] = trial[take]
            cur[take] = r_try[take]
            improved |= ok
            if improved.all():
                break
            lam[~improved] *= 0.5
        params[idx] = best
        stalled = ~improved
        Ef, m_new = _eval_moments(params[idx], v, dv)
        E[idx] = Ef
        m[idx] = m_new
        _, r_new = _residual(m_new, target[idx], scale[idx])
        resid[idx] = r_new
        if stalled.any():
            active[idx[stalled]] = False

    fail = resid > tol
    fail |= ~np.isfinite(params).all(axis=1)
    fail |= params[:, 2] >= 0.0
    n_fail = int(np.count_nonzero(fail))
    first_fail = int(np.nonzero(fail)[0][0]) if n_fail else -1
    max_resid = float(resid.max()) if M else 0.0
    return n_fail, first_fail, max_resid, n_tail_warn


def _eval_trial(params, v, dv, target, scale):
    _, m = _eval_moments(params, v, dv)
    return _residual(m, target, scale)


def equilibrium_field(f, v, dv, tol, max_iter, E, params):
    """Per-cell moments plus moment-matched Maxwellians in one call.

    Returns a status tuple (code, cell, max_resid, n_tail) with code 0 ok,
    1 non-finite moments, 2 degenerate density/temperature, 3 correction
    failure; the caller maps codes to exceptions.
    """
    rho = dv * f.sum(axis=1)
    mom = dv * (f @ v)
    en = 0.5 * dv * (f @ (v * v))
    finite = np.isfinite(rho) & np.isfinite(mom) & np.isfinite(en)
    if not finite.all():
        return 1, int(np.argmax(~finite)), 0.0, 0
    if np.any(rho <= 0.0):
        return 2, int(np.argmax(rho <= 0.0)), 0.0, 0
    u = mom / rho
    T = 2.0 * en / rho - u * u
    if np.any(T <= 0.0):
        return 2, int(np.argmax(T <= 0.0)), 0.0, 0
    n_fail, first_fail, max_resid, n_tail = maxwellian_batch(
        rho, u, T, v, dv, tol, max_iter, params, E
    )
    return (3 if n_fail else 0), first_fail, max_resid, n_tail


def bgk_relax(f, v, dv, exp_fac, tol, max_iter):
    """Exact BGK relaxation toward the corrected Maxwellian, in place."""
    E = np.empty_like(f)
    params = np.empty((f.shape[0], 3))
    status = equilibrium_field(f, v, dv, tol, max_iter, E, params)
    if status[0] != 0:
        return status
    f *= exp_fac
    f += (1.0 - exp_fac) * E
    return status


def van_leer_deltas(f, periodic, out):
    """Limited slope times dx: 2 d- d+ / (d- + d+) where signs agree, else 0."""
    if periodic:
        fm = np.roll(f, 1, axis=0)
        fp = np.roll(f, -1, axis=0)
    else:
        fm = np.concatenate([f[:1], f[:-1]], axis=0)
        fp = np.concatenate([f[1:], f[-1:]], axis=0)
    dm = f - fm
    dp = fp - f
    prod = dm * dp
    denom = dm + dp
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(prod > 0.0, 2.0 * prod / denom, 0.0)
    out[...] = d


def sl_upwind_transport(f, alpha, periodic, out):
    """First-order semi-Lagrangian step: foot-point linear interpolation."""
    if periodic:
        fm = np.roll(f, 1, axis=0)
        fp = np.roll(f, -1, axis=0)
    else:
        fm = np.concatenate([f[:1], f[:-1]], axis=0)
        fp = np.concatenate([f[1:], f[-1:]], axis=0)
    aa = np.abs(alpha)
    upw = np.where(alpha >= 0.0, fm, fp)
    out[...] = (1.0 - aa) * f + aa * upw


def sl_muscl_transport(f, alpha, periodic, out):
    """Conservative MUSCL step: cell mean of the advected limited reconstruction."""
    D = np.empty_like(f)
    van_leer_deltas(f, periodic, D)
    if periodic:
        fm = np.roll(f, 1, axis=0)
        fp = np.roll(f, -1, axis=0)
        Dm = np.roll(D, 1, axis=0)
        Dp = np.roll(D, -1, axis=0)
    else:
        fm = np.concatenate([f[:1], f[:-1]], axis=0)
        fp = np.concatenate([f[1:], f[-1:]], axis=0)
        Dm = np.concatenate([D[:1], D[:-1]], axis=0)
        Dp = np.concatenate([D[1:], D[-1:]], axis=0)
    aa = np.abs(alpha)
    w = 0.5 * aa * (1.0 - aa)
    pos = aa * fm + (1.0 - aa) * f + w * (Dm - D)
    neg = aa * fp + (1.0 - aa) * f - w * (Dp - D)
    out[...] = np.where(alpha >= 0.0, pos, neg)


def pc_sample(g, r, out):
    """Evaluate shifted piecewise-constant rows at the cell centers."""
    for k in range(g.shape[0]):
        out[:, k] = np.roll(g[k], r[k])


def pc_update(g, r, phi):
    """Scatter per-center values back onto the piece owning each center."""
    for k in range(g.shape[0]):
        g[k] = np.roll(phi[:, k], -r[k])


def pl_sample(g, q, theta, out):
    """Evaluate shifted piecewise-linear rows at the cell centers."""
    for k in range(g.shape[0]):
        gk = g[k]
        out[:, k] = (1.0 - theta[k]) * np.roll(gk, q[k]) + theta[k] * np.roll(gk, q[k] - 1)


def pl_knot_update(g, E, F, beta, exp_fac, out_g):
    """Relax knot values toward the resolved Maxwellian at each knot.

    The Maxwellian at a knot is rebuilt from the two bracketing cell-center
    values extended with the distribution's own segment slopes: distance-
    weighted average when the slopes agree in sign, min/max otherwise.
    Row k of ``g`` pairs with column k of ``E``: callers slicing velocities
    must slice both.
    """
    M = g.shape[1]
    for k in range(g.shape[0]):
        gk = g[k]
        bk = beta[k]
        gm = np.roll(gk, 1)
        gp = np.roll(gk, -1)
        if bk > 0.0:
            sl = gk - gm
            sr = gp - gk
        else:
            gpp = np.roll(gk, -2)
            sl = gp - gk
            sr = gpp - gp
        Ecol = E[:, k]
        El = np.roll(Ecol, -int(F[k]) % M)
        Er = np.roll(Ecol, (-int(F[k]) - 1) % M)
        Em = El + bk * sl
        Ep = Er - (1.0 - bk) * sr
        avg = (1.0 - bk) * Em + bk * Ep
        res = np.where(
            sl * sr >= 0.0, avg, np.where(sl > 0.0, np.minimum(Em, Ep), np.maximum(Em, Ep))
        )
        out_g[k] = exp_fac * gk + (1.0 - exp_fac) * res
