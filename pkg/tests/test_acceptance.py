"""Acceptance criteria, one test per criterion, printed as pass/fail lines.

Heavy runs (Sod, oscillating, cost sweep) are shared through module-scoped
fixtures.  Tolerances are asserted exactly as stated; the conservation
criterion for R-FKS at nu > 0 is known to fail because the min/max branch
of the extreme-point Maxwellian resolution is not telescoping (see the
scheme's definition: disagreeing slopes take the less extreme one-sided
state, which breaks the exact cancellation the other branches provide).
The criterion is asserted anyway rather than weakened.
"""

import sys
import time

import numpy as np
import pytest

from kfks.diagnostics import convergence_order, front_width, total_variation
from kfks.equilibrium import discrete_maxwellian, discrete_maxwellian_field
from kfks.grids import OUTFLOW, SpatialGrid, VelocityGrid, compute_moments
from kfks.problems import init_oscillating, init_smooth, init_sod
from kfks.schemes import (
    FKS,
    RFKS,
    SCHEMES,
    SL_MUSCL,
    SL_UPWIND,
    advance,
    compute_dt,
    make_state,
    step,
)


# the smooth problem compresses to T ~ 10 where the +/-15 velocity bounds
# leave ~2e-6 tail mass, and the random-moment sweep probes (u, T) corners:
# the resulting truncation warnings are expected at these parameters
pytestmark = pytest.mark.filterwarnings("ignore:analytic Maxwellian tail mass")


def _report(name: str, ok: bool, detail: str = "") -> None:
    # bypass pytest's capture so every criterion prints its line even when
    # the test passes
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}", file=sys.__stdout__)


def _totals(state):
    mom = compute_moments(state.cell_values(), state.vgrid)
    dx = state.sgrid.dx
    return np.array([mom.rho.sum() * dx, mom.mom.sum() * dx, mom.energy.sum() * dx])


# -- criterion 1: convergence orders (Table 1 analogue) ----------------------


def test_convergence_orders():
    vgrid = VelocityGrid(50, 15.0)
    meshes = [100, 200, 400, 800, 1600]
    dt = compute_dt(vgrid, SpatialGrid(meshes[-1]), 1.0)
    coarse_x = SpatialGrid(meshes[0]).centers
    bands = {1e1: (1.7, 2.7), 1e2: (1.7, 2.7), 1e4: (1.9, 2.8)}
    results = {}
    for nu in bands:
        rho = []
        for m in meshes:
            state = init_smooth(RFKS, SpatialGrid(m), vgrid)
            advance(state, nu, 0.025, dt)
            vals = state.nodal.sample_at(coarse_x)
            rho.append(vgrid.dv * vals.sum(axis=1))
        p, _, _ = convergence_order(rho[-3], rho[-2], rho[-1])
        results[nu] = p
    ok = all(bands[nu][0] <= p <= bands[nu][1] and p >= 1.8 for nu, p in results.items())
    _report(
        "convergence-orders",
        ok,
        " ".join(f"nu={nu:g}: p={p:.3f}" for nu, p in results.items()),
    )
    for nu, p in results.items():
        lo, hi = bands[nu]
        assert lo <= p <= hi, f"order {p} outside [{lo}, {hi}] at nu={nu:g}"
        assert p >= 1.8, f"order {p} < 1.8 at nu={nu:g}"


# -- criterion 2: conservation suite ------------------------------------------


@pytest.mark.parametrize("nu", [0.0, 1e2, 1e4], ids=["nu=0", "nu=1e2", "nu=1e4"])
@pytest.mark.parametrize("scheme", SCHEMES)
def test_conservation(scheme, nu):
    vgrid = VelocityGrid(50, 15.0)
    sgrid = SpatialGrid(100)
    state = init_smooth(scheme, sgrid, vgrid)
    tot0 = _totals(state)
    dt = compute_dt(vgrid, sgrid, 1.0)
    for _ in range(200):
        step(state, nu, dt)
    tot1 = _totals(state)
    scale = np.maximum(np.abs(tot0), tot0[0])
    drift = np.abs(tot1 - tot0) / scale
    worst = float(drift.max())
    ok = worst <= 1e-10
    _report("conservation", ok, f"{scheme} nu={nu:g}: max drift {worst:.2e}")
    assert ok, f"{scheme} at nu={nu:g}: drift {worst:.2e} > 1e-10"


# -- criterion 3: collisionless exactness -------------------------------------


def test_collisionless_exactness_fks():
    rng = np.random.default_rng(17)
    sgrid = SpatialGrid(100)
    vgrid = VelocityGrid(50, 15.0)
    f0 = rng.random((100, 50)) + 0.1
    state = make_state(FKS, f0, sgrid, vgrid)
    dt = compute_dt(vgrid, sgrid, 1.0)
    n = 157
    for _ in range(n):
        step(state, 0.0, dt)
    out = state.cell_values()
    L, dx = sgrid.length, sgrid.dx
    err = 0.0
    for k in range(50):
        s = np.mod(n * vgrid.velocities[k] * dt, L)
        idx = np.floor(np.mod(sgrid.centers - s, L) / dx).astype(int) % 100
        err = max(err, float(np.abs(out[:, k] - f0[idx, k]).max()))
    ok = err <= 1e-12
    _report("collisionless-exactness-fks", ok, f"max error {err:.2e} after {n} steps")
    assert ok


def test_collisionless_exactness_rfks():
    sgrid = SpatialGrid(100)
    vgrid = VelocityGrid(50, 15.0)
    state = init_smooth(RFKS, sgrid, vgrid)
    f0 = state.cell_values().copy()
    dt = compute_dt(vgrid, sgrid, 1.0)
    n = 157
    for _ in range(n):
        step(state, 0.0, dt)
    out = state.cell_values()
    L, dx = sgrid.length, sgrid.dx
    err = 0.0
    for k in range(50):
        y = np.mod(sgrid.centers - n * vgrid.velocities[k] * dt, L)
        t = y / dx - 0.5
        i0 = np.floor(t).astype(int) % 100
        th = t - np.floor(t)
        ref = (1.0 - th) * f0[i0, k] + th * f0[(i0 + 1) % 100, k]
        err = max(err, float(np.abs(out[:, k] - ref).max()))
    ok = err <= 1e-12
    _report("collisionless-exactness-rfks", ok, f"max error {err:.2e} after {n} steps")
    assert ok


# -- criterion 4: equilibrium fixed point --------------------------------------


def test_equilibrium_fixed_point():
    vgrid = VelocityGrid(50, 15.0)
    sgrid = SpatialGrid(32)
    E, _ = discrete_maxwellian((1.0, 0.0, 2.5), vgrid)
    f0 = np.tile(E, (32, 1))
    dt = compute_dt(vgrid, sgrid, 1.0)
    worst = {}
    for scheme in SCHEMES:
        state = make_state(scheme, f0, sgrid, vgrid)
        for _ in range(100):
            step(state, 1e4, dt)
        worst[scheme] = float(np.abs(state.cell_values() - f0).max())
    ok = all(w <= 1e-10 for w in worst.values())
    _report(
        "equilibrium-fixed-point",
        ok,
        " ".join(f"{s}: {w:.2e}" for s, w in worst.items()),
    )
    for scheme, w in worst.items():
        assert w <= 1e-10, f"{scheme} drifted {w:.2e} from uniform equilibrium"


# -- criteria 5-7 share the Sod and oscillating runs ---------------------------


@pytest.fixture(scope="module")
def sod_density():
    vgrid = VelocityGrid(50, 20.0)
    sgrid = SpatialGrid(300, boundary_kind=OUTFLOW)
    dt = compute_dt(vgrid, sgrid, 1.0)
    rho = {}
    for scheme in SCHEMES:
        state = init_sod(scheme, sgrid, vgrid)
        advance(state, 1e4, 0.07, dt)
        rho[scheme] = compute_moments(state.cell_values(), vgrid).rho
    return sgrid, rho


def test_riemann_contact_sharpness(sod_density):
    sgrid, rho = sod_density
    x = sgrid.centers
    ref = rho[RFKS]
    sel = (x > 0.5) & (x < 0.8)
    jumps = np.abs(np.diff(ref)) * sel[:-1]
    xc = x[int(np.argmax(jumps))]
    widths = {}
    for scheme in (RFKS, SL_MUSCL, SL_UPWIND):
        r = rho[scheme]
        hi = float(np.median(r[(x > xc - 0.1) & (x < xc - 0.04)]))
        lo = float(np.median(r[(x > xc + 0.04) & (x < xc + 0.1)]))
        widths[scheme] = front_width(r[(x > xc - 0.04) & (x < xc + 0.04)], hi, lo)
    ok = widths[RFKS] <= widths[SL_MUSCL] <= widths[SL_UPWIND]
    _report(
        "riemann-contact-sharpness",
        ok,
        f"contact at x={xc:.3f}, widths " + " ".join(f"{s}={w}" for s, w in widths.items()),
    )
    assert widths[RFKS] <= widths[SL_MUSCL]
    assert widths[SL_MUSCL] <= widths[SL_UPWIND]


@pytest.fixture(scope="module")
def oscillating_density():
    vgrid = VelocityGrid(50, 30.0)
    sgrid = SpatialGrid(600)
    dt = compute_dt(vgrid, sgrid, 1.0)
    rho = {}
    for scheme in SCHEMES:
        state = init_oscillating(scheme, sgrid, vgrid, 0.02)
        advance(state, 1e2, 0.025, dt)
        rho[scheme] = compute_moments(state.cell_values(), vgrid).rho
    return rho


def test_oscillating_anti_diffusion(oscillating_density):
    tv = {s: total_variation(r) for s, r in oscillating_density.items()}
    ok = (
        tv[FKS] >= tv[SL_MUSCL] >= tv[SL_UPWIND]
        and tv[RFKS] >= tv[SL_MUSCL]
    )
    _report(
        "oscillating-anti-diffusion",
        ok,
        " ".join(f"TV({s})={v:.3f}" for s, v in tv.items()),
    )
    assert tv[FKS] >= tv[SL_MUSCL] >= tv[SL_UPWIND]
    assert tv[RFKS] >= tv[SL_MUSCL]


def test_cost_trend():
    # Table 2 setup: oscillating problem on [-15, 15], absolute seconds are
    # machine-bound, only trends and ratios are asserted
    vgrid = VelocityGrid(50, 15.0)
    meshes = (600, 1200, 2400, 4800)
    wall = {}
    cell_cycles = {}
    for m in meshes:
        sgrid = SpatialGrid(m)
        dt = compute_dt(vgrid, sgrid, 1.0)
        for scheme in SCHEMES:
            state = init_oscillating(scheme, sgrid, vgrid, 0.02)
            t0 = time.perf_counter()
            cycles = advance(state, 1e2, 0.025, dt)
            wall[(scheme, m)] = time.perf_counter() - t0
            cell_cycles[(scheme, m)] = cycles * m
    t_cell = {
        s: sum(wall[(s, m)] for m in meshes) / sum(cell_cycles[(s, m)] for m in meshes)
        for s in SCHEMES
    }
    ratios = [wall[(RFKS, m)] / wall[(SL_UPWIND, m)] for m in meshes]
    ok = t_cell[FKS] < t_cell[SL_MUSCL] and all(0.5 <= r <= 4.0 for r in ratios)
    _report(
        "cost-trend",
        ok,
        f"T_cell fks={t_cell[FKS]:.2e} muscl={t_cell[SL_MUSCL]:.2e}; "
        f"rfks/upwind ratios {['%.2f' % r for r in ratios]}",
    )
    assert t_cell[FKS] < t_cell[SL_MUSCL]
    for r in ratios:
        assert 0.5 <= r <= 4.0


# -- criterion 8: random-moment equilibrium correction --------------------------


def test_random_moment_correction():
    rng = np.random.default_rng(2024)
    vgrid = VelocityGrid(50, 15.0)
    n = 10_000
    rho = rng.uniform(0.1, 2.0, n)
    u = rng.uniform(-2.0, 2.0, n)
    T = rng.uniform(0.5, 8.0, n)
    E, _ = discrete_maxwellian_field(rho, u, T, vgrid)
    v = vgrid.velocities
    m0 = vgrid.dv * E.sum(axis=1)
    m1 = vgrid.dv * (E @ v)
    m2 = 0.5 * vgrid.dv * (E @ (v * v))
    en = 0.5 * rho * (u * u + T)
    scale = np.stack([rho, np.maximum(np.abs(rho * u), rho), np.maximum(en, rho)], axis=1)
    resid = np.abs(np.stack([m0 - rho, m1 - rho * u, m2 - en], axis=1)) / scale
    worst = float(resid.max())
    ok = worst <= 1e-12
    _report("random-moment-correction", ok, f"{n} triples, max residual {worst:.2e}")
    assert ok
