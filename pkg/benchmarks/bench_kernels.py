"""Benchmark the compiled kernels against the pure-numpy fallback.

Runs each hot kernel on representative shapes and a full step of every
scheme, printing a side-by-side table with speedups.

    python3 benchmarks/bench_kernels.py [--nx 1200] [--nv 50] [--steps 40]
"""

import argparse
import time
import warnings

import numpy as np

import kfks._kernels_py as kpy

try:
    import kfks._kernels as kc
except ImportError:
    kc = None

from kfks import kernels as active
from kfks.grids import SpatialGrid, VelocityGrid
from kfks.problems import init_oscillating
from kfks.schemes import SCHEMES, compute_dt, step


def timeit(fn, repeat):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_kernels(M, N, repeat):
    rng = np.random.default_rng(0)
    vg = VelocityGrid(N, 15.0)
    v, dv = vg.velocities, vg.dv
    envelope = np.exp(-(v**2) / 8.0)
    f = (0.5 + rng.random((M, N))) * envelope
    alpha = rng.uniform(-1, 1, N)
    g = np.ascontiguousarray(f.T)
    r = rng.integers(-M, M, N).astype(np.intp)
    theta = rng.uniform(0, 1, N)
    F = rng.integers(0, M, N).astype(np.intp)
    beta = rng.uniform(0, 1, N)
    E = np.empty_like(f)
    params = np.empty((M, 3))
    out = np.empty_like(f)
    out_g = np.empty_like(g)

    cases = {
        "moments": lambda m: m.moments(f, v, dv, np.empty(M), np.empty(M), np.empty(M)),
        "equilibrium_field": lambda m: m.equilibrium_field(f, v, dv, 1e-12, 50, E, params),
        "bgk_relax": lambda m: m.bgk_relax(f.copy(), v, dv, 0.5, 1e-12, 50),
        "sl_upwind_transport": lambda m: m.sl_upwind_transport(f, alpha, True, out),
        "sl_muscl_transport": lambda m: m.sl_muscl_transport(f, alpha, True, out),
        "pc_sample": lambda m: m.pc_sample(g, r, out),
        "pl_sample": lambda m: m.pl_sample(g, r, theta, out),
        "pl_knot_update": lambda m: m.pl_knot_update(g, E, F, beta, 0.5, out_g),
    }
    rows = []
    for name, call in cases.items():
        t_py = timeit(lambda: call(kpy), repeat)
        t_c = timeit(lambda: call(kc), repeat) if kc is not None else float("nan")
        rows.append((name, t_py, t_c))
    return rows


_PATCHABLE = (
    "moments",
    "equilibrium_field",
    "bgk_relax",
    "van_leer_deltas",
    "sl_upwind_transport",
    "sl_muscl_transport",
    "pc_sample",
    "pc_update",
    "pl_sample",
    "pl_knot_update",
)


def bench_steps(M, N, n_steps):
    vg = VelocityGrid(N, 15.0)
    sg = SpatialGrid(M)
    dt = compute_dt(vg, sg, 1.0)
    rows = []
    for scheme in SCHEMES:
        per = {}
        for mod, label in ((kc, "compiled"), (kpy, "python")):
            if mod is None:
                per[label] = float("nan")
                continue
            for name in _PATCHABLE:
                setattr(active, name, getattr(mod, name))
            state = init_oscillating(scheme, sg, vg, 0.02)
            step(state, 1e2, dt)  # warm up
            t0 = time.perf_counter()
            for _ in range(n_steps):
                step(state, 1e2, dt)
            per[label] = (time.perf_counter() - t0) / n_steps
        rows.append((f"step[{scheme}]", per["python"], per["compiled"]))
    for name in _PATCHABLE:
        setattr(active, name, getattr(active.backend, name))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, default=1200)
    ap.add_argument("--nv", type=int, default=50)
    ap.add_argument("--steps", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    if kc is None:
        print("compiled extension not available; showing python backend only")
    print(f"M = {args.nx} cells, N = {args.nv} velocities\n")
    print(f"{'kernel':24s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = bench_kernels(args.nx, args.nv, args.repeat)
        rows += bench_steps(args.nx, args.nv, args.steps)
    for name, t_py, t_c in rows:
        speed = t_py / t_c if t_c == t_c and t_c > 0 else float("nan")
        print(f"{name:24s} {t_py * 1e3:10.3f}ms {t_c * 1e3:10.3f}ms {speed:8.1f}x")


if __name__ == "__main__":
    main()
