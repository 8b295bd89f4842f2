"""Command-line front end: single runs, mesh/scheme sweeps, convergence mode.

Outputs are CSV: a profile per run (x, rho, u, T, raw_second_moment), a
metrics file with the timing counters, and in convergence mode an order
table. Solution-bearing CSVs are byte-deterministic for identical configs
(floats are written with shortest round-trip formatting); the metrics file
contains wall-clock times and is inherently not.

Exit codes: 0 ok, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from kfks.diagnostics import RunMetrics, convergence_order
from kfks.errors import KineticError, UsageError
from kfks.grids import SpatialGrid, VelocityGrid, compute_moments
from kfks.problems import PROBLEMS, SMOOTH, init_problem, spec_for
from kfks.reconstruction import evaluate_cell_poly, van_leer_slopes
from kfks.schemes import SCHEMES, SL_MUSCL, SL_UPWIND, advance, compute_dt

DEFAULT_NUS = (1e1, 1e2, 1e4)


@dataclass
class RunConfig:
    scheme: str | None = None
    problem: str | None = None
    n_cells: int | None = None
    n_velocities: int = 50
    v_max: float | None = None
    nu: float | None = None
    t_final: float | None = None
    cfl: float = 1.0
    delta: float = 0.02
    out_dir: str = "out"
    snapshot_every: int = 0
    schemes: list[str] = field(default_factory=list)
    meshes: list[int] = field(default_factory=list)
    nus: list[float] = field(default_factory=list)
    convergence: bool = False


_FILE_KEYS = {
    "scheme": str,
    "problem": str,
    "nx": int,
    "nv": int,
    "vmax": float,
    "nu": float,
    "tfinal": float,
    "cfl": float,
    "delta": float,
    "out_dir": str,
    "snapshot_every": int,
    "schemes": str,
    "meshes": str,
    "nus": str,
    "convergence": str,
}


def _read_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FILE_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _FILE_KEYS[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {val!r}") from exc
    return values


def _split_list(raw, conv):
    if raw is None or raw == "":
        return []
    if isinstance(raw, (list, tuple)):
        return [conv(x) for x in raw]
    return [conv(x.strip()) for x in str(raw).split(",") if x.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kfks", description="1D discrete-velocity BGK solver")
    p.add_argument("--config", help="flat key = value config file; flags override")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--nx", type=int, help="number of spatial cells")
    p.add_argument("--nv", type=int, help="number of lattice velocities (default 50)")
    p.add_argument("--vmax", type=float, help="velocity truncation bound (default per problem)")
    p.add_argument("--nu", type=float, help="collision frequency")
    p.add_argument("--tfinal", type=float, help="final time (default per problem)")
    p.add_argument("--cfl", type=float, help="CFL number in (0, 1], default 1")
    p.add_argument("--delta", type=float, help="oscillating band width, default 0.02")
    p.add_argument("--out-dir", dest="out_dir", help="output directory (default out)")
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int,
                   help="write a profile every k cycles (0 = final only)")
    p.add_argument("--schemes", help="comma list for a scheme sweep")
    p.add_argument("--meshes", help="comma list of cell counts for a mesh sweep")
    p.add_argument("--nus", help="comma list of collision frequencies (convergence mode)")
    p.add_argument("--convergence", action="store_true", default=None,
                   help="mesh-refinement order study (fixed finest-mesh dt)")
    return p


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    file_vals = _read_config_file(args.config) if args.config else {}

    def pick(flag_name, file_key, default=None):
        v = getattr(args, flag_name)
        if v is not None:
            return v
        if file_key in file_vals:
            return file_vals[file_key]
        return default

    cfg = RunConfig(
        scheme=pick("scheme", "scheme"),
        problem=pick("problem", "problem"),
        n_cells=pick("nx", "nx"),
        n_velocities=pick("nv", "nv", 50),
        v_max=pick("vmax", "vmax"),
        nu=pick("nu", "nu"),
        t_final=pick("tfinal", "tfinal"),
        cfl=pick("cfl", "cfl", 1.0),
        delta=pick("delta", "delta", 0.02),
        out_dir=pick("out_dir", "out_dir", "out"),
        snapshot_every=pick("snapshot_every", "snapshot_every", 0),
        schemes=_split_list(pick("schemes", "schemes"), str),
        meshes=_split_list(pick("meshes", "meshes"), int),
        nus=_split_list(pick("nus", "nus"), float),
        convergence=bool(pick("convergence", "convergence", False)),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.problem is None:
        raise UsageError("--problem is required")
    if cfg.problem not in PROBLEMS:
        raise UsageError(f"unknown problem {cfg.problem!r}")
    for s in cfg.schemes:
        if s not in SCHEMES:
            raise UsageError(f"unknown scheme {s!r}")
    if not 0.0 < cfg.cfl <= 1.0:
        raise UsageError(f"--cfl must be in (0, 1], got {cfg.cfl}")
    if cfg.n_velocities < 2:
        raise UsageError("--nv must be at least 2")
    if cfg.nu is None and not cfg.convergence:
        raise UsageError("--nu is required")
    if cfg.convergence:
        if cfg.schemes:
            raise UsageError("--convergence runs a single scheme; use --scheme")
        if cfg.scheme is None:
            raise UsageError("--scheme is required")
        if cfg.problem != SMOOTH:
            raise UsageError("convergence mode applies to the smooth problem")
        if len(cfg.meshes) < 3:
            raise UsageError("convergence mode needs --meshes with at least 3 entries")
        for a, b in zip(cfg.meshes, cfg.meshes[1:]):
            if b != 2 * a:
                raise UsageError("convergence meshes must double: m, 2m, 4m, ...")
    else:
        if cfg.nus:
            raise UsageError("--nus applies to convergence mode; use --nu")
        if cfg.scheme is None and not cfg.schemes:
            raise UsageError("--scheme (or --schemes) is required")
        if cfg.scheme is not None and cfg.schemes:
            raise UsageError("give either --scheme or --schemes, not both")
        if cfg.n_cells is None and not cfg.meshes:
            raise UsageError("--nx (or --meshes) is required")
        if cfg.n_cells is not None and cfg.meshes:
            raise UsageError("give either --nx or --meshes, not both")
    if any(m <= 0 for m in cfg.meshes) or (cfg.n_cells is not None and cfg.n_cells <= 0):
        raise UsageError("cell counts must be positive")


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_profile(path: Path, sgrid: SpatialGrid, vgrid: VelocityGrid, f: np.ndarray) -> None:
    mom = compute_moments(f, vgrid)
    _write_csv(
        path,
        ["x", "rho", "u", "T", "raw_second_moment"],
        [sgrid.centers, mom.rho, mom.u, mom.temperature, mom.raw_second_moment],
    )


def write_metrics(path: Path, metrics: list[RunMetrics]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["scheme,n_cells,n_velocities,n_cycles,wall_time,time_per_cycle,time_per_cell"]
    for m in metrics:
        lines.append(
            f"{m.scheme},{m.n_cells},{m.n_velocities},{m.n_cycles},"
            f"{_fmt(m.wall_time)},{_fmt(m.time_per_cycle)},{_fmt(m.time_per_cell)}"
        )
    path.write_text("\n".join(lines) + "\n")


def run_single(cfg: RunConfig, scheme: str, n_cells: int) -> RunMetrics:
    spec = _problem_spec(cfg)
    sgrid = SpatialGrid(n_cells, spec.domain_length, spec.boundary_kind)
    vgrid = VelocityGrid(cfg.n_velocities, spec.v_max)
    state = init_problem(scheme, spec, sgrid, vgrid)
    dt = compute_dt(vgrid, sgrid, cfg.cfl)
    out = Path(cfg.out_dir)
    tag = f"{scheme}_{spec.kind}_M{n_cells}"

    snapshots = []
    if cfg.snapshot_every > 0:
        def on_step(st):
            if st.step_count % cfg.snapshot_every == 0:
                snapshots.append((st.step_count, st.cell_values().copy()))
    else:
        on_step = None

    t0 = time.perf_counter()
    cycles = advance(state, spec.nu, spec.t_final, dt, on_step=on_step)
    wall = time.perf_counter() - t0

    write_profile(out / f"profile_{tag}.csv", sgrid, vgrid, state.cell_values())
    for step_idx, fvals in snapshots:
        write_profile(out / f"profile_{tag}_step{step_idx}.csv", sgrid, vgrid, fvals)
    metrics = RunMetrics(scheme, n_cells, cfg.n_velocities, cycles, wall)
    write_metrics(out / f"metrics_{tag}.csv", [metrics])
    return metrics


def _problem_spec(cfg: RunConfig):
    overrides = {}
    if cfg.v_max is not None:
        overrides["v_max"] = cfg.v_max
    if cfg.t_final is not None:
        overrides["t_final"] = cfg.t_final
    if cfg.problem == "oscillating":
        overrides["delta"] = cfg.delta
    return spec_for(cfg.problem, cfg.nu if cfg.nu is not None else 0.0, **overrides)


def density_at(state, x: np.ndarray) -> np.ndarray:
    """Density sampled through the scheme's own representation at positions x."""
    dv = state.vgrid.dv
    if state.scheme in (SL_UPWIND, SL_MUSCL):
        slopes = van_leer_slopes(state.f, state.sgrid) if state.scheme == SL_MUSCL else None
        vals = evaluate_cell_poly(state.f, slopes, state.sgrid, x)
    else:
        vals = state.nodal.sample_at(x)
    return dv * vals.sum(axis=1)


def run_convergence(cfg: RunConfig) -> None:
    nus = cfg.nus or list(DEFAULT_NUS)
    meshes = cfg.meshes
    base = spec_for(SMOOTH, 0.0, **({"v_max": cfg.v_max} if cfg.v_max else {}),
                    **({"t_final": cfg.t_final} if cfg.t_final else {}))
    vgrid = VelocityGrid(cfg.n_velocities, base.v_max)
    finest = SpatialGrid(meshes[-1], base.domain_length, base.boundary_kind)
    dt = compute_dt(vgrid, finest, cfg.cfl)
    coarse_x = SpatialGrid(meshes[0], base.domain_length, base.boundary_kind).centers

    rows = []
    for nu in nus:
        spec = spec_for(SMOOTH, nu, v_max=base.v_max, t_final=base.t_final)
        rho_samples = []
        for m in meshes:
            sgrid = SpatialGrid(m, spec.domain_length, spec.boundary_kind)
            state = init_problem(cfg.scheme, spec, sgrid, vgrid)
            advance(state, nu, spec.t_final, dt)
            rho_samples.append(density_at(state, coarse_x))
        for i in range(len(meshes) - 2):
            p, num, den = convergence_order(rho_samples[i], rho_samples[i + 1], rho_samples[i + 2])
            rows.append((meshes[i], meshes[i + 1], meshes[i + 2], nu, p, num, den))

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine"]
    for m0, m1, m2, nu, p, num, den in rows:
        lines.append(f"{m0},{m1},{m2},{_fmt(nu)},{_fmt(p)},{_fmt(num)},{_fmt(den)}")
    (out / f"orders_{cfg.scheme}.csv").write_text("\n".join(lines) + "\n")


def run(cfg: RunConfig) -> None:
    if cfg.convergence:
        run_convergence(cfg)
        return
    schemes = cfg.schemes or [cfg.scheme]
    meshes = cfg.meshes or [cfg.n_cells]
    all_metrics = []
    for scheme in schemes:
        for m in meshes:
            all_metrics.append(run_single(cfg, scheme, m))
    if len(all_metrics) > 1:
        write_metrics(Path(cfg.out_dir) / "metrics_sweep.csv", all_metrics)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv if argv is not None else sys.argv[1:])
        run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except KineticError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
