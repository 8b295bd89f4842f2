import numpy as np
import pytest
from numpy.testing import assert_allclose

from kfks.cli import main, parse_config
from kfks.errors import UsageError
from kfks.grids import SpatialGrid, VelocityGrid, compute_moments
from kfks.problems import init_smooth


def test_parse_sod_flags():
    cfg = parse_config(
        "--scheme rfks --problem sod --nx 300 --nv 50 --vmax 20 --nu 1e4 --tfinal 0.07".split()
    )
    assert cfg.scheme == "rfks" and cfg.problem == "sod"
    assert cfg.n_cells == 300 and cfg.n_velocities == 50
    assert cfg.v_max == 20.0 and cfg.nu == 1e4 and cfg.t_final == 0.07
    assert cfg.cfl == 1.0  # default


def test_parse_missing_scheme_rejected():
    with pytest.raises(UsageError):
        parse_config("--problem sod --nx 100 --nu 1".split())


def test_parse_cfl_bound():
    with pytest.raises(UsageError):
        parse_config("--scheme fks --problem sod --nx 10 --nu 1 --cfl 1.5".split())


def test_parse_conflicting_sweeps():
    with pytest.raises(UsageError):
        parse_config("--scheme fks --schemes fks,rfks --problem sod --nx 10 --nu 1".split())
    with pytest.raises(UsageError):
        parse_config("--scheme fks --problem sod --nx 10 --meshes 10,20 --nu 1".split())
    with pytest.raises(UsageError):
        parse_config("--scheme fks --problem sod --nx 10 --nu 1 --nus 10,100".split())


def test_parse_convergence_mesh_rule():
    with pytest.raises(UsageError):
        parse_config(
            "--scheme rfks --problem smooth --convergence --meshes 100,300,400".split()
        )
    cfg = parse_config(
        "--scheme rfks --problem smooth --convergence --meshes 100,200,400".split()
    )
    assert cfg.convergence and cfg.meshes == [100, 200, 400]


def test_config_file_and_flag_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(
        "# sample config\nscheme = fks\nproblem = smooth\nnx = 32\nnu = 10\nnv = 20\n"
    )
    cfg = parse_config(["--config", str(cfgfile), "--scheme", "rfks"])
    assert cfg.scheme == "rfks"  # flag wins
    assert cfg.problem == "smooth" and cfg.n_cells == 32 and cfg.n_velocities == 20


def test_config_file_unknown_key(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("schem = fks\n")
    with pytest.raises(UsageError, match="unknown key"):
        parse_config(["--config", str(cfgfile)])


def test_zero_final_time_writes_initial_profile(tmp_path):
    out = tmp_path / "out"
    rc = main(
        f"--scheme sl_upwind --problem smooth --nx 24 --nv 30 --nu 100 --tfinal 0 "
        f"--out-dir {out}".split()
    )
    assert rc == 0
    path = out / "profile_sl_upwind_smooth_M24.csv"
    data = np.genfromtxt(path, delimiter=",", names=True)
    sg = SpatialGrid(24)
    vg = VelocityGrid(30, 15.0)
    state = init_smooth("sl_upwind", sg, vg)
    mom = compute_moments(state.f, vg)
    assert_allclose(data["x"], sg.centers, rtol=1e-15)
    assert_allclose(data["rho"], mom.rho, rtol=1e-15)
    assert_allclose(data["T"], mom.temperature, rtol=1e-15)
    assert_allclose(data["raw_second_moment"], 2.0 * mom.energy, rtol=1e-15)


def test_csv_round_trip_is_exact(tmp_path):
    out = tmp_path / "out"
    rc = main(
        f"--scheme fks --problem smooth --nx 16 --nv 24 --nu 50 --tfinal 0.002 "
        f"--out-dir {out}".split()
    )
    assert rc == 0
    path = out / "profile_fks_smooth_M16.csv"
    data = np.genfromtxt(path, delimiter=",", names=True)
    sg = SpatialGrid(16)
    vg = VelocityGrid(24, 15.0)
    from kfks.schemes import advance, compute_dt
    state = init_smooth("fks", sg, vg)
    advance(state, 50.0, 0.002, compute_dt(vg, sg, 1.0))
    mom = compute_moments(state.cell_values(), vg)
    # shortest round-trip formatting re-parses to identical binary values
    assert np.all(data["rho"] == mom.rho)
    assert np.all(data["u"] == mom.u)


def test_identical_invocations_identical_bytes(tmp_path):
    args = "--scheme rfks --problem smooth --nx 20 --nv 24 --nu 100 --tfinal 0.003"
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args.split() + ["--out-dir", str(out1)]) == 0
    assert main(args.split() + ["--out-dir", str(out2)]) == 0
    p1 = (out1 / "profile_rfks_smooth_M20.csv").read_bytes()
    p2 = (out2 / "profile_rfks_smooth_M20.csv").read_bytes()
    assert p1 == p2


def test_usage_error_exit_code():
    assert main(["--problem", "sod"]) == 2


def test_numerical_error_exit_code(tmp_path):
    # T = 5 is not representable on [-3, 3]: correction failure -> exit 3
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rc = main(
            f"--scheme fks --problem smooth --nx 8 --nv 10 --vmax 3 --nu 1e3 "
            f"--tfinal 0.001 --out-dir {tmp_path}".split()
        )
    assert rc == 3


def test_convergence_mode_writes_orders(tmp_path):
    out = tmp_path / "conv"
    rc = main(
        f"--scheme rfks --problem smooth --convergence --meshes 16,32,64 "
        f"--nus 100 --tfinal 0.004 --nv 20 --out-dir {out}".split()
    )
    assert rc == 0
    text = (out / "orders_rfks.csv").read_text()
    header, row = text.strip().split("\n")
    assert header == "m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine"
    fields = row.split(",")
    assert fields[:3] == ["16", "32", "64"]
    assert float(fields[4]) != 0.0


def test_snapshot_every_writes_intermediate_profiles(tmp_path):
    out = tmp_path / "snaps"
    rc = main(
        f"--scheme fks --problem smooth --nx 16 --nv 16 --nu 10 --tfinal 0.02 "
        f"--snapshot-every 2 --out-dir {out}".split()
    )
    assert rc == 0
    snaps = sorted(out.glob("profile_fks_smooth_M16_step*.csv"))
    assert len(snaps) == 2  # steps 2 and 4 of the 4 full + 1 truncated
    data = np.genfromtxt(snaps[0], delimiter=",", names=True)
    assert data["rho"].shape == (16,)


def test_scheme_sweep_writes_combined_metrics(tmp_path):
    out = tmp_path / "sweep"
    rc = main(
        f"--schemes fks,sl_upwind --problem smooth --nx 16 --nv 16 --nu 10 "
        f"--tfinal 0.002 --out-dir {out}".split()
    )
    assert rc == 0
    text = (out / "metrics_sweep.csv").read_text().strip().split("\n")
    assert len(text) == 3  # header + 2 runs
    assert text[1].startswith("fks,16,16,")
    assert text[2].startswith("sl_upwind,16,16,")
