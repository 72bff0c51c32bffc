import json

import numpy as np
import pytest

from kirchhoff_groundstate.cli import main

BASE_PROBLEM = {
    "a": 1.0,
    "b": 0.25,
    "potential": {"kind": "constant", "params": {"v": 1.0}},
    "nonlinearity": {"kind": "pure_power", "params": {"p": 4.0}},
}
SMALL_GRID = {"r_max": 12.0, "n": 401}
SMALL_SOLVER = {"grad_tol": 1e-4}


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(cmd, cfg_path, out, extra=()):
    return main([cmd, "--config", cfg_path, "--out", str(out), *extra])


@pytest.fixture(scope="module")
def solve_run(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("solve")
    cfg = write_config(
        tmp, {"problem": BASE_PROBLEM, "grid": SMALL_GRID, "solver": SMALL_SOLVER}
    )
    out = tmp / "out"
    code = run("solve", cfg, out)
    return code, cfg, out


def test_solve_valid_config_converges(solve_run):
    code, _, out = solve_run
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["status"] == "converged"
    assert result["m"] > 0
    assert len(result["config_sha256"]) == 64


def test_solve_writes_profile_and_trace(solve_run):
    _, _, out = solve_run
    result = json.loads((out / "result.json").read_text())
    for name, ncols in (("profile.csv", 2), ("trace.csv", 4)):
        lines = (out / name).read_text().splitlines()
        assert lines[0] == f"# config_sha256={result['config_sha256']}"
        data = np.loadtxt(out / name, delimiter=",", skiprows=2)
        assert data.shape[1] == ncols
    prof = np.loadtxt(out / "profile.csv", delimiter=",", skiprows=2)
    assert prof[0, 0] == 0.0 and prof[-1, 1] == 0.0


def test_timestamps_only_in_metadata(solve_run):
    _, _, out = solve_run
    meta = json.loads((out / "metadata.json").read_text())
    assert "written_at" in meta and meta["command"] == "solve"
    result = (out / "result.json").read_text()
    assert "written_at" not in result


def test_rerun_is_byte_identical(solve_run, tmp_path):
    _, cfg, out = solve_run
    out2 = tmp_path / "again"
    assert run("solve", cfg, out2) == 0
    for name in ("result.json", "profile.csv", "trace.csv"):
        assert (out / name).read_bytes() == (out2 / name).read_bytes()


def test_config_error_negative_b(tmp_path):
    prob = json.loads(json.dumps(BASE_PROBLEM))
    prob["b"] = -1.0
    cfg = write_config(tmp_path, {"problem": prob})
    assert run("solve", cfg, tmp_path / "out") == 1


def test_config_error_tiny_grid(tmp_path):
    cfg = write_config(tmp_path, {"problem": BASE_PROBLEM, "grid": {"n": 8}})
    assert run("solve", cfg, tmp_path / "out") == 1


def test_config_error_unknown_key(tmp_path):
    cfg = write_config(tmp_path, {"problem": BASE_PROBLEM, "surprise": True})
    assert run("solve", cfg, tmp_path / "out") == 1


def test_config_error_unreadable(tmp_path):
    assert run("solve", str(tmp_path / "missing.json"), tmp_path / "out") == 1


def test_config_error_bad_exponent(tmp_path):
    prob = json.loads(json.dumps(BASE_PROBLEM))
    prob["nonlinearity"]["params"]["p"] = 7.0
    cfg = write_config(tmp_path, {"problem": prob})
    assert run("solve", cfg, tmp_path / "out") == 1


def _remark_family_config(a):
    return {
        "problem": {
            "a": a,
            "b": 0.25,
            "potential": {
                "kind": "inverse_poly",
                "params": {"alpha": 2.0, "beta": 1.0, "sigma": 2.0},
            },
            "nonlinearity": {"kind": "pure_power", "params": {"p": 4.0}},
        },
        "grid": SMALL_GRID,
        "verify": {"n_iip_samples": 25, "n_hardy_samples": 10},
    }


def test_verify_passing_potential(tmp_path):
    cfg = write_config(tmp_path, _remark_family_config(20.0))
    out = tmp_path / "out"
    assert run("verify", cfg, out) == 0
    report = json.loads((out / "verify.json").read_text())
    assert report["all_passed"]
    for check in ("potential.decay_map", "potential.dilation_gap", "hardy", "iip"):
        assert report["checks"][check]["verdict"] == "pass"


def test_verify_failing_potential_exit_3(tmp_path):
    cfg = write_config(tmp_path, _remark_family_config(1.0))
    out = tmp_path / "out"
    assert run("verify", cfg, out) == 3
    report = json.loads((out / "verify.json").read_text())
    assert "potential.slope_bound" in report["failed"]
    assert report["checks"]["potential.slope_bound"]["location"] is not None


def test_oracle_records_gap(tmp_path):
    cfg = write_config(
        tmp_path, {"problem": BASE_PROBLEM, "grid": SMALL_GRID, "solver": SMALL_SOLVER}
    )
    out = tmp_path / "out"
    assert run("oracle", cfg, out) == 0
    report = json.loads((out / "oracle.json").read_text())
    assert abs(report["relative_gap"]) < 0.01
    assert report["m_direct"] > 0 and report["m_oracle"] > 0


def test_oracle_requires_constant_potential(tmp_path):
    cfg = write_config(tmp_path, _remark_family_config(20.0))
    assert run("oracle", cfg, tmp_path / "out") == 1


def test_lambda_sweep_nonincreasing(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "problem": BASE_PROBLEM,
            "grid": SMALL_GRID,
            "solver": SMALL_SOLVER,
            "lambda_grid": [0.6, 0.8, 1.0],
        },
    )
    out = tmp_path / "out"
    assert run("sweep", cfg, out) == 0
    data = np.loadtxt(out / "sweep.csv", delimiter=",", skiprows=2)
    assert np.all(np.diff(data[:, 1]) <= 1e-6)


def test_axis_sweep_with_workers(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "problem": BASE_PROBLEM,
            "grid": SMALL_GRID,
            "solver": SMALL_SOLVER,
            "sweep": {"axis": "b", "values": [0.25, 0.5]},
        },
    )
    out = tmp_path / "out"
    assert run("sweep", cfg, out, extra=("--workers", "2")) == 0
    data = np.loadtxt(out / "sweep.csv", delimiter=",", skiprows=2)
    assert data.shape == (2, 5)
    assert np.all(data[:, 4] == 1.0)
    assert data[1, 1] > data[0, 1]  # larger b raises the ground energy


def test_fibering_scan_single_sign_change(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "problem": BASE_PROBLEM,
            "grid": SMALL_GRID,
            "t_scan": {"t_lo": 0.01, "t_hi": 100.0, "n": 120},
        },
    )
    out = tmp_path / "out"
    assert run("fibering", cfg, out) == 0
    data = np.loadtxt(out / "fibering.csv", delimiter=",", skiprows=2)
    s = np.sign(data[:, 2])
    s = s[s != 0]
    assert int(np.sum(s[1:] != s[:-1])) == 1
