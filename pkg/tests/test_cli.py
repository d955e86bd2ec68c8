import json
import math

from pointsaga import cli, theoretical_rate
import pointsaga.solver
import pointsaga.verify


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    return lines[0], lines[1:]


# --- rates -----------------------------------------------------------------------


def test_rates_unit_case(capsys):
    code = cli.main(["rates", "--gamma", "1", "--s", "1", "--n", "1",
                     "--mu", "1", "--L", "1"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rho"] == 0.5
    assert out["rho_defazio"] == 0.5
    assert out["rho_dr"] == 0.5


def test_rates_hand_case(capsys):
    code = cli.main(["rates", "--gamma", "0.1", "--s", "1", "--n", "10",
                     "--mu", "1", "--L", "10"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["rho"] - 29 / 31) <= 1e-12
    assert out["rho_defazio"] == 0.95
    assert "rho_dr" not in out


def test_rates_invalid_constants(capsys):
    code = cli.main(["rates", "--gamma", "1", "--s", "1", "--n", "1",
                     "--mu", "2", "--L", "1"])
    assert code == 2


# --- run -------------------------------------------------------------------------


def run_args(tmp_path, **over):
    base = {
        "problem": "quad", "n": "20", "dim": "4", "mu": "1", "L": "10",
        "s": "4", "gamma": "auto", "iters": "300", "seed": "42",
        "repeats": "1", "trace-every": "10", "out": str(tmp_path),
    }
    base.update(over)
    argv = ["run"]
    for key, val in base.items():
        argv += [f"--{key}", val]
    return argv


def test_run_writes_trace_and_summary(tmp_path):
    code = cli.main(run_args(tmp_path))
    assert code == 0
    header, rows = read_csv(tmp_path / "trace_seed42.csv")
    assert header == "t,dist_sq,lyapunov,table_drift,wall_ns"
    # Records at t=0, every 10th iteration, and the final t.
    expect = sorted({0, *range(10, 301, 10), 300})
    assert [int(r.split(",")[0]) for r in rows] == expect

    summary = json.loads((tmp_path / "summary.json").read_text())
    gamma = math.sqrt(4 / (10 * 1 * 20))
    expect_rho = theoretical_rate(gamma, 4, 20, 1.0, 10.0).rho
    assert abs(summary["rho"] - expect_rho) <= 1e-12
    assert summary["final_dist_sq"] >= 0
    assert summary["prox_calls"] == 4 * 300
    assert 0 < summary["empirical_contraction"] < 1


def test_run_traces_are_byte_identical(tmp_path):
    # Byte identity covers every column except wall_ns, which is real wall
    # time and cannot repeat.
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    out1.mkdir()
    out2.mkdir()
    assert cli.main(run_args(tmp_path, out=str(out1))) == 0
    assert cli.main(run_args(tmp_path, out=str(out2))) == 0

    def strip_wall(path):
        return b"\n".join(
            line.rsplit(b",", 1)[0]
            for line in path.read_bytes().strip().split(b"\n")
        )

    assert strip_wall(out1 / "trace_seed42.csv") == strip_wall(
        out2 / "trace_seed42.csv"
    )


def test_run_batch_larger_than_n_exits_2(tmp_path, capsys):
    code = cli.main(run_args(tmp_path, s="60", n="50"))
    assert code == 2
    assert "InvalidBatchSize" in capsys.readouterr().err


def test_run_missing_data_file_exits_3(tmp_path):
    code = cli.main(run_args(tmp_path, problem="file:/does/not/exist"))
    assert code == 3


def test_run_malformed_data_file_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("+1 1:abc\n")
    code = cli.main(run_args(tmp_path, problem=f"file:{bad}"))
    assert code == 3
    assert "line 1" in capsys.readouterr().err


def test_run_on_tiny_libsvm_file(tmp_path):
    data = tmp_path / "tiny.txt"
    data.write_text("+1 1:1.0 2:0.5\n-1 1:-0.4 2:1.0\n")
    code = cli.main(run_args(tmp_path, problem=f"file:{data}", s="2",
                             iters="50", n="2", dim="2"))
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["final_dist_sq"] < 1e-6


# --- sweep -----------------------------------------------------------------------


def test_sweep_single_cell_matches_run(tmp_path):
    out_run = tmp_path / "run"
    out_run.mkdir()
    assert cli.main(run_args(tmp_path, out=str(out_run), **{"trace-every": "1"})) == 0
    summary = json.loads((out_run / "summary.json").read_text())

    out_sweep = tmp_path / "sweep"
    out_sweep.mkdir()
    argv = run_args(tmp_path, out=str(out_sweep), **{"trace-every": "1"})
    argv[0] = "sweep"
    argv += ["--ss", "4"]
    assert cli.main(argv) == 0
    header, rows = read_csv(out_sweep / "sweep.csv")
    assert header == "gamma,s,rho,empirical_contraction,iters_to_threshold,prox_calls,wall_ns"
    assert len(rows) == 1
    cells = rows[0].split(",")
    assert abs(float(cells[0]) - summary["gamma"]) <= 1e-15
    assert int(cells[1]) == 4
    assert abs(float(cells[2]) - summary["rho"]) <= 1e-12
    assert abs(float(cells[3]) - summary["empirical_contraction"]) <= 1e-9


def test_sweep_requires_an_axis(tmp_path, capsys):
    argv = run_args(tmp_path)
    argv[0] = "sweep"
    assert cli.main(argv) == 2


def test_sweep_empty_axis_exits_2(tmp_path):
    argv = run_args(tmp_path)
    argv[0] = "sweep"
    argv += ["--ss", ""]
    assert cli.main(argv) == 2


def test_sweep_grid_shape(tmp_path):
    argv = run_args(tmp_path, iters="100")
    argv[0] = "sweep"
    argv += ["--ss", "1,4", "--gammas", "0.05,auto"]
    assert cli.main(argv) == 0
    _, rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 4


# --- verify ----------------------------------------------------------------------


def test_verify_quick_passes(capsys):
    assert cli.main(["verify", "--scale", "quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 7
    assert "FAIL" not in out


def test_verify_full_runs_stated_scales(capsys):
    assert cli.main(["verify", "--scale", "full"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "10000 iterations" in out  # drift suite at full depth
    assert "100 states" in out  # contraction suite at full enumeration count


def test_verify_detects_wrong_average_coefficient(monkeypatch, capsys):
    # Fault injection: corrupt the table-average recurrence and expect the
    # drift (and contraction) suites to notice.
    monkeypatch.setattr(
        pointsaga.solver, "_prop1_coeffs", lambda n, s: (n - s + 1, s)
    )
    assert cli.main(["verify", "--scale", "quick"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "prop1-drift" in out
