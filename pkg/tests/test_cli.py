import json

import pandas as pd
import pytest

import main
from quantum_search.oracle import compile_marked_indicator


def _run(*argv):
    return main.main([str(a) for a in argv])


class TestSearchCommand:
    def test_thousand_states(self, tmp_path, capsys):
        out = tmp_path / "search.csv"
        assert _run("search", "--n", 10, "--target", 77, "--seed", 1, "--min-success", 0.99, "--out", out) == 0
        df = pd.read_csv(out)
        assert df["marked_prob"].iloc[-1] >= 0.99
        assert "N=1024 reps=25" in capsys.readouterr().out

    def test_four_states(self, tmp_path):
        out = tmp_path / "search.csv"
        assert _run("search", "--n", 2, "--target", 2, "--reps", 1, "--out", out) == 0
        assert pd.read_csv(out)["marked_prob"].iloc[-1] == pytest.approx(1.0, abs=1e-10)

    def test_no_iterations(self, tmp_path, capsys):
        out = tmp_path / "search.csv"
        assert _run("search", "--n", 2, "--reps", 0, "--out", out) == 0
        df = pd.read_csv(out)
        assert len(df) == 1
        assert df["marked_prob"].iloc[0] == pytest.approx(0.25, abs=1e-15)
        assert "success=0.250000000000" in capsys.readouterr().out

    def test_min_success_failure(self, tmp_path):
        assert _run("search", "--n", 4, "--reps", 0, "--min-success", 0.5, "--out", tmp_path / "s.csv") == 1

    def test_trace_adds_gain(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert _run("trace", "--n", 8, "--target", 3, "--out", out) == 0
        df = pd.read_csv(out)
        assert list(df.columns) == ["iteration", "marked_re", "marked_im", "marked_prob", "unmarked_prob", "norm", "gain"]
        assert pd.isna(df["gain"].iloc[0]) and df["gain"].iloc[1] > 0

    def test_json_output(self, tmp_path):
        out = tmp_path / "search.json"
        assert _run("search", "--n", 3, "--target", 5, "--format", "json", "--out", out) == 0
        records = json.loads(out.read_text())
        assert len(records) == 3
        assert set(records[0]) == {"iteration", "marked_re", "marked_im", "marked_prob", "unmarked_prob", "norm"}

    def test_repeat_runs_are_bit_identical(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            assert _run("search", "--n", 9, "--target", 300, "--seed", 4, "--out", out) == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.parametrize("n", [0, 25])
    def test_register_size_guard(self, n):
        with pytest.raises(SystemExit) as exc:
            _run("search", "--n", n)
        assert exc.value.code == 2

    def test_target_guard(self):
        with pytest.raises(SystemExit) as exc:
            _run("search", "--n", 2, "--target", 4)
        assert exc.value.code == 2


class TestSweepCommand:
    def test_small_sizes(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert _run("sweep", "--n-values", "2,4,6", "--out", out) == 0
        df = pd.read_csv(out)
        assert df["N"].tolist() == [4, 16, 64]
        assert (df["success"] - df["theory"]).abs().max() < 1e-9

    @pytest.mark.parametrize("sizes", ["2,30", "0,2", ","])
    def test_sizes_checked_before_any_run(self, sizes, capsys):
        with pytest.raises(SystemExit) as exc:
            _run("sweep", "--n-values", sizes)
        assert exc.value.code == 2
        assert "N=4" not in capsys.readouterr().out


class TestSchrodingerCommand:
    def test_zero_steps_header_only(self, tmp_path):
        out = tmp_path / "evolve.csv"
        assert _run("schrodinger", "--steps", 0, "--out", out) == 0
        assert out.read_text() == "step,norm\n"

    def test_refuses_large_epsilon(self, tmp_path, capsys):
        assert _run("schrodinger", "--dt", 0.5, "--steps", 3, "--out", tmp_path / "e.csv") == 1
        assert "--force" in capsys.readouterr().out

    def test_force_large_epsilon(self, tmp_path):
        assert _run("schrodinger", "--dt", 0.5, "--steps", 3, "--force", "--out", tmp_path / "e.csv") == 0

    @pytest.mark.parametrize("flag,value", [("--dx", 0), ("--dx", -1), ("--dt", 0)])
    def test_non_positive_spacing(self, flag, value):
        with pytest.raises(SystemExit) as exc:
            _run("schrodinger", flag, value, "--steps", 1)
        assert exc.value.code == 2

    def test_grid_size_guard(self, capsys):
        with pytest.raises(SystemExit) as exc:
            _run("schrodinger", "--sites", 1)
        assert exc.value.code == 2
        assert "Evolving" not in capsys.readouterr().out

    def test_flat_norm_column(self, tmp_path):
        out = tmp_path / "flat.csv"
        assert _run("schrodinger", "--sites", 32, "--steps", 1000, "--initial", "random", "--out", out) == 0
        df = pd.read_csv(out)
        assert len(df) == 1000
        assert (df["norm"] - 1.0).abs().max() <= 1000 * 8e-6

    def test_square_well(self, tmp_path, capsys):
        out = tmp_path / "well.csv"
        assert _run("schrodinger", "--sites", 64, "--potential", "square", "--steps", 10000, "--out", out) == 0
        assert "prob at minimum (site 32)" in capsys.readouterr().out

    def test_per_site_output(self, tmp_path):
        out = tmp_path / "sites.csv"
        assert _run("schrodinger", "--values", "0,-1,0,0.5", "--steps", 2, "--per-site", "--out", out) == 0
        df = pd.read_csv(out)
        assert list(df.columns) == ["step", "norm", "site", "prob"]
        assert len(df) == 8


class TestAuditCommand:
    def test_three_qubits_pass(self, capsys):
        assert _run("audit", "--n", 3) == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_perturbed_b_fails(self, capsys):
        assert _run("audit", "--n", 3, "--break-b", 0.3) == 1
        failing = [line for line in capsys.readouterr().out.splitlines() if "FAIL" in line]
        assert any("2Re(ab*)" in line for line in failing)

    def test_one_qubit_reports_not(self, capsys):
        assert _run("audit", "--n", 1) == 0
        assert "D(2) equals NOT" in capsys.readouterr().out

    def test_report_export(self, tmp_path):
        out = tmp_path / "audit.csv"
        assert _run("audit", "--n", 2, "--out", out) == 0
        assert pd.read_csv(out)["passed"].all()

    def test_synthesis_tolerance_flag(self, capsys):
        assert _run("audit", "--n", 3, "--synthesis-tol", -1) == 1
        failing = [line for line in capsys.readouterr().out.splitlines() if "FAIL" in line]
        assert len(failing) == 1 and "synthesis" in failing[0]

    def test_dense_size_guard(self):
        with pytest.raises(SystemExit) as exc:
            _run("audit", "--n", 6)
        assert exc.value.code == 2


class TestKickbackCommand:
    @pytest.mark.parametrize("n", [1, 3])
    def test_compiled_circuits(self, n, tmp_path):
        out = tmp_path / "kickback.csv"
        assert _run("kickback-check", "--n", n, "--out", out) == 0
        df = pd.read_csv(out)
        assert len(df) == 1 << n
        assert df["max_deviation"].max() < 1e-10

    def test_circuit_file(self, tmp_path):
        path = tmp_path / "indicator.txt"
        path.write_text(compile_marked_indicator(3, 6).to_text())
        assert _run("kickback-check", "--circuit", path, "--target", 6) == 0

    def test_missing_uncompute(self, tmp_path, capsys):
        path = tmp_path / "broken.txt"
        path.write_text(compile_marked_indicator(3, 7).truncated(2).to_text())
        assert _run("kickback-check", "--circuit", path, "--target", 7) == 1
        assert "ancillas did not return" in capsys.readouterr().out

    def test_target_checked_before_any_run(self, tmp_path, capsys):
        path = tmp_path / "indicator.txt"
        path.write_text(compile_marked_indicator(3, 6).to_text())
        with pytest.raises(SystemExit) as exc:
            _run("kickback-check", "--circuit", path, "--target", 8)
        assert exc.value.code == 2
        assert "Checking phase kickback" not in capsys.readouterr().out

    def test_wrong_target_for_circuit(self, tmp_path):
        path = tmp_path / "indicator.txt"
        path.write_text(compile_marked_indicator(3, 6).to_text())
        assert _run("kickback-check", "--circuit", path, "--target", 5) == 1
