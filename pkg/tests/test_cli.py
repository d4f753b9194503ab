"""End-to-end CLI runs: artifact files, exit codes, determinism."""
import csv
import json

import pytest

from fracpp.cli import EXIT_CONFIG, EXIT_GUARD, EXIT_OK, main


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestSimulateCommand:
    def test_benchmark_files_and_bounds(self, tmp_path, capsys):
        out = tmp_path / "artifacts"
        code = main(["simulate", "--M", "30", "--steps", "20", "--out", str(out)])
        assert code == EXIT_OK
        rows = read_csv(out / "trajectory.csv")
        assert rows[0] == ["t", "x", "N", "P"]
        assert len(rows) == 1 + 21 * 31  # header + snapshots x nodes
        summary = read_csv(out / "summary.csv")
        assert summary[0] == ["k", "minN", "maxN", "minP", "maxP", "guard_flag"]
        for row in summary[1:]:
            assert float(row[1]) > 0.0
            assert float(row[2]) <= 1.0
        assert "N in [" in capsys.readouterr().out

    def test_matrix_dump_flag(self, tmp_path):
        out = tmp_path / "m"
        code = main(
            ["simulate", "--M", "10", "--steps", "50", "--dump-matrix", "--out", str(out)]
        )
        assert code == EXIT_OK
        assert (out / "matrix_N.csv").exists()
        assert (out / "matrix_P.csv").exists()

    def test_deterministic_artifacts(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main(["simulate", "--M", "20", "--steps", "10", "--out", str(out)]) == EXIT_OK
        assert (out_a / "trajectory.csv").read_bytes() == (out_b / "trajectory.csv").read_bytes()
        assert (out_a / "summary.csv").read_bytes() == (out_b / "summary.csv").read_bytes()

    def test_custom_ic_csv_and_guard_abort(self, tmp_path):
        ic = tmp_path / "ic.csv"
        with open(ic, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "N", "P"])
            for i in range(21):
                writer.writerow([i / 20, 0.5, 20.0])
        code = main(
            [
                "simulate",
                "--M", "20",
                "--steps", "1",
                "--T", "4.0",
                "--alpha", "0.9",
                "--ic", str(ic),
                "--strict-bounds",
                "--out", str(tmp_path / "g"),
            ]
        )
        assert code == EXIT_GUARD

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"m_intervals": 20, "n_steps": 5, "alpha": 0.7}))
        out = tmp_path / "o"
        code = main(["simulate", "--config", str(cfg), "--alpha", "1.0", "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "trajectory.csv").exists()


class TestErrorPaths:
    def test_bad_beta_exit_code(self, tmp_path, capsys):
        code = main(["simulate", "--beta", "2.5", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "category=config" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        code = main(["simulate", "--config", str(tmp_path / "nope.json")])
        assert code == EXIT_CONFIG
        assert "not found" in capsys.readouterr().err


class TestConvergeCommand:
    def test_space_artifacts(self, tmp_path, capsys):
        out = tmp_path / "c"
        code = main(
            [
                "converge-space",
                "--levels", "0.1,0.05",
                "--steps", "100",
                "--workers", "1",
                "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        rows = read_csv(out / "convergence.csv")
        assert rows[0] == ["level", "h_or_tau", "e_N", "rate_N", "e_P", "rate_P"]
        assert len(rows) == 3
        assert rows[1][3] == ""  # first level has no rate
        assert float(rows[2][3]) != 0.0
        assert "e_N" in capsys.readouterr().out


class TestStabilityCommand:
    def test_stability_artifacts(self, tmp_path):
        out = tmp_path / "s"
        code = main(
            [
                "stability",
                "--M", "20",
                "--levels", "0.1",
                "--epsilons", "1e-3,1e-6",
                "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        rows = read_csv(out / "stability.csv")
        assert rows[0] == ["tau", "epsilon", "max_divergence", "ratio"]
        assert len(rows) == 3


class TestWeightsDumpCommand:
    def test_classical_rows(self, tmp_path):
        out = tmp_path / "w"
        code = main(
            ["weights-dump", "--family", "centered", "--beta", "2", "--count", "5",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        rows = read_csv(out / "weights.csv")
        assert rows[0] == ["j", "value"]
        assert rows[1] == ["0", "2"]
        assert rows[2] == ["1", "-1"]
        assert all(r[1] == "0" for r in rows[3:])

    def test_deterministic(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            main(["weights-dump", "--beta", "1.7", "--count", "64", "--out", str(out)])
        assert (out_a / "weights.csv").read_bytes() == (out_b / "weights.csv").read_bytes()
