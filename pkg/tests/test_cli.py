"""End-to-end CLI behaviour and exit codes."""

import json

import numpy as np
import pytest

from pate.cli import main
from pate.io import write_series_csv


@pytest.fixture()
def sample_csv(tmp_path):
    rng = np.random.default_rng(10)
    labels = np.zeros(300, dtype=np.int8)
    labels[50:70] = 1
    labels[200:215] = 1
    scores = rng.random(300) * 0.6 + labels * 0.4
    path = tmp_path / "run.csv"
    write_series_csv(path, scores, labels)
    return path


class TestEvaluate:
    def test_happy_path(self, sample_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["evaluate", "--input", str(sample_csv), "--e-max", "10",
                   "--d-max", "10", "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert "pate" in payload and 0.0 <= payload["pate"] <= 1.0
        assert len(payload["per_combo"]) == 121

    def test_missing_input_exits_2_and_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.csv"
        rc = main(["evaluate", "--input", str(missing), "--out", str(tmp_path / "r.json")])
        assert rc == 2
        assert str(missing) in capsys.readouterr().err

    def test_pate_f1_requires_binary_scores(self, sample_csv, tmp_path, capsys):
        rc = main(["evaluate", "--input", str(sample_csv), "--pate-f1",
                   "--out", str(tmp_path / "r.json")])
        assert rc == 2
        assert "binary predictions required" in capsys.readouterr().err

    def test_pate_f1_on_binary_input(self, tmp_path):
        labels = np.zeros(80, dtype=np.int8)
        labels[30:45] = 1
        preds = np.zeros(80, dtype=np.int8)
        preds[30:45] = 1
        path = tmp_path / "binary.csv"
        write_series_csv(path, preds.astype(float), labels)
        out = tmp_path / "report.json"
        rc = main(["evaluate", "--input", str(path), "--pate-f1", "--ed", "5",
                   "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["pate_f1"] == 1.0

    def test_no_input_is_usage_error(self, capsys):
        assert main(["evaluate"]) == 2

    def test_stdout_when_no_out(self, sample_csv, capsys):
        rc = main(["evaluate", "--input", str(sample_csv), "--ed", "3"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert "pate" in payload

    def test_config_file_fills_flags(self, sample_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "report.json"
        cfg.write_text(f"e_max = 4\nd_max = 6\nout = {out}\n")
        rc = main(["evaluate", "--input", str(sample_csv), "--config", str(cfg)])
        assert rc == 0
        assert len(json.loads(out.read_text())["per_combo"]) == 5 * 7

    def test_flags_win_over_config(self, sample_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("e_max = 4\nd_max = 6\n")
        out = tmp_path / "report.json"
        rc = main(["evaluate", "--input", str(sample_csv), "--config", str(cfg),
                   "--e-max", "1", "--d-max", "1", "--out", str(out)])
        assert rc == 0
        assert len(json.loads(out.read_text())["per_combo"]) == 4


class TestCompare:
    def test_perfect_model_prints_ones(self, tmp_path, capsys):
        labels = np.zeros(100, dtype=np.int8)
        labels[40:60] = 1
        path = tmp_path / "perfect.csv"
        write_series_csv(path, labels.astype(float), labels)
        rc = main(["compare", "--input", str(path), "--ed", "5",
                   "--threshold", "1.0"])
        assert rc == 0
        out = capsys.readouterr().out
        for line in out.splitlines()[1:]:
            assert "1.00" in line

    def test_table_matches_report(self, sample_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["compare", "--input", str(sample_csv), "--e-max", "5",
                   "--d-max", "5", "--out", str(out)])
        assert rc == 0
        table = capsys.readouterr().out.splitlines()
        payload = json.loads(out.read_text())
        values = {"pate": payload["pate"], **payload["baselines"]}
        for line in table[1:]:
            name, value = line.split()
            assert f"{values[name]:.4f}" == value

    def test_pa_f1_exceeds_standard_f1_on_random_scores(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        labels = np.zeros(4000, dtype=np.int8)
        for start in range(300, 3700, 800):
            labels[start : start + 250] = 1
        path = tmp_path / "random.csv"
        write_series_csv(path, rng.random(4000), labels)
        rc = main(["compare", "--input", str(path), "--ed", "3"])
        assert rc == 0
        rows = dict(
            line.split() for line in capsys.readouterr().out.splitlines()[1:]
        )
        assert float(rows["pa_f1"]) > float(rows["standard_f1"]) + 0.3


class TestScenarios:
    def test_run_reports_pass_and_exact_value(self, capsys):
        rc = main(["scenarios", "run", "--suite", "S"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "S3        1.0000" in out
        assert "FAIL" not in out
        assert "OVERALL: PASS" in out

    def test_perturbation_fails_with_nonzero_exit(self, capsys):
        rc = main(["scenarios", "run", "--suite", "S", "--perturb", "0.5"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out

    def test_export_writes_twenty_files(self, tmp_path):
        out_dir = tmp_path / "suite"
        rc = main(["scenarios", "export", "--dir", str(out_dir)])
        assert rc == 0
        files = sorted(p.name for p in out_dir.glob("*.csv"))
        assert len(files) == 20
        assert "S3.csv" in files and "p10.csv" in files

    def test_exported_files_round_trip(self, tmp_path):
        from pate.io import read_series_csv
        from pate.scenarios import scenario

        out_dir = tmp_path / "suite"
        main(["scenarios", "export", "--dir", str(out_dir)])
        scores, labels = read_series_csv(out_dir / "S2.csv")
        sc = scenario("S2")
        np.testing.assert_array_equal(scores, sc.scores.values)
        np.testing.assert_array_equal(labels, sc.labels.values)


class TestBench:
    def test_minimal_run(self, tmp_path, capsys):
        out = tmp_path / "bench.json"
        rc = main(["bench", "-T", "2000", "--ratios", "2,5,10", "--repeats", "1",
                   "--e-max", "3", "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        pate_rows = [r for r in payload["results"] if r["metric"] == "pate"]
        assert len(pate_rows) == 3

    def test_repeats_do_not_change_values(self, tmp_path):
        out1, out5 = tmp_path / "b1.json", tmp_path / "b5.json"
        main(["bench", "-T", "1500", "--ratios", "5", "--repeats", "1",
              "--e-max", "2", "--out", str(out1)])
        main(["bench", "-T", "1500", "--ratios", "5", "--repeats", "3",
              "--e-max", "2", "--out", str(out5)])
        v1 = {r["metric"]: r["value"] for r in json.loads(out1.read_text())["results"]}
        v5 = {r["metric"]: r["value"] for r in json.loads(out5.read_text())["results"]}
        assert v1 == v5

    def test_short_series_rejected(self, capsys):
        assert main(["bench", "-T", "500"]) == 2


class TestParser:
    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert "pate" in capsys.readouterr().out

    def test_log_level_env_var(self, sample_csv, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("PATE_LOG_LEVEL", "debug")
        rc = main(["evaluate", "--input", str(sample_csv), "--ed", "2",
                   "--out", str(tmp_path / "r.json")])
        assert rc == 0

    def test_no_command_shows_help(self, capsys):
        assert main([]) == 2

    def test_unknown_flag_exits_2(self, capsys):
        assert main(["evaluate", "--frobnicate"]) == 2

    def test_ed_conflicts_with_explicit_ranges(self, sample_csv, capsys):
        rc = main(["evaluate", "--input", str(sample_csv), "--ed", "3", "--e-max", "2"])
        assert rc == 2
