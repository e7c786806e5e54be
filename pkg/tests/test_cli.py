"""Command-line interface: exit codes, file outputs, determinism."""

import json
import math

import pytest

from medsim import cli


def write_config(tmp_path, name="config.json", **overrides):
    path = tmp_path / name
    path.write_text(json.dumps(overrides))
    return str(path)


def run(argv):
    return cli.main(argv)


class TestValidateCommand:
    def test_default_style_config_passes(self, tmp_path):
        config = write_config(tmp_path, trials=400)
        out = tmp_path / "out"
        assert run(["validate", "--config", config, "--out", str(out)]) == 0
        report = json.loads((out / "validate.json").read_text())
        assert report["passed"] is True
        assert set(report["z"]) == {"n_e", "n_s", "n_f"}
        assert report["mc_mean"]["total_ops"] == pytest.approx(
            report["mc_mean"]["n_e"] + report["mc_mean"]["n_s"] + report["mc_mean"]["n_f"]
        )

    def test_zero_fusion_probability_is_config_error(self, tmp_path):
        config = write_config(tmp_path, k=0.0, trials=10)
        assert run(["validate", "--config", config, "--out", str(tmp_path)]) == 2

    def test_unknown_config_key_is_config_error(self, tmp_path):
        config = write_config(tmp_path, fusion_prob=0.5)
        assert run(["validate", "--config", config, "--out", str(tmp_path)]) == 2

    def test_missing_config_file_is_config_error(self, tmp_path):
        assert run(["validate", "--config", str(tmp_path / "nope.json")]) == 2

    def test_trials_override_echoed_in_manifest(self, tmp_path):
        config = write_config(tmp_path, trials=50)
        out = tmp_path / "out"
        assert (
            run(["validate", "--config", config, "--out", str(out), "--trials", "120"]) == 0
        )
        manifest = json.loads((out / "validate_manifest.json").read_text())
        assert manifest["config"]["trials"] == 120
        assert manifest["outputs"] == ["validate.json"]
        assert manifest["master_seed"] == manifest["config"]["master_seed"]

    def test_op_cap_abort_exits_three(self, tmp_path):
        config = write_config(tmp_path, op_cap=30, trials=5)
        assert run(["validate", "--config", config, "--out", str(tmp_path)]) == 3


class TestSweepCommand:
    def test_flag_range_row_count_and_header(self, tmp_path):
        out = tmp_path / "out"
        rc = run(
            ["sweep", "--trials", "40", "--out", str(out),
             "--L-start", "1", "--L-end", "3", "--L-step", "1"]
        )
        assert rc == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == (
            "L_km,p,mean_n_e,mean_n_s,mean_n_f,mean_tau_classical_s,"
            "mean_tau_quantum_s,mean_total_s,classical_share,feasible_frac"
        )
        assert len(lines) == 4

    def test_deterministic_row_matches_hand_formulas(self, tmp_path):
        out = tmp_path / "out"
        rc = run(
            ["sweep", "--deterministic", "--trials", "20", "--out", str(out),
             "--L-start", "1", "--L-end", "1"]
        )
        assert rc == 0
        row = (out / "sweep.csv").read_text().splitlines()[1].split(",")
        expected_classical = 28 * 8e-5 + 24 * 7e-5
        expected_quantum = 28 * (123e-6 + 1.0 / 2e5) + 24 * 2157e-6 + 300e-6
        assert float(row[0]) == 1.0
        assert float(row[1]) == 1.0
        assert [float(v) for v in row[2:5]] == [28.0, 24.0, 1.0]
        assert float(row[5]) == pytest.approx(expected_classical, rel=1e-12)
        assert float(row[6]) == pytest.approx(expected_quantum, rel=1e-12)
        assert float(row[7]) == pytest.approx(expected_classical + expected_quantum, rel=1e-12)

    def test_empty_length_list_is_config_error(self, tmp_path):
        config = write_config(tmp_path, L_values=[], trials=10)
        assert run(["sweep", "--config", config, "--out", str(tmp_path)]) == 2

    def test_config_length_list_used_without_flags(self, tmp_path):
        config = write_config(tmp_path, L_values=[2.0, 4.0], trials=20)
        out = tmp_path / "out"
        assert run(["sweep", "--config", config, "--out", str(out)]) == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert len(lines) == 3
        assert [line.split(",")[0] for line in lines[1:]] == ["2.0", "4.0"]


class TestHistCommand:
    def test_outputs_and_line_counts(self, tmp_path):
        config = write_config(tmp_path, trials=250)
        out = tmp_path / "out"
        assert run(["hist", "--config", config, "--out", str(out), "--bins", "12"]) == 0
        trials_lines = (out / "trials.csv").read_text().splitlines()
        assert trials_lines[0] == "trial,n_e,n_s,n_f,tau_classical_s,tau_quantum_s,total_s"
        assert len(trials_lines) == 251
        hist_lines = (out / "hist.csv").read_text().splitlines()
        assert hist_lines[0] == "bin_lo,bin_hi,count"
        assert len(hist_lines) == 13
        assert sum(int(line.split(",")[2]) for line in hist_lines[1:]) == 250
        manifest = json.loads((out / "hist_manifest.json").read_text())
        assert manifest["outputs"] == ["trials.csv", "hist.csv", "validate.json"]

    def test_reruns_are_byte_identical(self, tmp_path):
        config = write_config(tmp_path, trials=150)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert run(["hist", "--config", config, "--out", str(out), "--seed", "77"]) == 0
        for name in ("trials.csv", "hist.csv", "validate.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_trial_rows_decompose_exactly(self, tmp_path):
        config = write_config(tmp_path, trials=60)
        out = tmp_path / "out"
        assert run(["hist", "--config", config, "--out", str(out)]) == 0
        for line in (out / "trials.csv").read_text().splitlines()[1:]:
            parts = line.split(",")
            assert math.isclose(
                float(parts[4]) + float(parts[5]), float(parts[6]), rel_tol=1e-12
            )


class TestConfigResolution:
    def test_infinite_coherence_accepted(self, tmp_path):
        config = write_config(tmp_path, t_coherence_s="inf", trials=10)
        out = tmp_path / "out"
        assert run(["hist", "--config", config, "--out", str(out)]) == 0
        manifest = json.loads((out / "hist_manifest.json").read_text())
        assert manifest["config"]["device"]["t_coherence_s"] == "inf"

    def test_deterministic_flag_forces_unit_probabilities(self, tmp_path):
        out = tmp_path / "out"
        assert run(["validate", "--deterministic", "--trials", "15", "--out", str(out)]) == 0
        report = json.loads((out / "validate.json").read_text())
        assert report["mc_mean"]["n_e"] == 28.0
        assert report["z"] == {"n_e": 0.0, "n_s": 0.0, "n_f": 0.0}
