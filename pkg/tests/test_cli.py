"""End-to-end tests of the command-line runner and its artifact writers."""
import csv
import json
import math
from pathlib import Path

import pytest

from main import main
from models.schedule import ScheduleDocument
from runners.experiment_runner import TOOLKIT_VERSION, ExperimentRunner
from utils.config_hash import config_hash
from utils.csv_output import format_value, render_csv
from utils.errors import ConfigError, ExitCode, NonConvergenceError, create_error_report
from utils.qmath import rotation
from utils.tomography import choi_of_unitary, process_at, process_fidelity

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def _write_config(tmp_path: Path, name: str, data: dict) -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _read_csv(path: Path) -> tuple[str, list[list[str]]]:
    comment, *body = path.read_text(encoding="utf-8").splitlines()
    return comment, list(csv.reader(body))


def _error(capsys) -> dict:
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"]


class TestCommands:
    def test_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main([str(CONFIG_DIR / "sweep_xpi_infidelity.json"), "-o", str(out)]) == 0
        comment, rows = _read_csv(out)
        assert comment.startswith(f"# cqsim {TOOLKIT_VERSION} config_sha256=")
        assert "kappa=0.025" in comment
        assert rows[0] == ["sigma_eps_ghz", "infidelity_cd_bare", "infidelity_cq_bare", "infidelity_cq_composite"]
        assert len(rows) == 14
        for row in rows[1:]:
            assert len(row) == 4
            assert all(float(value) >= 0.0 for value in row[1:])

    def test_spectrum_middle_level(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        assert main([str(CONFIG_DIR / "spectrum_symmetric.json"), "-o", str(out)]) == 0
        _, rows = _read_csv(out)
        assert len(rows) == 402
        for row in rows[1:]:
            eps_q, low, mid, high = map(float, row)
            assert abs(mid) < 1e-9
            assert high - low == pytest.approx(math.sqrt(eps_q**2 + 4 * 2.5**2 * 2))

    def test_gate_json(self, tmp_path):
        out = tmp_path / "gate.json"
        assert main([str(CONFIG_DIR / "gate_composite.json"), "-o", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["command"] == "gate"
        assert report["version"] == TOOLKIT_VERSION
        assert len(report["config_sha256"]) == 64
        assert 0.99 < report["fidelity"] <= 1.0
        assert report["infidelity"] == pytest.approx(1.0 - report["fidelity"])
        assert report["leakage"] >= 0.0
        assert report["duration_ns"] == pytest.approx(2 / 62.83185307179586 + 0.075)

    def test_gate_z(self, tmp_path):
        out = tmp_path / "gate_z.json"
        config = _write_config(
            tmp_path, "gate_z.json",
            {"command": "gate", "gate": "z", "kind": "CQ", "eps_z_ghz": 2.0, "format": "json", "output_path": str(out)},
        )
        assert main([str(config)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["fidelity"] == pytest.approx(1.0, abs=1e-12)
        assert report["duration_ns"] == pytest.approx(0.25)
        assert report["sensitivity_c2"] == pytest.approx(math.pi**2 / 8, rel=1e-4)

    def test_gate_schedule_with_drive(self, tmp_path):
        records = [{"kind": "CD", "t": 1.0, "duration_ns": 0.25, "eps_ac": 0.5, "nu": 3.0, "max_step_ns": 0.01}]
        schedule_file = _write_config(tmp_path, "drive.json", {"segments": records})
        out = tmp_path / "gate_drive.json"
        config = _write_config(
            tmp_path, "gate_drive.json",
            {"command": "gate", "gate": "schedule", "schedule_path": str(schedule_file), "format": "json",
             "output_path": str(out)},
        )
        assert main([str(config)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        schedule = ScheduleDocument.model_validate({"segments": records}).to_schedule()
        expected = process_fidelity(choi_of_unitary(rotation("x", math.pi), "CD"), process_at(schedule))
        assert report["kind"] == "CD"
        assert report["fidelity"] == pytest.approx(expected, abs=1e-12)
        assert report["fidelity"] < 0.9999

    def test_geometry(self, tmp_path):
        out = tmp_path / "geometry.csv"
        assert main([str(CONFIG_DIR / "geometry_monopole.json"), "-o", str(out)]) == 0
        _, rows = _read_csv(out)
        ratios = [float(row[4]) for row in rows[1:4]]
        assert ratios == pytest.approx([-0.2, -0.1, -200.0 / 3000.0], rel=1e-12)
        assert rows[4][4] == "nan"

    def test_t1rho(self, tmp_path):
        out = tmp_path / "t1rho.csv"
        assert main([str(CONFIG_DIR / "t1rho.json"), "-o", str(out)]) == 0
        _, rows = _read_csv(out)
        assert [float(row[3]) for row in rows[1:]] == pytest.approx([0.025] * 5)

    def test_twoqubit(self, tmp_path):
        out = tmp_path / "twoqubit.csv"
        assert main([str(CONFIG_DIR / "twoqubit_cnot.json"), "-o", str(out)]) == 0
        comment, rows = _read_csv(out)
        assert "truth_table_fidelity=" in comment
        fidelity = float(comment.split("truth_table_fidelity=")[1].split()[0])
        assert fidelity >= 0.99
        assert rows[0] == ["output", "in_CC", "in_CE", "in_EC", "in_EE"]
        assert float(rows[2][1]) == pytest.approx(1.0)

    def test_calibrate(self, tmp_path):
        out = tmp_path / "calibrate.json"
        assert main([str(CONFIG_DIR / "calibrate_x.json"), "-o", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["converged"] is True
        assert report["parameters"][0] == pytest.approx(0.25, abs=1e-4)

    def test_stdout_output(self, tmp_path, capsys):
        config = _write_config(
            tmp_path, "spectrum.json",
            {"command": "spectrum", "t_a_ghz": 1.0, "t_b_ghz": 1.0, "eps_q_min_ghz": -1.0, "eps_q_max_ghz": 1.0,
             "n_points": 3},
        )
        assert main([str(config)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# cqsim")
        assert len(lines) == 5


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        config = _write_config(
            tmp_path, "sweep.json",
            {"command": "sweep", "sigma_eps_ghz": [0.01, 0.1, 1.0], "grid_n": 11},
        )
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([str(config), "-o", str(first)]) == 0
        assert main([str(config), "-o", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_hash_ignores_output_path(self, tmp_path):
        base = {"command": "twoqubit", "t2_ghz": 1.0, "j_ghz": 10.0, "far_detuning_ghz": -200.0}
        a = _write_config(tmp_path, "a.json", {**base, "output_path": str(tmp_path / "x.csv")})
        b = _write_config(tmp_path, "b.json", {**base, "output_path": str(tmp_path / "y.csv")})
        assert main([str(a)]) == 0 and main([str(b)]) == 0
        assert (tmp_path / "x.csv").read_text() == (tmp_path / "y.csv").read_text()


class TestFailures:
    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        assert main([str(path)]) == 1
        assert _error(capsys)["name"] == "CONFIG_ERROR"

    def test_missing_file(self, tmp_path, capsys):
        assert main([str(tmp_path / "absent.json")]) == 1
        assert _error(capsys)["message"] == "Config file not found"

    def test_out_of_range_value(self, tmp_path, capsys):
        config = _write_config(
            tmp_path, "spectrum.json",
            {"command": "spectrum", "t_a_ghz": -1.0, "t_b_ghz": 1.0, "eps_q_min_ghz": -1.0, "eps_q_max_ghz": 1.0},
        )
        assert main([str(config)]) == 1
        assert _error(capsys)["code"] == 1

    def test_unknown_field(self, tmp_path):
        config = _write_config(tmp_path, "t.json", {"command": "t1rho", "eps_ac_ghz": [0.1], "t_logical_ghz": 1.0,
                                                    "spectral_amplitude": 1.0, "colour": "red"})
        assert main([str(config)]) == 1

    def test_even_grid(self, tmp_path):
        config = _write_config(tmp_path, "s.json", {"command": "sweep", "sigma_eps_ghz": [0.1], "grid_n": 40})
        assert main([str(config)]) == 1

    def test_twoqubit_weak_coupling(self, tmp_path, capsys):
        out = tmp_path / "never.csv"
        config = _write_config(
            tmp_path, "cnot.json",
            {"command": "twoqubit", "t2_ghz": 1.0, "j_ghz": 5.0, "far_detuning_ghz": -200.0,
             "output_path": str(out)},
        )
        assert main([str(config)]) == 1
        assert "below" in _error(capsys)["message"]
        assert not out.exists()

    def test_calibration_non_convergence(self, tmp_path):
        out = tmp_path / "calibrate.json"
        config = _write_config(
            tmp_path, "calibrate.json",
            {"command": "calibrate", "family": "x_duration", "t_x_ghz": 1.0, "bounds": [[0.1, 0.2]],
             "initial": [0.15], "output_path": str(out)},
        )
        assert main([str(config)]) == 2
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["converged"] is False
        assert 0.1 <= report["parameters"][0] <= 0.2

    def test_gate_sensitivity_non_convergence(self, tmp_path, monkeypatch):
        def stalled(schedule, order=2):
            raise NonConvergenceError("c(h) and c(h/2) disagree")

        monkeypatch.setattr("runners.experiment_runner.sensitivity_coefficient", stalled)
        out = tmp_path / "gate.json"
        config = _write_config(
            tmp_path, "gate.json",
            {"command": "gate", "gate": "bare_x", "kind": "CD", "format": "json", "output_path": str(out)},
        )
        assert main([str(config)]) == 2
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["sensitivity_c2"] == "nan"
        assert report["fidelity"] == pytest.approx(1.0, abs=1e-12)

    def test_thread_count(self, monkeypatch):
        monkeypatch.setenv("CQSIM_THREADS", "0")
        with pytest.raises(ConfigError):
            ExperimentRunner()


class TestArtifacts:
    def test_format_value(self):
        assert format_value(True) == "true"
        assert format_value(3) == "3"
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(float("inf")) == "inf"
        assert format_value(float("nan")) == "nan"

    def test_render_csv(self):
        text = render_csv(("a", "b"), [(1.0, 2)], "9.9", "abc", {"note": 0.5})
        assert text == "# cqsim 9.9 config_sha256=abc note=0.5\na,b\n1,2\n"

    def test_config_hash_is_key_order_independent(self):
        assert config_hash({"a": 1, "b": [1.5, 2]}) == config_hash({"b": [1.5, 2], "a": 1})
        assert config_hash({"a": 1}) != config_hash({"a": 2})

    def test_error_report(self):
        report = create_error_report(ExitCode.NON_CONVERGENCE, "stalled", {"step": 3})
        assert report == {"error": {"code": 2, "name": "NON_CONVERGENCE", "message": "stalled", "data": {"step": 3}}}
