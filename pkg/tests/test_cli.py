"""Command-line interface: determinism, formats, exit codes."""

import json

import pytest

from shapestab import cli
from shapestab.errors import InconclusiveTailError


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("--cmd", "spectra", "--pair", "PE", "--t", "-8"),
        ("--cmd", "thresholds", "--pair", "PL", "--modes", "60"),
        ("--cmd", "coercivity", "--pair", "PE", "--t", "-8"),
        ("--cmd", "penalty", "--pair", "PE", "--t", "0"),
    ])
    def test_byte_identical(self, capsys, argv):
        code1, out1, _ = run_cli(capsys, *argv)
        code2, out2, _ = run_cli(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["config"]["command"] == argv[1]


class TestFormats:
    def test_spectra_csv(self, capsys):
        code, out, _ = run_cli(capsys, "--cmd", "spectra", "--pair", "PE",
                               "--t", "-12", "--format", "csv", "--modes", "10")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "k,c_k"
        assert lines[2] == "1,0"   # translation mode
        assert lines[3] == "2,0"   # threshold mode degenerates at t = -12
        assert len(lines) == 12

    def test_thresholds_json_fields(self, capsys):
        code, out, _ = run_cli(capsys, "--cmd", "thresholds", "--pair", "PL",
                               "--modes", "60")
        report = json.loads(out)["report"]
        assert report["agrees_with_paper"] is False
        assert report["sup_tau"] == pytest.approx(-0.4307708232284593, rel=1e-10)

    def test_coercivity_values(self, capsys):
        code, out, _ = run_cli(capsys, "--cmd", "coercivity", "--pair", "PE",
                               "--t", "-8")
        doc = json.loads(out)
        assert doc["coercivity_s0"] == pytest.approx(1.0)
        assert doc["coercivity_s2"] == pytest.approx(0.2)

    def test_penalty_values(self, capsys):
        code, out, _ = run_cli(capsys, "--cmd", "penalty", "--pair", "PE",
                               "--t", "0")
        doc = json.loads(out)
        assert doc["minimal_C"] == pytest.approx(1.0 / (4.0 * 3.141592653589793),
                                                 rel=1e-12)

    def test_counterexample(self, capsys):
        code, out, _ = run_cli(capsys, "--cmd", "counterexample", "--dim", "3",
                               "--gamma", "-0.1")
        assert code == 0
        doc = json.loads(out)["experiment"]
        assert doc["largest_negative_eps"] is not None

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "spec.json"
        code, out, _ = run_cli(capsys, "--cmd", "spectra", "--pair", "PE",
                               "--t", "-8", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["config"]["t"] == -8.0


class TestExitCodes:
    def test_validation_error(self, capsys):
        code, _, err = run_cli(capsys, "--cmd", "spectra", "--dim", "1")
        assert code == 2
        assert json.loads(err)["error"] == "validation"

    def test_verify_wrong_dim(self, capsys):
        code, _, err = run_cli(capsys, "--cmd", "verify", "--dim", "3")
        assert code == 2

    def test_small_modes_for_threshold(self, capsys):
        code, _, err = run_cli(capsys, "--cmd", "thresholds", "--modes", "5")
        assert code == 2

    def test_bad_fd_step(self, capsys):
        code, _, _ = run_cli(capsys, "--cmd", "verify", "--fd-step", "0.9")
        assert code == 2

    def test_unknown_command_rejected_by_parser(self, capsys):
        assert cli.main(["--cmd", "nonsense"]) == 2

    def test_numerical_failure_maps_to_3(self, capsys, monkeypatch):
        def boom(args):
            raise InconclusiveTailError("synthetic")
        monkeypatch.setattr(cli, "run_command", boom)
        code, _, err = run_cli(capsys, "--cmd", "spectra")
        assert code == 3
        assert json.loads(err)["error"] == "numerical"


class TestWorkerCount:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("SHL_THREADS", "3")
        assert cli.worker_count() == 3
        monkeypatch.setenv("SHL_THREADS", "bogus")
        assert cli.worker_count() >= 1
        monkeypatch.delenv("SHL_THREADS")
        assert cli.worker_count() >= 1


def test_float_formatting_stable():
    text = cli.dump_json({"x": 0.1 + 0.2})
    assert json.loads(text)["x"] == pytest.approx(0.30000000000000004)
    assert cli.dump_json({"x": 0.1 + 0.2}) == text
