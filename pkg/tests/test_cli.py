"""CLI behavior: artifacts, determinism, exit codes."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from sldkit.cli import main

TOOL = {
    "name": "cli-tool",
    "n_flutes": 2,
    "overhang_mm": 60.0,
    "segments": [
        {"length_mm": 30.0, "diameter_mm": 12.0, "kind": "shank"},
        {"length_mm": 30.0, "diameter_mm": 12.0, "kind": "fluted"},
    ],
    "material": {"name": "carbide", "youngs_modulus_gpa": 600.0, "density_kg_m3": 14500.0},
}

MODAL_DOC = {
    "modes": [
        {"direction": "X", "f_hz": 800.0, "zeta": 0.02, "k_n_per_m": 2.0e7},
        {"direction": "Y", "f_hz": 800.0, "zeta": 0.02, "k_n_per_m": 2.0e7},
    ]
}


def job_doc(**overrides):
    doc = {
        "tool": TOOL,
        "modal_file": "modes.json",
        "material": "Al6061",
        "cut": {"milling_mode": "slot", "radial_immersion": 1.0},
        "sweep": {"f_min_hz": 400.0, "f_max_hz": 1200.0, "n_freq": 300, "k_max": 3},
        "monte_carlo": {"n_samples": 6, "seed": 5},
        "points": [{"n_rpm": 15000.0, "ap_mm": 0.2}],
        "outputs": {"json": "result.json", "csv": "band.csv", "svg": "sld.svg"},
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "modes.json").write_text(json.dumps(MODAL_DOC))
    (tmp_path / "job.json").write_text(json.dumps(job_doc()))
    return tmp_path


class TestCompute:
    def test_writes_artifacts_and_reports(self, workdir):
        runner = CliRunner()
        result = runner.invoke(
            main, ["compute", str(workdir / "job.json"), "--out-dir", str(workdir)]
        )
        assert result.exit_code == 0, result.output
        assert (workdir / "result.json").exists()
        assert (workdir / "band.csv").exists()
        assert (workdir / "sld.svg").exists()
        assert "lobes" in result.output

    def test_byte_identical_across_runs(self, workdir, tmp_path_factory):
        runner = CliRunner()
        outs = []
        for name in ("a", "b"):
            out = tmp_path_factory.mktemp(name)
            result = runner.invoke(
                main, ["compute", str(workdir / "job.json"), "--out-dir", str(out)]
            )
            assert result.exit_code == 0, result.output
            outs.append(out)
        for artifact in ("result.json", "band.csv", "sld.svg"):
            assert (outs[0] / artifact).read_bytes() == (outs[1] / artifact).read_bytes()

    def test_validation_error_exits_2(self, workdir):
        doc = job_doc()
        doc["cut"]["radial_immersion"] = -0.3
        (workdir / "bad.json").write_text(json.dumps(doc))
        runner = CliRunner()
        result = runner.invoke(main, ["compute", str(workdir / "bad.json")])
        assert result.exit_code == 2
        assert "radial_immersion" in result.output

    def test_missing_job_file_exits_2(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, ["compute", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_numeric_failure_exits_3(self, workdir):
        doc = job_doc(sweep={"f_min_hz": 5.0, "f_max_hz": 50.0, "n_freq": 100, "k_max": 2})
        (workdir / "far.json").write_text(json.dumps(doc))
        runner = CliRunner()
        result = runner.invoke(main, ["compute", str(workdir / "far.json")])
        assert result.exit_code == 3
        assert "widen" in result.output

    def test_unwritable_destination_exits_4(self, workdir):
        blocker = workdir / "blocked"
        blocker.write_text("a file, not a directory")
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["compute", str(workdir / "job.json"), "--out-dir", str(blocker / "sub")],
        )
        assert result.exit_code == 4


class TestClassify:
    def test_prints_verdict_json(self, workdir):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["classify", str(workdir / "job.json"), "--n", "15000", "--ap", "0.01"],
        )
        assert result.exit_code == 0, result.output
        verdict = json.loads(result.output)
        assert verdict["class"] == "unconditionally_stable"
        assert verdict["p_stable"] == 1.0

    def test_out_of_window_point_exits_2(self, workdir):
        runner = CliRunner()
        result = runner.invoke(
            main, ["classify", str(workdir / "job.json"), "--n", "5", "--ap", "0.01"]
        )
        assert result.exit_code == 2


class TestToolModes:
    def test_emits_modal_file_compatible_json(self, tmp_path):
        (tmp_path / "tool.json").write_text(json.dumps(TOOL))
        runner = CliRunner()
        result = runner.invoke(
            main, ["tool-modes", str(tmp_path / "tool.json"), "--n-modes", "2"]
        )
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert len(doc["modes"]) == 4  # 2 per direction
        directions = {m["direction"] for m in doc["modes"]}
        assert directions == {"X", "Y"}
        assert all(m["f_hz"] > 0 and m["k_n_per_m"] > 0 for m in doc["modes"])
        assert all(m["source"] == "assumed" for m in doc["modes"])

    def test_missing_tool_exits_2(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, ["tool-modes", str(tmp_path / "ghost.json")])
        assert result.exit_code == 2


class TestServeConfig:
    def test_flags_beat_environment(self, monkeypatch):
        import uvicorn

        captured = {}

        def fake_run(app, host, port, log_level):
            captured["port"] = port
            captured["app"] = app

        monkeypatch.setattr(uvicorn, "run", fake_run)
        monkeypatch.setenv("SLD_PORT", "9000")
        monkeypatch.setenv("SLD_CACHE_SIZE", "4")
        runner = CliRunner()
        result = runner.invoke(main, ["serve", "--port", "9100"])
        assert result.exit_code == 0, result.output
        assert captured["port"] == 9100

    def test_environment_used_without_flag(self, monkeypatch):
        import uvicorn

        captured = {}
        monkeypatch.setattr(uvicorn, "run", lambda app, host, port, log_level: captured.update(port=port))
        monkeypatch.setenv("SLD_PORT", "9001")
        runner = CliRunner()
        result = runner.invoke(main, ["serve"])
        assert result.exit_code == 0, result.output
        assert captured["port"] == 9001
