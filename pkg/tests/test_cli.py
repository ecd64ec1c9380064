"""Tests for the command-line interface."""

import json
from pathlib import Path

import pytest

from entropic.boxes import chsh_inequality
from entropic.config import config
from entropic.entropy import EntropySpace, binary_entropy
from entropic.exceptions import ParameterError
from entropic.interfaces import RunConfig, build_parser, run_command
from entropic.scenarios import chsh, load_scenario
from entropic.storage import RunLogManager


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    monkeypatch.setattr(config.paths, "base", tmp_path)
    return tmp_path


@pytest.fixture
def run_log(workspace):
    return RunLogManager(workspace / "runs")


async def invoke(capsys, run_log, *argv) -> tuple[int, dict]:
    code = await run_command(list(argv), run_log)
    return code, json.loads(capsys.readouterr().out)


class TestEval:
    async def test_pmax_entropic_chsh(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pmax", "--ineq", "chsh_e", "--format", "json"
        )
        assert code == 0
        (value,) = report["values"]
        assert value["value"] == pytest.approx(1.0)
        assert value["violated"] is True

    async def test_isotropic_box(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "iso:0.8",
            "--ineq", "chsh", "--ineq", "chsh_e", "--format", "json",
        )
        assert code == 0
        correlator, entropic = report["values"]
        assert correlator["value"] == pytest.approx(3.2)
        assert correlator["violated"] is True
        assert entropic["value"] == pytest.approx(-2 * binary_entropy(0.9))
        assert entropic["violated"] is False

    async def test_pr_box_variants(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pr", "--ineq", "chsh_variants",
            "--format", "json",
        )
        assert code == 0
        assert max(v["value"] for v in report["values"]) == pytest.approx(4.0)
        assert len(report["values"]) == 8

    async def test_inequality_file(self, capsys, run_log, workspace):
        scenario = chsh()
        space = EntropySpace(scenario.observables)
        path = workspace / "chsh_e.json"
        path.write_text(json.dumps({"inequalities": [chsh_inequality(scenario).to_dict(space)]}))
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pmax", "--ineq", str(path), "--format", "json"
        )
        assert code == 0
        assert report["values"][0]["value"] == pytest.approx(1.0)

    async def test_unknown_box_is_an_error(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "nope", "--ineq", "chsh", "--format", "json"
        )
        assert code == 1
        assert report["error"] == "ParameterError"
        assert "nope" in report["message"]
        entries = await run_log.get_recent()
        assert entries[-1]["outcome"] == "error"
        assert entries[-1]["error"] == "ParameterError"

    @pytest.mark.parametrize("selector", ["ncycle:x", "bilocal:x", "ncycle:9"])
    async def test_bad_row_is_an_error(self, capsys, run_log, selector):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pmax", "--ineq", selector, "--format", "json"
        )
        assert code == 1
        assert report["error"] == "ParameterError"
        assert selector in report["message"]
        entries = await run_log.get_recent()
        assert entries[-1]["error"] == "ParameterError"

    async def test_malformed_inequality_file(self, capsys, run_log, workspace):
        path = workspace / "broken.json"
        path.write_text("{\"inequalities\": [", encoding="utf-8")
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pmax", "--ineq", str(path), "--format", "json"
        )
        assert code == 1
        assert report["error"] == "ParameterError"
        assert "malformed" in report["message"]

    async def test_missing_selector(self, capsys, run_log):
        code, report = await invoke(capsys, run_log, "eval", "--builtin", "pr", "--format", "json")
        assert code == 1
        assert "--ineq" in report["message"]

    async def test_wrong_scenario_shape(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--builtin", "pr", "--ineq", "bilocal", "--format", "json"
        )
        assert code == 1
        assert report["error"] == "ScenarioShapeError"


class TestOtherCommands:
    async def test_builtins(self, capsys, run_log):
        code, report = await invoke(capsys, run_log, "builtins", "--format", "json")
        assert code == 0
        assert "chsh" in report["scenarios"]
        assert "triangle" in report["figures"]
        assert {"fig2a", "fig2b", "fig3", "fig4", "fig6", "eta_single", "eta_two"} <= set(
            report["figures"]
        )
        assert report["boxes"]["iso"]["parameters"] == ["C"]

    async def test_derive_triangle_cycle(self, capsys, run_log, workspace):
        out = workspace / "derived"
        code, report = await invoke(
            capsys, run_log, "derive", "--builtin", "ncycle:3", "--format", "json",
            "--out", str(out),
        )
        assert code == 0
        assert report["counts"]["nontrivial"] == 3
        assert report["counts"]["equations"] == 0
        assert (out / "derive_ncycle_3.json").exists()

    async def test_scan_writes_files(self, capsys, run_log, workspace):
        code, report = await invoke(
            capsys, run_log, "scan", "eta_single", "--grid", "0.5", "--format", "json"
        )
        assert code == 0
        assert report["rows"] == 2
        results = workspace / "results"
        for suffix in ("csv", "json", "gp"):
            assert (results / f"eta_single.{suffix}").exists()

    async def test_scan_by_figure_id(self, capsys, run_log, workspace):
        code, report = await invoke(
            capsys, run_log, "scan", "fig3", "--grid", "0.5", "--format", "json"
        )
        assert code == 0
        assert report["figure"] == "fig3"
        assert report["rows"] == 6
        assert (workspace / "results" / "fig3.csv").exists()
        assert "fig3.csv" in (workspace / "results" / "fig3.gp").read_text()

    async def test_bad_grid(self, capsys, run_log):
        code, report = await invoke(capsys, run_log, "scan", "triangle", "--grid", "0.3")
        assert code == 1
        assert "--grid" in report["message"]

    async def test_run_is_logged(self, capsys, run_log):
        await invoke(capsys, run_log, "builtins", "--format", "json")
        (entry,) = await run_log.get_recent()
        assert entry["command"] == "builtins"
        assert entry["outcome"] == "ok"


class TestRunConfig:
    def test_from_args(self):
        args = build_parser().parse_args(["optimize", "chsh_e", "--seed", "4", "--restarts", "2"])
        run = RunConfig.from_args(args)
        assert (run.command, run.target, run.seed, run.restarts) == ("optimize", "chsh_e", 4, 2)
        run.validate()

    def test_validation(self):
        with pytest.raises(ParameterError):
            RunConfig("derive").validate()
        with pytest.raises(ParameterError):
            RunConfig("derive", builtin="chsh", scenario="x.yaml").validate()
        with pytest.raises(ParameterError):
            RunConfig("optimize", target="chsh_e", restarts=0).validate()

    def test_overrides_are_restored(self):
        before = (config.tolerances.violation, config.scan.grid_step, config.scan.workers)
        run = RunConfig("scan", figure="triangle", grid=0.25, tolerance=1e-6, workers=3)
        with run.overrides():
            assert config.scan.grid_step == 0.25
            assert config.tolerances.violation == 1e-6
            assert config.optimizer.workers == 3
        assert (config.tolerances.violation, config.scan.grid_step, config.scan.workers) == before


class TestDataFiles:
    DATA = Path(__file__).resolve().parent.parent / "data"

    async def test_box_file(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "eval", "--box", str(self.DATA / "boxes" / "pmax.yaml"),
            "--ineq", "chsh_e", "--ineq", "chsh", "--format", "json",
        )
        assert code == 0
        entropic, correlator = report["values"]
        assert entropic["value"] == pytest.approx(1.0)
        assert correlator["value"] == pytest.approx(3.0)

    @pytest.mark.parametrize("name", ["chsh.yaml", "klyachko.yaml", "bilocality.json"])
    def test_scenario_files_load(self, name):
        scenario = load_scenario(self.DATA / "scenarios" / name)
        assert scenario.n == 4 or scenario.n == 5

    @pytest.mark.slow
    async def test_derive_from_file(self, capsys, run_log):
        code, report = await invoke(
            capsys, run_log, "derive", "--scenario", str(self.DATA / "scenarios" / "klyachko.yaml"),
            "--format", "json",
        )
        assert code == 0
        assert report["counts"]["nontrivial"] == 5
        assert report["counts"]["classes"] >= 1
