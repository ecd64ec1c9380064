"""Tests for result files and the run log."""

import json
from fractions import Fraction

import numpy as np

from entropic.distill import ScanTable
from entropic.storage import ResultWriter, RunLogManager, render_csv, render_json


class TestRendering:
    def test_json_is_canonical(self):
        data = {"b": Fraction(1, 3), "a": [np.float64(0.5), np.int64(2), np.bool_(True)]}
        text = render_json(data)
        assert text.endswith("\n")
        assert json.loads(text) == {"a": [0.5, 2, True], "b": "1/3"}
        assert text == render_json(dict(reversed(list(data.items()))))

    def test_csv_keeps_full_precision(self):
        text = render_csv(["x", "y"], [[Fraction(1, 3), 0.1 + 0.2], [1, True]])
        lines = text.splitlines()
        assert lines[0] == "x,y"
        assert lines[1] == f"{1 / 3!r},{0.1 + 0.2!r}"
        assert lines[2] == "1,True"


class TestResultWriter:
    async def test_write_scan(self, tmp_path):
        table = ScanTable("demo", ["C", "chsh"], [[0.5, 2.0], [1.0, 4.0]], {"violations": 1})
        writer = ResultWriter(tmp_path / "out")
        paths = await writer.write_scan(table, plot="plot 'demo.csv'\n")
        assert [p.name for p in paths] == ["demo.csv", "demo.json", "demo.gp"]
        assert (tmp_path / "out" / "demo.csv").read_text() == "C,chsh\n0.5,2.0\n1.0,4.0\n"
        summary = json.loads((tmp_path / "out" / "demo.json").read_text())
        assert summary == {"figure": "demo", "summary": {"violations": 1}}

    async def test_same_data_same_bytes(self, tmp_path):
        data = {"q": Fraction(1, 2), "rows": [[0.25, 1.0]]}
        first = await ResultWriter(tmp_path / "a").write_json("r.json", data)
        second = await ResultWriter(tmp_path / "b").write_json("r.json", data)
        assert first.read_bytes() == second.read_bytes()

    async def test_without_plot(self, tmp_path):
        table = ScanTable("bare", ["x"], [[1]])
        paths = await ResultWriter(tmp_path).write_scan(table)
        assert len(paths) == 2


class TestRunLog:
    async def test_log_and_read_back(self, tmp_path):
        manager = RunLogManager(tmp_path / "runs")
        await manager.log_run("eval", {"builtin": "pr", "grid": Fraction(1, 4)}, duration_s=0.5)
        await manager.log_run("scan", {"figure": "triangle"}, seed=3, error="ParameterError")
        assert manager.today_file().exists()
        entries = await manager.get_recent()
        assert [e["command"] for e in entries] == ["eval", "scan"]
        assert entries[0]["arguments"]["grid"] == "1/4"
        assert entries[0]["outcome"] == "ok"
        assert entries[1]["outcome"] == "error"
        assert entries[1]["seed"] == 3

    async def test_recent_limit(self, tmp_path):
        manager = RunLogManager(tmp_path)
        for i in range(5):
            await manager.log_run("builtins", {"i": i})
        entries = await manager.get_recent(limit=3)
        assert [e["arguments"]["i"] for e in entries] == [0, 1, 2]
