"""Result files: CSV scan tables, JSON reports and gnuplot scripts."""

import csv
import io
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

import aiofiles
import numpy as np

from ..config import config

logger = logging.getLogger(__name__)


def _plain(value):
    """JSON-safe form; fractions keep their exact text."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return repr(float(value))
    return str(value)


def render_json(data) -> str:
    return json.dumps(_plain(data), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(columns: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


class ResultWriter:
    """
    Writes run outputs under one directory.

    Output is a pure function of the data: same inputs, same bytes.
    """

    def __init__(self, base_path: Optional[Path] = None):
        self.base_path = Path(base_path) if base_path else config.paths.results
        self.base_path.mkdir(parents=True, exist_ok=True)

    async def _write(self, name: str, text: str) -> Path:
        path = self.base_path / name
        async with aiofiles.open(path, "w", encoding="utf-8", newline="") as f:
            await f.write(text)
        logger.info("wrote %s", path)
        return path

    async def write_json(self, name: str, data) -> Path:
        return await self._write(name, render_json(data))

    async def write_csv(self, name: str, columns: list[str], rows: list[list]) -> Path:
        return await self._write(name, render_csv(columns, rows))

    async def write_plot(self, name: str, script: str) -> Path:
        return await self._write(name, script)

    async def write_scan(self, table, plot: Optional[str] = None) -> list[Path]:
        """`<figure>.csv`, `<figure>.json` (summary) and optionally `<figure>.gp`."""
        paths = [
            await self.write_csv(f"{table.figure}.csv", table.columns, table.rows),
            await self.write_json(
                f"{table.figure}.json", {"figure": table.figure, "summary": table.summary}
            ),
        ]
        if plot is not None:
            paths.append(await self.write_plot(f"{table.figure}.gp", plot))
        return paths
