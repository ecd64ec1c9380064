"""Run log: one JSON line per CLI command."""

import json
from dataclasses import asdict, dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Optional

import aiofiles

from ..config import config
from .results import _plain


@dataclass
class RunRecord:
    """A single CLI invocation."""
    timestamp: str
    command: str
    arguments: dict = field(default_factory=dict)
    seed: Optional[int] = None
    duration_s: float = 0.0
    outcome: str = "ok"
    error: Optional[str] = None


class RunLogManager:
    """
    Appends run records in JSONL format.

    Structure:
    logs/runs/2024-01-30.jsonl
    """

    def __init__(self, base_path: Optional[Path] = None):
        self.runs_path = Path(base_path) if base_path else config.paths.runs
        self.runs_path.mkdir(parents=True, exist_ok=True)

    def today_file(self) -> Path:
        return self.runs_path / f"{date.today().isoformat()}.jsonl"

    async def log_run(
        self,
        command: str,
        arguments: dict,
        *,
        seed: Optional[int] = None,
        duration_s: float = 0.0,
        error: Optional[str] = None,
    ) -> RunRecord:
        record = RunRecord(
            timestamp=datetime.now(timezone.utc).isoformat(),
            command=command,
            arguments=_plain(arguments),
            seed=seed,
            duration_s=round(duration_s, 6),
            outcome="error" if error else "ok",
            error=error,
        )
        async with aiofiles.open(self.today_file(), "a", encoding="utf-8") as f:
            await f.write(json.dumps(asdict(record), ensure_ascii=False) + "\n")
        return record

    async def get_recent(self, limit: int = 50) -> list[dict]:
        """Newest files first, entries in file order."""
        entries: list[dict] = []
        for path in sorted(self.runs_path.glob("*.jsonl"), reverse=True):
            async with aiofiles.open(path, "r", encoding="utf-8") as f:
                async for line in f:
                    if not line.strip():
                        continue
                    entries.append(json.loads(line))
                    if len(entries) >= limit:
                        return entries
        return entries
