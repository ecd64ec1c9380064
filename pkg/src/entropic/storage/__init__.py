"""Storage layer for result files and the run log."""

from .results import ResultWriter, render_csv, render_json
from .runs import RunLogManager, RunRecord

__all__ = ["ResultWriter", "render_csv", "render_json", "RunLogManager", "RunRecord"]
