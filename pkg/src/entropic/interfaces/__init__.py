"""Command-line interface."""

from .cli import RunConfig, build_parser, derive_report, evaluate_selector, run_command

__all__ = ["RunConfig", "build_parser", "derive_report", "evaluate_selector", "run_command"]
