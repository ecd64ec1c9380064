"""Main entry point for the entropic command-line tool."""

import asyncio
import logging
import sys

from rich.console import Console
from rich.logging import RichHandler

from .config import config
from .interfaces.cli import run_command


def setup_logging(level: str):
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)],
        force=True,
    )


def _log_level(argv: list[str]) -> str:
    for i, arg in enumerate(argv):
        if arg == "--log-level" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--log-level="):
            return arg.split("=", 1)[1]
    return config.log_level


def cli_main():
    """Entry point for CLI."""
    argv = sys.argv[1:]
    setup_logging(_log_level(argv))
    sys.exit(asyncio.run(run_command(argv)))


if __name__ == "__main__":
    cli_main()
