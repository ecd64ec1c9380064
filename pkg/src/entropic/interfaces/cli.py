"""Command-line interface: derive, eval, optimize, scan and builtins."""

import argparse
import asyncio
import json
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import yaml
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..boxes import (
    NAMED_BOXES,
    MarginalModel,
    bilocal_row,
    builtin_box,
    chsh,
    chsh_entropic,
    chsh_max,
    chsh_variants,
    entropy_vector,
    klyachko_k5,
    load_box,
    ncycle_entropic,
)
from ..config import config
from ..distill import FIGURES, ScanOptions, plot_script, run_figure
from ..entropy import (
    EntropicInequality,
    EntropySpace,
    InequalityClass,
    Triviality,
    classify,
    evaluate,
    facet_table,
    project,
    triviality_filter,
)
from ..exceptions import EntropicError, ParameterError
from ..quantum import optimize_target
from ..scenarios import (
    BUILTIN_SCENARIOS,
    MarginalScenario,
    builtin_scenario,
    load_scenario,
    symmetries,
)
from ..storage import ResultWriter, RunLogManager, render_json

logger = logging.getLogger(__name__)

console = Console()

COMMANDS = ("derive", "eval", "optimize", "scan", "builtins")
TARGETS = ("chsh_e", "chsh_e_full", "klyachko_e", "chained:k")
SELECTORS = (
    "chsh", "chsh_max", "chsh_variants", "chsh_e", "k5", "ncycle", "ncycle:i",
    "klyachko_e", "bilocal", "bilocal:k", "<file.json|.yaml>",
)


@dataclass
class RunConfig:
    """
    One invocation's arguments, validated before anything runs.

    Overrides (tolerance, grid, workers) apply to the global config only
    for the duration of the run.
    """
    command: str
    builtin: Optional[str] = None
    scenario: Optional[str] = None
    box: Optional[str] = None
    ineq: list[str] = field(default_factory=list)
    target: Optional[str] = None
    figure: Optional[str] = None
    grid: Optional[float] = None
    seed: Optional[int] = None
    restarts: Optional[int] = None
    samples: int = 10000
    out: Optional[str] = None
    tolerance: Optional[float] = None
    format: str = "table"
    workers: Optional[int] = None
    log_level: Optional[str] = None

    def validate(self):
        """
        Raises:
            ParameterError: inconsistent or out-of-range arguments
        """
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.command == "derive" and bool(self.builtin) == bool(self.scenario):
            raise ParameterError("derive needs exactly one of --builtin or --scenario")
        if self.command == "eval":
            if bool(self.builtin) == bool(self.box):
                raise ParameterError("eval needs exactly one of --builtin or --box")
            if not self.ineq:
                raise ParameterError("eval needs at least one --ineq selector")
        if self.command == "optimize" and not self.target:
            raise ParameterError("optimize needs a target")
        if self.command == "scan" and self.figure not in FIGURES:
            raise ParameterError(
                f"unknown figure {self.figure!r}; known: {', '.join(FIGURES)}"
            )
        if self.grid is not None:
            n = round(1 / self.grid) if self.grid > 0 else 0
            if not 0 < self.grid <= 1 or abs(n * self.grid - 1) > 1e-9:
                raise ParameterError(f"--grid must divide 1, got {self.grid}")
        if self.seed is not None and self.seed < 0:
            raise ParameterError(f"--seed must be >= 0, got {self.seed}")
        if self.restarts is not None and self.restarts < 1:
            raise ParameterError(f"--restarts must be >= 1, got {self.restarts}")
        if self.samples < 0:
            raise ParameterError(f"--samples must be >= 0, got {self.samples}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ParameterError(f"--tolerance must be positive, got {self.tolerance}")
        if self.workers is not None and self.workers < 1:
            raise ParameterError(f"--workers must be >= 1, got {self.workers}")
        if self.format not in ("json", "table"):
            raise ParameterError(f"--format must be json or table, got {self.format!r}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {name for name in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in vars(args).items() if k in known and v is not None})

    @contextmanager
    def overrides(self):
        saved = (
            config.tolerances.violation,
            config.scan.grid_step,
            config.scan.workers,
            config.optimizer.workers,
            config.geometry.workers,
        )
        try:
            if self.tolerance is not None:
                config.tolerances.violation = self.tolerance
            if self.grid is not None:
                config.scan.grid_step = self.grid
            if self.workers is not None:
                config.scan.workers = self.workers
                config.optimizer.workers = self.workers
                config.geometry.workers = self.workers
            yield self
        finally:
            (
                config.tolerances.violation,
                config.scan.grid_step,
                config.scan.workers,
                config.optimizer.workers,
                config.geometry.workers,
            ) = saved


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropic",
        description="Entropic Bell, contextuality and bilocality inequalities.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--log-level", dest="log_level", default=config.log_level,
        help="logging level (DEBUG, INFO, WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, output: bool = True):
        p.add_argument(
            "--workers", type=int, default=None, help="parallel threads (config default)"
        )
        p.add_argument("--tolerance", type=float, default=None, help="violation tolerance override")
        if output:
            p.add_argument("--out", default=None, help="directory for result files")
            p.add_argument("--format", choices=("json", "table"), default="table")

    derive = sub.add_parser("derive", help="project the Shannon cone onto a scenario")
    derive.add_argument("--builtin", default=None, help=f"one of {', '.join(BUILTIN_SCENARIOS)}")
    derive.add_argument("--scenario", default=None, help="scenario file (JSON or YAML)")
    common(derive)

    ev = sub.add_parser("eval", help="evaluate inequalities on a box")
    ev.add_argument("--builtin", default=None, help="named box, e.g. pr, iso:0.8, dfamily:1/2,3")
    ev.add_argument("--box", default=None, help="box file (JSON or YAML)")
    ev.add_argument(
        "--ineq", action="append", default=None,
        help=f"inequality selector, repeatable: {', '.join(SELECTORS)}",
    )
    common(ev)

    opt = sub.add_parser("optimize", help="maximize an entropic violation over quantum boxes")
    opt.add_argument("target", help=f"one of {', '.join(TARGETS)}")
    opt.add_argument("--seed", type=int, default=None, help="root seed (config default 0)")
    opt.add_argument("--restarts", type=int, default=None, help="random starts (config default 50)")
    common(opt)

    sc = sub.add_parser("scan", help="compute a figure data set")
    sc.add_argument("figure", help=f"one of {', '.join(FIGURES)}")
    sc.add_argument("--grid", type=float, default=None, help="grid step (config default 0.01)")
    sc.add_argument("--seed", type=int, default=None)
    sc.add_argument("--restarts", type=int, default=None)
    sc.add_argument("--samples", type=int, default=10000, help="random samples (bilocal_quantum)")
    common(sc)

    listing = sub.add_parser("builtins", help="list scenarios, boxes, selectors and figures")
    listing.add_argument("--format", choices=("json", "table"), default="table")
    return parser


def _emit_json(data):
    sys.stdout.write(render_json(data))
    sys.stdout.flush()


def _error_payload(error: EntropicError) -> dict:
    return {"error": type(error).__name__, "message": str(error), "details": error.details()}


# derive

def _resolve_scenario(run: RunConfig) -> MarginalScenario:
    if run.scenario:
        return load_scenario(run.scenario)
    return builtin_scenario(run.builtin)


def derive_report(
    scenario: MarginalScenario, workers: Optional[int] = None
) -> tuple[dict, list[InequalityClass]]:
    """Equations, facets with triviality flags and symmetry classes of one scenario."""
    result = project(scenario, workers=workers, cap=config.geometry.max_inequalities)
    space = result.space
    trivial = {
        facet: triviality_filter(facet, scenario) is Triviality.TRIVIAL for facet in result.facets
    }
    classes = classify(result.facets, symmetries(scenario), result.reductions)
    for cls in classes:
        cls.trivial = trivial.get(cls.representative)
    report = result.to_dict()
    report["facets"] = [
        {**facet.to_dict(space), "trivial": trivial[facet], "text": facet.format(space)}
        for facet in result.facets
    ]
    report["equations"] = [
        {**eq.to_dict(space), "text": eq.format(space)} for eq in result.equations
    ]
    report["classes"] = [cls.to_dict(space) for cls in classes]
    report["counts"] = {
        "equations": len(result.equations),
        "facets": len(result.facets),
        "nontrivial": sum(1 for t in trivial.values() if not t),
        "classes": len(classes),
    }
    return report, classes


def _print_derive(scenario: MarginalScenario, report: dict, classes: list[InequalityClass]):
    space = EntropySpace(scenario.observables)
    counts = report["counts"]
    console.print(Panel(
        f"[bold]{scenario.name or 'scenario'}[/bold]: {counts['equations']} equations, "
        f"{counts['facets']} facets ({counts['nontrivial']} nontrivial), "
        f"{counts['classes']} symmetry classes",
        title="Projection",
        border_style="cyan",
    ))
    for eq in report["equations"]:
        console.print(f"  {eq['text']}")
    console.print(facet_table(classes, space))


async def cmd_derive(run: RunConfig) -> dict:
    scenario = _resolve_scenario(run)
    report, classes = await asyncio.to_thread(derive_report, scenario, workers=run.workers)
    if run.format == "table":
        _print_derive(scenario, report, classes)
    else:
        _emit_json(report)
    if run.out:
        await ResultWriter(Path(run.out)).write_json(
            f"derive_{(scenario.name or 'scenario').replace(':', '_')}.json", report
        )
    return report


# eval

@dataclass
class Evaluation:
    selector: str
    label: str
    value: float
    bound: float
    violated: bool


def _load_inequalities(path: Path) -> list[EntropicInequality]:
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
        if isinstance(data, dict):
            data = data.get("facets", data.get("inequalities", []))
        return [EntropicInequality.from_dict(item) for item in data]
    except (yaml.YAMLError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise ParameterError(f"malformed inequality file {path}: {exc}") from exc


def _rows(selector: str, argument: str, count: int) -> list[int]:
    if not argument:
        return list(range(1, count + 1))
    try:
        row = int(argument)
    except ValueError:
        raise ParameterError(f"row in {selector!r} must be an integer") from None
    if not 1 <= row <= count:
        raise ParameterError(f"row in {selector!r} must lie in 1..{count}")
    return [row]


def _above(selector: str, label: str, value: float, bound: float) -> Evaluation:
    return Evaluation(selector, label, value, bound, value > bound + config.tolerances.violation)


def evaluate_selector(box: MarginalModel, selector: str) -> list[Evaluation]:
    """
    Values of one inequality selector on `box`.

    Entropic selectors report LHS with bound 0; correlator CHSH has bound 2
    and K5 is violated below -3.
    """
    key, _, argument = selector.partition(":")
    key = key.lower()
    if key == "chsh" and not argument:
        return [_above(selector, "CHSH", chsh(box), 2.0)]
    if key == "chsh_max" and not argument:
        return [_above(selector, "max CHSH variant", chsh_max(box), 2.0)]
    if key == "chsh_variants" and not argument:
        return [_above(selector, f"CHSH variant {i}", v, 2.0)
                for i, v in enumerate(chsh_variants(box), 1)]
    if key == "chsh_e" and not argument:
        return [_above(selector, "CHSH_E", chsh_entropic(box), 0.0)]
    if key == "k5" and not argument:
        value = klyachko_k5(box)
        return [Evaluation(selector, "K5", value, -3.0, value < -3.0 - config.tolerances.violation)]
    if key in ("ncycle", "klyachko_e"):
        entropies = entropy_vector(box)
        n = len(box.scenario.cycle_order())
        rows = _rows(selector, argument, n)
        return [_above(selector, f"cycle row {i}", ncycle_entropic(box, i, entropies), 0.0)
                for i in rows]
    if key == "bilocal":
        entropies = entropy_vector(box)
        rows = _rows(selector, argument, 10)
        return [_above(selector, f"bilocal row {k}", bilocal_row(box, k, entropies), 0.0)
                for k in rows]
    path = Path(selector)
    if path.suffix in (".json", ".yaml", ".yml"):
        if not path.exists():
            raise ParameterError(f"inequality file not found: {path}")
        entropies = entropy_vector(box)
        space = EntropySpace(box.scenario.observables)
        return [
            _above(selector, ineq.format(space), evaluate(ineq, entropies), 0.0)
            for ineq in _load_inequalities(path)
        ]
    raise ParameterError(f"unknown inequality selector {selector!r}; known: {', '.join(SELECTORS)}")


def _resolve_box(run: RunConfig) -> MarginalModel:
    if run.box:
        return load_box(run.box, tolerance=run.tolerance)
    return builtin_box(run.builtin)


async def cmd_eval(run: RunConfig) -> dict:
    box = _resolve_box(run)
    evaluations = [e for selector in run.ineq for e in evaluate_selector(box, selector)]
    report = {
        "box": run.builtin or run.box,
        "scenario": box.scenario.name,
        "values": [asdict(e) for e in evaluations],
    }
    if run.format == "table":
        table = Table(title=f"{report['box']} ({box.scenario.name or 'scenario'})")
        table.add_column("selector", style="cyan")
        table.add_column("expression")
        table.add_column("value", justify="right")
        table.add_column("bound", justify="right")
        table.add_column("violated")
        for e in evaluations:
            table.add_row(
                e.selector, e.label, f"{e.value:.10g}", f"{e.bound:g}",
                "[red]yes[/red]" if e.violated else "[green]no[/green]",
            )
        console.print(table)
    else:
        _emit_json(report)
    if run.out:
        await ResultWriter(Path(run.out)).write_json("eval.json", report)
    return report


# optimize

async def cmd_optimize(run: RunConfig) -> dict:
    result = await asyncio.to_thread(
        optimize_target, run.target,
        restarts=run.restarts, seed=run.seed, workers=run.workers,
    )
    report = result.to_dict()
    if run.format == "table":
        params = ", ".join(
            f"{name}={value:.5f}"
            for name, value in zip(report["parameter_names"], report["best_params"])
        )
        console.print(Panel(
            f"best value: [bold]{report['best_value']:.6f}[/bold]\n"
            f"parameters: {params}\n"
            f"restarts: {report['restarts']}  seed: {report['seed']}  "
            f"evaluations: {report['evaluations']}",
            title=f"optimize {report['target']}",
            border_style="green",
        ))
    else:
        _emit_json(report)
    if run.out:
        name = f"optimize_{report['target'].replace(':', '_')}.json"
        await ResultWriter(Path(run.out)).write_json(name, report)
    return report


# scan

async def cmd_scan(run: RunConfig) -> dict:
    options = ScanOptions(
        grid=run.grid, seed=run.seed, restarts=run.restarts,
        workers=run.workers, samples=run.samples,
    )
    table = await asyncio.to_thread(run_figure, run.figure, options)
    writer = ResultWriter(Path(run.out) if run.out else None)
    csv_name = f"{table.figure}.csv"
    paths = await writer.write_scan(table, plot_script(table.figure, csv_name))
    report = {
        "figure": table.figure,
        "rows": len(table.rows),
        "summary": table.summary,
        "files": [str(p) for p in paths],
    }
    if run.format == "table":
        summary = Table(title=f"scan {table.figure}: {len(table.rows)} rows")
        summary.add_column("summary", style="cyan")
        summary.add_column("value", justify="right")
        for key, value in table.summary.items():
            summary.add_row(key, str(value))
        console.print(summary)
        for path in paths:
            console.print(f"  wrote {path}")
    else:
        _emit_json(report)
    return report


# builtins

async def cmd_builtins(run: RunConfig) -> dict:
    report = {
        "scenarios": list(BUILTIN_SCENARIOS),
        "boxes": {
            name: {"parameters": list(f.parameters), "description": f.description}
            for name, f in NAMED_BOXES.items()
        },
        "selectors": list(SELECTORS),
        "targets": list(TARGETS),
        "figures": list(FIGURES),
    }
    if run.format == "json":
        _emit_json(report)
        return report
    table = Table(title="Built-ins")
    table.add_column("kind", style="cyan")
    table.add_column("name")
    table.add_column("description")
    for name in BUILTIN_SCENARIOS:
        table.add_row("scenario", name, "")
    for name, family in NAMED_BOXES.items():
        params = f"{name}:{','.join(family.parameters)}" if family.parameters else name
        table.add_row("box", params, family.description)
    for name in SELECTORS:
        table.add_row("selector", name, "")
    for name in TARGETS:
        table.add_row("target", name, "")
    for name in FIGURES:
        table.add_row("figure", name, "")
    console.print(table)
    return report


HANDLERS: dict[str, Callable[[RunConfig], object]] = {
    "derive": cmd_derive,
    "eval": cmd_eval,
    "optimize": cmd_optimize,
    "scan": cmd_scan,
    "builtins": cmd_builtins,
}


async def run_command(argv: Sequence[str], run_log: Optional[RunLogManager] = None) -> int:
    """
    Parse, validate and execute one command; returns the exit code.

    Library errors become exit code 1 with a JSON error object on stdout.
    """
    args = build_parser().parse_args(list(argv))
    run = RunConfig.from_args(args)
    started = time.monotonic()
    error: Optional[EntropicError] = None
    try:
        run.validate()
        with run.overrides():
            await HANDLERS[run.command](run)
    except EntropicError as exc:
        error = exc
        logger.debug("%s failed: %s", run.command, exc)
        _emit_json(_error_payload(exc))
    elapsed = time.monotonic() - started
    try:
        await (run_log or RunLogManager()).log_run(
            run.command,
            {k: v for k, v in asdict(run).items() if v not in (None, [], "")},
            seed=run.seed,
            duration_s=elapsed,
            error=type(error).__name__ if error else None,
        )
    except OSError as exc:
        logger.warning("could not write run log: %s", exc)
    return 1 if error else 0
