"""Parameter scans over box families and the figure data sets built on them."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..boxes import (
    MarginalModel,
    bilocal_inequalities,
    bilocal_row,
    check_bilocal_marginal,
    chsh,
    chsh_entropic,
    chsh_max,
    dfamily_box,
    entropy_vector,
    is_noncontextual,
    nb_box,
    nb_conditional_box,
    polygon_inequality,
    single_detector,
    single_detector_entropies,
    triangle_box,
)
from ..config import config
from ..entropy import evaluate
from ..exceptions import ParameterError
from ..quantum import (
    KLYACHKO_BOUNDS,
    bilocal_quantum_box,
    chained_objective,
    chsh_quantum_box,
    horodecki_chsh,
    klyachko_quantum_box,
    maximize,
    two_detector_objective,
    two_detector_threshold,
)
from ..quantum.optimize import ANGLE_BOUNDS
from .content import distillation_gain, nonlocal_content
from .wiring import wiring_library

logger = logging.getLogger(__name__)

Metric = Callable[[MarginalModel], object]
Family = Callable[..., MarginalModel]

TSIRELSON = 2 * math.sqrt(2)
KLYACHKO_OPTIMUM = (0.29736, 0.24131, 0.24131)


@dataclass
class ScanTable:
    """
    Rows of (parameters, metric values) in grid order.

    Attributes:
        figure: Data set name
        columns: Header row
        rows: One list per grid point
        summary: Scalars derived from the rows (thresholds, maxima)
    """
    figure: str
    columns: list[str]
    rows: list[list[object]] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def column(self, name: str) -> list[object]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "figure": self.figure,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
        }


def _number(value: object) -> object:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (Fraction, np.floating)):
        return float(value)
    return value


def metric(name: str) -> Metric:
    """
    Resolve a metric name: chsh, chsh_max, chsh_entropic, nonlocal_content,
    gain:<wiring>, quantum_region, noncontextual, bilocal_row:<k> or
    bilocal_marginal.
    """
    key, _, argument = name.partition(":")
    if key == "chsh" and not argument:
        return chsh
    if key == "chsh_max" and not argument:
        return chsh_max
    if key == "chsh_entropic" and not argument:
        return chsh_entropic
    if key == "nonlocal_content" and not argument:
        return lambda box: nonlocal_content(box).q
    if key == "gain" and argument:
        wiring = wiring_library(argument)
        return lambda box: distillation_gain(box, wiring)
    if key == "quantum_region" and not argument:
        # CHSH <= 2 sqrt(2) is necessary for a quantum box
        return lambda box: chsh_max(box) <= TSIRELSON + config.tolerances.violation
    if key == "noncontextual" and not argument:
        return lambda box: is_noncontextual(box).noncontextual
    if key == "bilocal_row" and argument:
        try:
            k = int(argument)
        except ValueError:
            raise ParameterError(f"bilocality row must be an integer, got {argument!r}") from None
        return lambda box: bilocal_row(box, k)
    if key == "bilocal_marginal" and not argument:
        return lambda box: check_bilocal_marginal(box, config.tolerances.normalization)
    raise ParameterError(f"unknown metric {name!r}")


def scan(
    family: Family,
    grid: Sequence[Sequence[object]],
    metrics: Sequence[Union[str, tuple[str, Metric]]],
    *,
    parameters: Sequence[str] = (),
    figure: str = "scan",
    workers: Optional[int] = None,
) -> ScanTable:
    """
    Evaluate metrics on family(*point) for every grid point.

    Rows come back in grid order whatever the worker count; an empty grid
    gives an empty table.
    """
    resolved: list[tuple[str, Metric]] = [
        (m, metric(m)) if isinstance(m, str) else m for m in metrics
    ]
    width = len(grid[0]) if grid else len(parameters)
    names = list(parameters) or [f"p{i}" for i in range(width)]
    columns = names + [name for name, _ in resolved]
    workers = workers or config.scan.workers

    def evaluate_point(point: Sequence[object]) -> list[object]:
        box = family(*point)
        return [_number(p) for p in point] + [_number(fn(box)) for _, fn in resolved]

    started = time.monotonic()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate_point, grid))
    else:
        rows = [evaluate_point(point) for point in grid]
    logger.info("%s: %d points in %.1fs", figure, len(rows), time.monotonic() - started)
    return ScanTable(figure, columns, rows)


def unit_grid(step: float, low: int = 0) -> list[Fraction]:
    """i * step for i = low..1/step as exact fractions; step must divide 1."""
    n = round(1 / step)
    if n < 1 or abs(n * step - 1) > 1e-9:
        raise ParameterError(f"grid step must divide 1, got {step}")
    return [Fraction(i, n) for i in range(low, n + 1)]


def simplex_grid(step: float) -> list[tuple[Fraction, Fraction]]:
    """Pairs (s, t) on the grid with s + t <= 1."""
    values = unit_grid(step)
    return [(s, t) for s in values for t in values if s + t <= 1]


@dataclass
class ScanOptions:
    """Per-run overrides; None falls back to config."""
    grid: Optional[float] = None
    seed: Optional[int] = None
    restarts: Optional[int] = None
    workers: Optional[int] = None
    samples: int = 10000

    @property
    def step(self) -> float:
        return self.grid if self.grid is not None else config.scan.grid_step


def scan_alpha_profile(options: ScanOptions) -> ScanTable:
    """CHSH_E maximized over Y-Z plane settings at fixed alpha, beside 2 sqrt(1 + sin^2 2a)."""
    n = round(1 / options.step)
    table = ScanTable("alpha_profile", ["alpha", "chsh_entropic", "chsh_horodecki"])
    for i in range(1, n):
        alpha = i * (math.pi / 2) / n

        def objective(angles: np.ndarray, alpha: float = alpha) -> float:
            return chsh_entropic(chsh_quantum_box(alpha, angles, validate=False))

        report = maximize(
            objective, [ANGLE_BOUNDS] * 4,
            restarts=options.restarts, seed=options.seed, workers=options.workers,
            target=f"alpha={alpha:.4f}",
        )
        table.rows.append([alpha, report.best_value, horodecki_chsh(alpha)])
    return table


def scan_chained_settings(
    options: ScanOptions, settings: Sequence[int] = range(2, 11)
) -> ScanTable:
    """Largest entropic chained violation at alpha = pi/4 for k = 2..10 settings."""
    table = ScanTable("chained_settings", ["k", "violation"])
    alpha = math.pi / 4
    for k in settings:
        full = chained_objective(k)

        def objective(angles: np.ndarray, full=full) -> float:
            return full(np.concatenate(([alpha], angles)))

        report = maximize(
            objective, [ANGLE_BOUNDS] * (2 * k),
            restarts=options.restarts, seed=options.seed, workers=options.workers,
            target=f"chained:{k}",
        )
        table.rows.append([k, report.best_value])
    return table


def scan_triangle(options: ScanOptions) -> ScanTable:
    """The triangle gamma PR + xi P^c + rest P^f: violation, content and both two-copy gains."""
    table = scan(
        triangle_box,
        simplex_grid(options.step),
        ["chsh", "chsh_entropic", "nonlocal_content", "gain:foster", "gain:cavalcanti",
         "quantum_region"],
        parameters=["gamma", "xi"],
        figure="triangle",
        workers=options.workers,
    )
    violating = [r for r in table.records() if r["chsh_entropic"] > config.tolerances.violation]
    distillable = [r for r in table.records() if r["gain:cavalcanti"] > config.tolerances.violation]
    table.summary = {
        "chsh_entropic_violations": len(violating),
        "cavalcanti_distillable": len(distillable),
        "foster_distillable": sum(
            1 for r in table.records() if r["gain:foster"] > config.tolerances.violation
        ),
        "cavalcanti_inside_violation": all(
            r["chsh_entropic"] > config.tolerances.violation for r in distillable
        ),
    }
    return table


def scan_dfamily_wiring(
    options: ScanOptions, dimensions: Sequence[int] = (2, 3, 4, 5)
) -> ScanTable:
    """xi PR_d + (1 - xi) P^c_d under the generalized wiring for each d."""
    table = ScanTable("dfamily_wiring", ["d", "xi", "chsh_entropic", "nonlocal_content", "gain"])
    for d in dimensions:
        part = scan(
            lambda xi, d=d: dfamily_box(xi, d),
            [(xi,) for xi in unit_grid(options.step)],
            ["chsh_entropic", "nonlocal_content", f"gain:generalized:{d}"],
            parameters=["xi"],
            figure=f"dfamily_wiring d={d}",
            workers=options.workers,
        )
        table.rows.extend([d] + row for row in part.rows)
    table.summary = {
        f"max_gain_d{d}": max((r[4] for r in table.rows if r[0] == d), default=0.0)
        for d in dimensions
    }
    return table


def conditional_local(xi, gamma) -> bool:
    """Both B-conditioned A-C boxes of NB(xi, gamma) satisfy every CHSH variant."""
    return all(chsh_max(nb_conditional_box(xi, gamma, b)) <= 2 for b in (0, 1))


def scan_nb_bilocal(options: ScanOptions, row: int = 7) -> ScanTable:
    """NB(xi, gamma): a bilocality row against tripartite locality."""
    grid = simplex_grid(options.step)
    table = scan(
        nb_box,
        grid,
        [f"bilocal_row:{row}", "noncontextual", "bilocal_marginal"],
        parameters=["xi", "gamma"],
        figure="nb_bilocal",
        workers=options.workers,
    )
    table.columns.append("conditional_local")
    for values, (xi, gamma) in zip(table.rows, grid):
        values.append(int(conditional_local(xi, gamma)))
    records = table.records()
    violating = [r for r in records if r[f"bilocal_row:{row}"] > config.tolerances.violation]
    table.summary = {
        "violations": len(violating),
        "violations_while_local": sum(1 for r in violating if r["noncontextual"]),
        "marginal_ok": all(r["bilocal_marginal"] for r in records),
        "lp_matches_chsh": all(r["noncontextual"] == r["conditional_local"] for r in records),
    }
    return table


def _klyachko_best_row(entropies) -> int:
    order = tuple(f"X{i}" for i in range(1, 6))
    values = [evaluate(polygon_inequality(order, i), entropies) for i in range(1, 6)]
    return 1 + int(np.argmax(values))


def eta_single(options: ScanOptions, params: Sequence[float] = KLYACHKO_OPTIMUM) -> ScanTable:
    """
    Entropic Klyachko value under one detector per context, from the closed
    form and from the entropies of the transformed box.
    """
    box = klyachko_quantum_box(*params)
    entropies = entropy_vector(box)
    i = _klyachko_best_row(entropies)
    inequality = polygon_inequality(box.scenario.cycle_order(), i)
    table = ScanTable("eta_single", ["eta", "closed_form", "direct"])
    for eta in unit_grid(options.step, low=1):
        value = float(eta)
        closed = evaluate(inequality, single_detector_entropies(entropies, value))
        direct = evaluate(inequality, entropy_vector(single_detector(box, value)))
        table.rows.append([value, closed, direct])
    table.summary = {
        "ideal_violation": evaluate(inequality, entropies),
        "all_positive": all(row[1] > 0 for row in table.rows),
        "max_closed_direct_gap": max((abs(r[1] - r[2]) for r in table.rows), default=0.0),
    }
    return table


def eta_two(
    options: ScanOptions,
    bracket: tuple[float, float] = (0.98, 1.0),
    tolerance: float = 1e-4,
) -> ScanTable:
    """Violation against efficiency with two independent detectors, and its threshold."""
    result = two_detector_threshold(
        bracket, tolerance,
        restarts=options.restarts, seed=options.seed, workers=options.workers,
    )
    table = ScanTable("eta_two", ["eta", "violation"])
    table.rows = [[eta, value] for eta, value in sorted(result.steps)]
    table.summary = {"threshold": result.threshold, "bracket": list(bracket)}
    return table


def _bilocal_parameters(rng: np.random.Generator) -> np.ndarray:
    """theta1, phi1, theta2, phi2, then (theta, phi) for A0, A1, C0, C1."""
    sources = rng.uniform([0, 0, 0, 0], [math.pi / 2, 2 * math.pi, math.pi / 2, 2 * math.pi])
    directions = np.column_stack((
        rng.uniform(0, math.pi, size=4), rng.uniform(0, 2 * math.pi, size=4)
    )).ravel()
    return np.concatenate((sources, directions))


def _bilocal_box(params: Sequence[float]) -> MarginalModel:
    t1, p1, t2, p2 = params[:4]
    d = params[4:]
    return bilocal_quantum_box(
        t1, p1, t2, p2, [(d[0], d[1]), (d[2], d[3])], [(d[4], d[5]), (d[6], d[7])],
        validate=False,
    )


BILOCAL_BOUNDS = [(0, math.pi / 2), (0, 2 * math.pi)] * 2 + [(0, math.pi), (0, 2 * math.pi)] * 4


def bilocal_quantum(options: ScanOptions) -> ScanTable:
    """
    Largest value of every bilocality inequality over random quantum
    entanglement-swapping boxes, then an optimizer run per class.
    """
    inequalities = bilocal_inequalities()
    rng = np.random.default_rng(options.seed if options.seed is not None else config.optimizer.seed)
    table = ScanTable("bilocal_quantum", ["sample", "max_violation", "inequality"])
    for sample in range(options.samples):
        entropies = entropy_vector(_bilocal_box(_bilocal_parameters(rng)))
        values = [evaluate(ineq, entropies) for ineq in inequalities]
        best = int(np.argmax(values))
        table.rows.append([sample, values[best], best])

    restarts = (
        options.restarts if options.restarts is not None else config.optimizer.bilocal_restarts
    )
    optimized = []
    if restarts > 0:
        for k in range(1, 11):
            def objective(params: np.ndarray, k: int = k) -> float:
                return bilocal_row(_bilocal_box(params), k)

            report = maximize(
                objective, BILOCAL_BOUNDS,
                restarts=restarts, seed=options.seed, workers=options.workers,
                target=f"bilocal row {k}",
            )
            optimized.append(report.best_value)
    sampled = max((row[1] for row in table.rows), default=float("-inf"))
    table.summary = {
        "inequalities": len(inequalities),
        "restarts_per_class": restarts,
        "max_sampled": sampled,
        "max_optimized": max(optimized, default=float("-inf")),
        "violation_found": max([sampled] + optimized) > config.tolerances.violation,
    }
    return table


SCANS: dict[str, Callable[[ScanOptions], ScanTable]] = {
    "alpha_profile": scan_alpha_profile,
    "chained_settings": scan_chained_settings,
    "triangle": scan_triangle,
    "dfamily_wiring": scan_dfamily_wiring,
    "nb_bilocal": scan_nb_bilocal,
    "eta_single": eta_single,
    "eta_two": eta_two,
    "bilocal_quantum": bilocal_quantum,
}

# figure ids accepted by `entropic scan`, each naming one of SCANS
FIGURE_IDS = {
    "fig2a": "alpha_profile",
    "fig2b": "chained_settings",
    "fig3": "triangle",
    "fig4": "dfamily_wiring",
    "fig6": "nb_bilocal",
}

FIGURES: dict[str, Callable[[ScanOptions], ScanTable]] = {
    **{figure: SCANS[scan] for figure, scan in FIGURE_IDS.items()},
    **SCANS,
}


def run_figure(name: str, options: Optional[ScanOptions] = None) -> ScanTable:
    """
    Build the data set `name`; the table is labelled with the requested name.

    Raises:
        ParameterError: unknown figure name
    """
    builder = FIGURES.get(name)
    if builder is None:
        raise ParameterError(f"unknown figure {name!r}; known: {', '.join(FIGURES)}")
    table = builder(options or ScanOptions())
    table.figure = name
    return table


PLOTS = {
    "alpha_profile": (
        "set xlabel 'alpha'\nset ylabel 'value'\n"
        "plot '{data}' using 1:2 with lines title 'CHSH_E', "
        "'' using 1:($3-2) with lines dt 2 title 'CHSH - 2'\n"
    ),
    "chained_settings": (
        "set xlabel 'k'\nset ylabel 'violation'\n"
        "plot '{data}' using 1:2 with linespoints title 'entropic chained'\n"
    ),
    "triangle": (
        "set xlabel 'gamma'\nset ylabel 'xi'\nset size ratio -1\n"
        "plot '{data}' using 1:($4>0?$2:1/0) with points pt 7 ps 0.3 title 'CHSH_E > 0', "
        "'' using 1:($6>0?$2:1/0) with points pt 6 ps 0.5 title 'foster', "
        "'' using 1:($7>0?$2:1/0) with points pt 2 ps 0.5 title 'cavalcanti'\n"
    ),
    "dfamily_wiring": (
        "set xlabel 'xi'\nset ylabel 'gain'\n"
        "plot for [d=2:5] '{data}' using ($1==d?$2:1/0):5 with lines title sprintf('d=%d', d)\n"
    ),
    "nb_bilocal": (
        "set xlabel 'xi'\nset ylabel 'gamma'\nset size ratio -1\n"
        "plot '{data}' using 1:($3>0?$2:1/0) with points pt 7 ps 0.3 title 'row 7 > 0', "
        "'' using 1:($4>0?$2:1/0) with points pt 6 ps 0.3 title 'tripartite local'\n"
    ),
    "eta_single": (
        "set xlabel 'eta'\nset ylabel 'violation'\n"
        "plot '{data}' using 1:2 with lines title 'closed form', "
        "'' using 1:3 with points title 'direct'\n"
    ),
    "eta_two": (
        "set xlabel 'eta'\nset ylabel 'violation'\n"
        "plot '{data}' using 1:2 with linespoints title 'two detectors', 0 notitle\n"
    ),
    "bilocal_quantum": (
        "set xlabel 'sample'\nset ylabel 'max value'\n"
        "plot '{data}' using 1:2 with dots title 'largest bilocality LHS'\n"
    ),
}


def plot_script(figure: str, data_file: str) -> str:
    """A gnuplot script reading the CSV written for `figure`."""
    body = PLOTS.get(FIGURE_IDS.get(figure, figure))
    if body is None:
        raise ParameterError(f"no plot layout for {figure!r}")
    header = (
        f"# {figure}\n"
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set terminal pngcairo size 800,600\n"
        f"set output '{figure}.png'\n"
    )
    return header + body.format(data=data_file)
