"""Wirings, nonlocal content and the parameter scans built on them."""

from .content import (
    Decomposition,
    deterministic_tensor,
    distillation_gain,
    local_deterministic_boxes,
    nonlocal_content,
)
from .scan import (
    FIGURES,
    ScanOptions,
    ScanTable,
    conditional_local,
    metric,
    plot_script,
    run_figure,
    scan,
    simplex_grid,
    unit_grid,
)
from .wiring import (
    WIRINGS,
    PartyWiring,
    Wiring,
    bipartite_tensor,
    box_from_tensor,
    cavalcanti_wiring,
    foster_wiring,
    generalized_wiring,
    wire,
    wiring_library,
)

__all__ = [
    "Decomposition",
    "deterministic_tensor",
    "distillation_gain",
    "local_deterministic_boxes",
    "nonlocal_content",
    "FIGURES",
    "ScanOptions",
    "ScanTable",
    "conditional_local",
    "metric",
    "plot_script",
    "run_figure",
    "scan",
    "simplex_grid",
    "unit_grid",
    "WIRINGS",
    "PartyWiring",
    "Wiring",
    "bipartite_tensor",
    "box_from_tensor",
    "cavalcanti_wiring",
    "foster_wiring",
    "generalized_wiring",
    "wire",
    "wiring_library",
]
