"""Boxes: marginal models, named families, expressions and detector models."""

from .detectors import (
    click_pattern_entropy,
    single_detector,
    single_detector_entropies,
    two_detector,
    two_detector_entropies,
)
from .entropy import entropy_vector
from .expressions import (
    BILOCAL_COLUMNS,
    BILOCAL_TABLE,
    bilocal_inequalities,
    bilocal_inequality,
    bilocal_row,
    check_bilocal_marginal,
    chsh,
    chsh_entropic,
    chsh_inequality,
    chsh_max,
    chsh_variants,
    correlator,
    klyachko_k5,
    ncycle_entropic,
    polygon_inequality,
)
from .families import (
    NAMED_BOXES,
    BoxFamily,
    antipr_box,
    anticlassical_box,
    bipartite_box,
    builtin_box,
    classical_box,
    classical_d_box,
    dfamily_box,
    isotropic_box,
    named_box,
    nb_box,
    nb_conditional_box,
    pf_box,
    pmax_box,
    pr_box,
    prd_box,
    triangle_box,
    white_box,
)
from .model import MarginalModel, dump_box, load_box, marginal, mix, relabel_outcomes, validate
from .noncontextual import (
    HiddenVariableCertificate,
    NoncontextualityResult,
    box_from_joint,
    is_noncontextual,
    nosignaling_chsh_vertices,
    sample_bilocal_box,
    sample_noncontextual_box,
    sample_nosignaling_chsh_box,
)

__all__ = [
    "MarginalModel",
    "dump_box",
    "load_box",
    "marginal",
    "mix",
    "relabel_outcomes",
    "validate",
    "entropy_vector",
    "NAMED_BOXES",
    "BoxFamily",
    "antipr_box",
    "anticlassical_box",
    "bipartite_box",
    "builtin_box",
    "classical_box",
    "classical_d_box",
    "dfamily_box",
    "isotropic_box",
    "named_box",
    "nb_box",
    "nb_conditional_box",
    "pf_box",
    "pmax_box",
    "pr_box",
    "prd_box",
    "triangle_box",
    "white_box",
    "BILOCAL_COLUMNS",
    "BILOCAL_TABLE",
    "bilocal_inequalities",
    "bilocal_inequality",
    "bilocal_row",
    "check_bilocal_marginal",
    "chsh",
    "chsh_entropic",
    "chsh_inequality",
    "chsh_max",
    "chsh_variants",
    "correlator",
    "klyachko_k5",
    "ncycle_entropic",
    "polygon_inequality",
    "click_pattern_entropy",
    "single_detector",
    "single_detector_entropies",
    "two_detector",
    "two_detector_entropies",
    "HiddenVariableCertificate",
    "NoncontextualityResult",
    "box_from_joint",
    "is_noncontextual",
    "nosignaling_chsh_vertices",
    "sample_bilocal_box",
    "sample_noncontextual_box",
    "sample_nosignaling_chsh_box",
]
