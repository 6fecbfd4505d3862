"""Young-function calculus: representations, derived constructions, scans."""

from .base import (
    ExpPowerYoung,
    PowerYoung,
    StepYoung,
    TabulatedYoung,
    YoungFunction,
    check_young_invariants,
    from_descriptor,
    from_text,
    to_descriptor,
    to_text,
    two_branch_density,
    young_from_density,
)
from .calculus import (
    HolderCompanionYoung,
    MonotoneMap,
    PowerLiftYoung,
    SobolevConjugateYoung,
    conjugate,
    datum_young,
    extension_target,
    holder_companion,
    sobolev_conjugate,
)
from .analysis import (
    GrowthReport,
    IndexReport,
    check_density_regularity,
    check_sobolev_ratio,
    dominates,
    equivalence_constant,
    growth_report,
    matuszewska_indices,
    scan_grid,
)
from .norms import luxemburg_norm, modular

__all__ = [
    "ExpPowerYoung",
    "GrowthReport",
    "HolderCompanionYoung",
    "IndexReport",
    "MonotoneMap",
    "PowerLiftYoung",
    "PowerYoung",
    "SobolevConjugateYoung",
    "StepYoung",
    "TabulatedYoung",
    "YoungFunction",
    "check_density_regularity",
    "check_sobolev_ratio",
    "check_young_invariants",
    "conjugate",
    "datum_young",
    "dominates",
    "equivalence_constant",
    "extension_target",
    "from_descriptor",
    "from_text",
    "growth_report",
    "holder_companion",
    "luxemburg_norm",
    "matuszewska_indices",
    "modular",
    "scan_grid",
    "sobolev_conjugate",
    "to_descriptor",
    "to_text",
    "two_branch_density",
    "young_from_density",
]
