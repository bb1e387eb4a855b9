"""Decay of normalized characters on compact Lie groups and central states of SU_q(N)."""

__version__ = "0.1.0"

from .errors import (
    BoundaryError,
    ConfigurationError,
    HoweMooreError,
    PrecisionError,
    RangeError,
    ResourceError,
    ZeroDenominatorError,
)
from .lie import angle_point, build_root_system, center_points, dominant_weights_in_ball, weyl_group
from .characters import character, characters, convergence_scan, dim_v, normalized_character
from .fusion import fuse
from .multipliers import AtomicMeasure, Multiplier, cp_gram_check, hm_decompose, multiplier_from_measure
from .qcentral import (
    CentralAtom,
    CentralState,
    decompose_central_state,
    phi_one,
    phi_q,
    relation_check,
    sl_context,
)

__all__ = [
    "__version__",
    "AtomicMeasure",
    "BoundaryError",
    "CentralAtom",
    "CentralState",
    "ConfigurationError",
    "HoweMooreError",
    "Multiplier",
    "PrecisionError",
    "RangeError",
    "ResourceError",
    "ZeroDenominatorError",
    "angle_point",
    "build_root_system",
    "center_points",
    "character",
    "characters",
    "convergence_scan",
    "cp_gram_check",
    "decompose_central_state",
    "dim_v",
    "dominant_weights_in_ball",
    "fuse",
    "hm_decompose",
    "multiplier_from_measure",
    "normalized_character",
    "phi_one",
    "phi_q",
    "relation_check",
    "sl_context",
    "weyl_group",
]
