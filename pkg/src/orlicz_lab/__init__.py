"""Desk-scale experiments on random series in Banach spaces: summability
detectors, exact sign-cube checks and the coarse random subseries pipeline."""

from .catalog import FAMILY_NAMES, catalog, oracle_verdict
from .convergence import Budget, detect_bounded, detect_strong, detect_weak, recheck
from .ito_nisio import dichotomy_experiment, equidistribution_check, levy_check_exhaustive
from .orlicz_pettis import (BudgetExhausted, extract_blocks, op_experiment,
                            subseries_flip_identity, unconditional_cauchy_scan)
from .randomness import Seed, sample_coarse, sample_haar
from .series import BlockPartition, CoefficientSeq, FormalSeries, partial_sum
from .space_core import Functional, Space, Vector, norm, norming_family, pair

__version__ = "0.1.0"

__all__ = [
    "FAMILY_NAMES", "catalog", "oracle_verdict", "Budget", "detect_bounded", "detect_strong",
    "detect_weak", "recheck", "dichotomy_experiment", "equidistribution_check",
    "levy_check_exhaustive", "BudgetExhausted", "extract_blocks", "op_experiment",
    "subseries_flip_identity", "unconditional_cauchy_scan", "Seed", "sample_coarse",
    "sample_haar", "BlockPartition", "CoefficientSeq", "FormalSeries", "partial_sum",
    "Functional", "Space", "Vector", "norm", "norming_family", "pair",
]
