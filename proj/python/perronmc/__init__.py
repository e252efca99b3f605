"""Perron-Frobenius eigenpairs of primitive matrices from Markov chain excursions.

States are 0-based in this module.
"""

from ._perronmc import (
    EstimateReport,
    NonNegativeMatrix,
    PerronmcError,
    PerronPair,
    check_primitive,
    conditioned_proportions,
    decompose,
    lemma_partial_sums,
    power_iteration,
    quasispecies_residual,
    run_estimation,
    scale,
)

__all__ = [
    "EstimateReport",
    "NonNegativeMatrix",
    "PerronPair",
    "PerronmcError",
    "check_primitive",
    "conditioned_proportions",
    "decompose",
    "lemma_partial_sums",
    "power_iteration",
    "quasispecies_residual",
    "run_estimation",
    "scale",
]
