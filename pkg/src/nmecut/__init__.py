"""Quasi-probabilistic wire cutting with non-maximally entangled resource states."""

from .channels import (
    CutTerm,
    MeasurePrepareChannel,
    WireCutDecomposition,
    apply_decomposition_exact,
    apply_term_exact,
    choi,
    harada_cut,
    identity_deviation,
    kappa_nme,
    nme_cut,
    sample_bits,
    sample_term,
    teleport_exact,
)
from .entangle import (
    NmeResource,
    SchmidtDecomposition,
    haar_random_unitary,
    k_from_robustness,
    nme_state,
    robustness_of_k,
    robustness_pure,
    schmidt_decompose,
)
from .estimator import (
    CutEstimate,
    Observable,
    ShotPlan,
    allocate_shots,
    estimate_distribution,
    estimate_expectation,
    l2_error,
    shots_for_accuracy,
)
from .experiment import ExperimentConfig, ExperimentRecord, run_sweep, run_trial, write_records
from .qmath import DensityOperator, PureState

__version__ = "0.1.0"
