"""Noncommutative coherence of qubit states and non-Hadamard phase estimation.

A small numerical toolkit built around two pieces:

* a coherence measure that scores a state by how strongly it fails to
  commute with the incoherent family, evaluated for any order and for two
  distance functions, and
* the success probability of the phase-estimation algorithm when the
  Hadamard preparation is replaced by a general rotation, evaluated by
  three mutually checking routes.

The ``nccoh-sweep`` CLI turns both into reproducible CSV sweeps with
extremum reports.
"""
__version__ = "0.1.0"

from ._kernels import backend_name
from .coherence import (
    AllGridPointsInfiniteError,
    BlochState,
    Distance,
    IncoherentQubit,
    NcConfig,
    NcResult,
    density_from_bloch,
    jordan_half,
    nc_coherence,
    nc_distance_at,
    nc_operator_pair,
    rel_ent_coherence,
    trace_dist_coherence,
    von_neumann_entropy,
)
from .hermitian import (
    EigenConvergenceError,
    HermiticityError,
    HermitianOperator,
    NotPositiveSemidefiniteError,
    SpectralDecomposition,
    SpectralDomainError,
    eig_herm,
    relative_entropy,
    trace_distance,
)
from .qpea import (
    ProbCurve,
    QpeaParams,
    circuit_oracle,
    circuit_state,
    default_delta,
    derivative_argmax,
    popcount,
    success_prob_derivative,
    success_prob_product,
    success_prob_sum,
    theta_argmax,
)

__all__ = [
    "__version__",
    "backend_name",
    "AllGridPointsInfiniteError",
    "BlochState",
    "Distance",
    "IncoherentQubit",
    "NcConfig",
    "NcResult",
    "density_from_bloch",
    "jordan_half",
    "nc_coherence",
    "nc_distance_at",
    "nc_operator_pair",
    "rel_ent_coherence",
    "trace_dist_coherence",
    "von_neumann_entropy",
    "EigenConvergenceError",
    "HermiticityError",
    "HermitianOperator",
    "NotPositiveSemidefiniteError",
    "SpectralDecomposition",
    "SpectralDomainError",
    "eig_herm",
    "relative_entropy",
    "trace_distance",
    "ProbCurve",
    "QpeaParams",
    "circuit_oracle",
    "circuit_state",
    "default_delta",
    "derivative_argmax",
    "popcount",
    "success_prob_derivative",
    "success_prob_product",
    "success_prob_sum",
    "theta_argmax",
]
