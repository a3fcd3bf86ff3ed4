"""Noncommutative coherence of qubit states.

The measure compares, for a state rho and each incoherent sigma(p) =
diag(p, 1-p), the operators (|rho sigma + sigma rho|/2)^alpha and
|rho^alpha sigma^alpha + sigma^alpha rho^alpha|/2 and takes the largest
distance between them over p.  alpha = 1/n is the inverse order; the
default n = 2 recovers the square-root construction.  Conventional
coherence measures (relative-entropy and trace-distance based) are
provided for comparison.

Scalar evaluations are delegated to the kernel backend; the generic
operator construction is also available through HermitianOperator for
cross-checks and for dimensions other than 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .hermitian import (
    HermitianOperator,
    NotPositiveSemidefiniteError,
    relative_entropy,
    trace_distance,
)

_K = _kernels.active

DENSITY_TRACE_TOL = 1e-9
COHERENCE_AGREEMENT_TOL = 1e-6


class Distance(str, Enum):
    """Distance function used inside the coherence maximization."""

    REL_ENT = "rel-ent"
    TRACE = "trace"

    @property
    def code(self) -> int:
        return 0 if self is Distance.REL_ENT else 1


class AllGridPointsInfiniteError(RuntimeError):
    """Every sampled p produced an infinite distance; nothing to maximize."""


@dataclass(frozen=True)
class BlochState:
    """Qubit state parametrized by Bloch radius and angles.

    r in [0, 1], theta in [0, pi], phi_az in [0, 2*pi).  The azimuthal
    angle never affects the coherence values here (the incoherent family
    is fixed by diagonal matrices) but is carried for completeness.
    """

    r: float
    theta: float
    phi_az: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi_az < 2.0 * math.pi:
            raise ValueError(f"phi_az must lie in [0, 2*pi), got {self.phi_az}")


@dataclass(frozen=True)
class IncoherentQubit:
    """Diagonal qubit state diag(p, 1-p) in the computational basis."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def operator(self) -> HermitianOperator:
        return HermitianOperator(np.diag([self.p, 1.0 - self.p]))


@dataclass(frozen=True)
class NcConfig:
    """Order and optimizer parameters for the coherence maximization.

    order_inverse is alpha = 1/n; the grid/refinement pair implements a
    coarse scan followed by three-point bracket refinement, robust to the
    objective not being unimodal in p.  boundary_eps clamps p away from
    the interval ends, where the relative entropy can diverge.
    """

    order_inverse: float = 0.5
    distance: Distance = Distance.REL_ENT
    coarse_grid_points: int = 2001
    refine_iterations: int = 60
    boundary_eps: float = 1e-4

    def __post_init__(self):
        if self.order_inverse <= 0.0:
            raise ValueError(f"order_inverse must be positive, got {self.order_inverse}")
        if self.coarse_grid_points < 3:
            raise ValueError(f"coarse_grid_points must be >= 3, got {self.coarse_grid_points}")
        if self.refine_iterations < 0:
            raise ValueError("refine_iterations must be nonnegative")
        if not 0.0 < self.boundary_eps < 0.5:
            raise ValueError(f"boundary_eps must lie in (0, 0.5), got {self.boundary_eps}")
        if not isinstance(self.distance, Distance):
            object.__setattr__(self, "distance", Distance(self.distance))


@dataclass(frozen=True)
class NcResult:
    """Maximized coherence value, its argmax p, and a divergence flag."""

    value: float
    argmax_p: float
    infinite_encountered: bool


def density_from_bloch(state: BlochState) -> HermitianOperator:
    """Density matrix (I + r n.sigma)/2 for the Bloch direction n."""
    rx = state.r * math.sin(state.theta) * math.cos(state.phi_az)
    ry = state.r * math.sin(state.theta) * math.sin(state.phi_az)
    rz = state.r * math.cos(state.theta)
    return HermitianOperator(
        [
            [0.5 * (1.0 + rz), 0.5 * (rx - 1j * ry)],
            [0.5 * (rx + 1j * ry), 0.5 * (1.0 - rz)],
        ]
    )


def jordan_half(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Symmetrised product (AB + BA)/2, Hermitian by construction."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    m = a.matrix @ b.matrix
    return HermitianOperator(0.5 * (m + m.conj().T))


def nc_operator_pair(
    rho: HermitianOperator, sigma: HermitianOperator, alpha: float
) -> tuple[HermitianOperator, HermitianOperator]:
    """The two operators whose distance defines the coherence.

    Left: (|rho sigma + sigma rho|/2)^alpha.
    Right: |rho^alpha sigma^alpha + sigma^alpha rho^alpha|/2.
    Both are PSD; they coincide whenever rho and sigma commute.
    """
    left = jordan_half(rho, sigma).absolute().fractional_power(alpha)
    right = jordan_half(
        rho.fractional_power(alpha), sigma.fractional_power(alpha)
    ).absolute()
    return left, right


def _qubit_entries(rho: HermitianOperator) -> tuple[float, float, float, float]:
    if rho.dim != 2:
        raise ValueError(f"expected a qubit operator, got dimension {rho.dim}")
    tr = rho.trace()
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValueError(f"expected unit trace, got {tr}")
    if float(rho.eigenvalues.min()) < -1e-10:
        raise NotPositiveSemidefiniteError(
            f"not a density operator: eigenvalues {rho.eigenvalues}"
        )
    m = rho.matrix
    return m[0, 0].real, m[0, 1].real, m[0, 1].imag, m[1, 1].real


def nc_distance_at(rho: HermitianOperator, p: float, cfg: NcConfig) -> float:
    """Distance between the operator pair at a single sigma(p); may be +inf."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    r00, ore, oim, r11 = _qubit_entries(rho)
    return _K.nc_distance(r00, ore, oim, r11, p, cfg.order_inverse, cfg.distance.code)


def nc_coherence(rho: HermitianOperator, cfg: NcConfig = NcConfig()) -> NcResult:
    """Maximize the operator distance over the incoherent family.

    The scan covers p in [boundary_eps, 1 - boundary_eps]; p values whose
    relative entropy diverges are excluded from the maximization and
    surfaced through infinite_encountered.
    """
    r00, ore, oim, r11 = _qubit_entries(rho)
    value, argmax_p, inf_seen = _K.nc_maximize(
        r00,
        ore,
        oim,
        r11,
        cfg.order_inverse,
        cfg.distance.code,
        cfg.coarse_grid_points,
        cfg.refine_iterations,
        cfg.boundary_eps,
    )
    if math.isnan(value):
        raise AllGridPointsInfiniteError(
            "every grid point produced an infinite distance"
        )
    return NcResult(value, argmax_p, bool(inf_seen))


def von_neumann_entropy(rho: HermitianOperator) -> float:
    """Entropy in bits, with the 0 log 0 = 0 convention."""
    total = 0.0
    for x in rho.eigenvalues:
        if x > 1e-300:
            total -= x * math.log2(x)
    return total


def rel_ent_coherence(rho: HermitianOperator) -> tuple[float, float]:
    """Conventional coherence: min over p of S(rho || sigma(p)).

    Computed twice, by closed form (entropy of the dephased state minus
    entropy of rho) and by the grid+refine minimizer over the full p
    interval; the two must agree within COHERENCE_AGREEMENT_TOL or the
    call fails.  Returns (value, argmin_p) from the minimizer.
    """
    r00, ore, oim, r11 = _qubit_entries(rho)
    dephased = HermitianOperator(np.diag([r00, r11]))
    closed = von_neumann_entropy(dephased) - von_neumann_entropy(rho)
    value, argmin_p = _K.coherence_minimize(
        r00, ore, oim, r11, _K.OBJ_REL_ENT, 2001, 60
    )
    if abs(value - closed) > COHERENCE_AGREEMENT_TOL:
        raise RuntimeError(
            f"relative-entropy coherence self-check failed: "
            f"closed form {closed!r} vs optimizer {value!r}"
        )
    return value, argmin_p


def trace_dist_coherence(rho: HermitianOperator) -> float:
    """Conventional coherence: min over p of the trace distance to sigma(p)."""
    r00, ore, oim, r11 = _qubit_entries(rho)
    value, _ = _K.coherence_minimize(r00, ore, oim, r11, _K.OBJ_TRACE, 2001, 60)
    return value
