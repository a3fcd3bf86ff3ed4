"""Success probability of phase estimation with a rotated preparation gate.

The standard algorithm prepares the m auxiliary qubits with Hadamards;
here the preparation rotates |0> by an angle theta instead (theta = pi/2
recovers the Hadamard).  For an eigenphase phi = a/2^m + delta with
|delta| <= 2^-(m+1), the probability of reading the best m-bit outcome a
is evaluated by three independent routes:

* ``success_prob_sum``      -- the 2^m-term sum over basis labels,
* ``success_prob_product``  -- its exact O(m) bitwise factorization,
* ``circuit_oracle``        -- a state-vector walk through the circuit
                               (rotations, phase kickback, inverse QFT).

The three agree to near machine precision; the product form is the
canonical evaluator for sweeps and extremum finding.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

SUM_M_LIMIT = 22
PRODUCT_M_LIMIT = 64
CIRCUIT_M_LIMIT = 12
THETA_PI_GUARD = 1e-6
REFINE_BRACKET_WIDTH = 1e-6


@dataclass(frozen=True)
class QpeaParams:
    """Register size m, rotation angle theta, phase offset delta, outcome a."""

    m: int
    theta: float
    delta: float = 0.0
    a: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if abs(self.delta) > 2.0 ** -(self.m + 1):
            raise ValueError(
                f"|delta| must be <= 2^-(m+1) = {2.0 ** -(self.m + 1)}, got {self.delta}"
            )
        if not 0 <= self.a < 2**self.m:
            raise ValueError(f"a must lie in [0, 2^m), got {self.a}")

    @property
    def phi(self) -> float:
        """Eigenphase of the controlled unitary."""
        return self.a / 2**self.m + self.delta


@dataclass(frozen=True)
class ProbCurve:
    """Sampled success probability and its derivative over a theta grid."""

    thetas: np.ndarray
    probs: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.thetas) <= 0):
            raise ValueError("theta grid must be strictly increasing")
        if np.any(self.probs < -1e-12) or np.any(self.probs > 1.0 + 1e-12):
            raise ValueError("probabilities out of [0, 1] beyond tolerance")


def popcount(y: int) -> int:
    """Number of ones in the binary expansion of y >= 0."""
    if y < 0:
        raise ValueError(f"popcount of a negative integer {y}")
    return int(y).bit_count()


def success_prob_product(q: QpeaParams) -> float:
    """Probability via the bitwise factorization, exact for all theta.

    The sum over labels factorizes over independent bits into
    prod_k |cos(theta/2) + sin(theta/2) e^{2 pi i delta 2^k}|^2 / 2^m,
    which also evaluates cleanly at theta = pi where the tangent in the
    sum form diverges.
    """
    if q.m > PRODUCT_M_LIMIT:
        raise ValueError(f"m = {q.m} exceeds the product-form guard {PRODUCT_M_LIMIT}")
    c = math.cos(0.5 * q.theta)
    s = math.sin(0.5 * q.theta)
    acc = 1.0
    for k in range(q.m):
        z = c + s * cmath.exp(2j * math.pi * q.delta * 2.0**k)
        acc *= z.real * z.real + z.imag * z.imag
    return acc / 2**q.m


def success_prob_sum(q: QpeaParams) -> float:
    """Probability via the direct 2^m-term sum.

    Follows the amplitude sum literally: cos(theta/2)^m / 2^(m/2) times
    sum_y tan(theta/2)^{b(y)} e^{2 pi i delta y}.  Near theta = pi the
    tangent diverges and the call delegates to the product form.
    """
    if q.m > SUM_M_LIMIT:
        raise ValueError(f"m = {q.m} exceeds the sum-form guard {SUM_M_LIMIT}")
    if q.theta > math.pi - THETA_PI_GUARD:
        return success_prob_product(q)
    ys = np.arange(2**q.m, dtype=np.uint64)
    bits = np.bitwise_count(ys).astype(np.float64)
    t = math.tan(0.5 * q.theta)
    total = np.sum(t**bits * np.exp(2j * math.pi * q.delta * ys.astype(np.float64)))
    amp = math.cos(0.5 * q.theta) ** q.m / 2 ** (0.5 * q.m) * total
    return float(abs(amp) ** 2)


def circuit_state(m: int, theta: float, phi: float) -> np.ndarray:
    """Auxiliary-register state after rotations, kickback and inverse QFT.

    The p-qubit eigenstate register is never materialized: for an
    eigenstate input the controlled unitary only multiplies the control
    amplitude for |y> by e^{2 pi i phi y}, which is applied analytically.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m > CIRCUIT_M_LIMIT:
        raise ValueError(f"m = {m} exceeds the circuit guard {CIRCUIT_M_LIMIT}")
    ys = np.arange(2**m, dtype=np.uint64)
    bits = np.bitwise_count(ys).astype(np.float64)
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    amps = c ** (m - bits) * s**bits * np.exp(2j * math.pi * phi * ys.astype(np.float64))
    # inverse QFT: conjugate-kernel transform with 1/sqrt(2^m) normalization
    return np.fft.fft(amps) / 2 ** (0.5 * m)


def circuit_oracle(m: int, theta: float, phi: float, a: int) -> float:
    """Probability of outcome a from the full circuit simulation."""
    if not 0 <= a < 2**m:
        raise ValueError(f"a must lie in [0, 2^m), got {a}")
    amp = circuit_state(m, theta, phi)[a]
    return float(amp.real**2 + amp.imag**2)


def success_prob_derivative(q: QpeaParams, h: float = 1e-4) -> float:
    """Central-difference d p_a / d theta using the product form."""
    if q.theta - h < 0.0 or q.theta + h > math.pi:
        raise ValueError(f"theta +- h must stay inside [0, pi], got theta={q.theta}, h={h}")
    plus = success_prob_product(QpeaParams(q.m, q.theta + h, q.delta, q.a))
    minus = success_prob_product(QpeaParams(q.m, q.theta - h, q.delta, q.a))
    return (plus - minus) / (2.0 * h)


def default_delta(m: int) -> float:
    """Phase-offset schedule used for the sweep figures: 2^-10 / 2^-20 / 2^-30."""
    if not 2 <= m <= 25:
        raise ValueError(f"no default delta for m = {m}; pass delta explicitly")
    if m <= 7:
        return 2.0**-10
    if m <= 17:
        return 2.0**-20
    return 2.0**-30


def _refine_max(f, a: float, c: float, b: float, fc: float) -> tuple[float, float]:
    """Three-point bracket refinement until the bracket closes to width 1e-6."""
    while b - a > REFINE_BRACKET_WIDTH:
        m1 = 0.5 * (a + c)
        m2 = 0.5 * (c + b)
        f1 = f(m1)
        f2 = f(m2)
        if f1 > fc and f1 >= f2:
            b, c, fc = c, m1, f1
        elif f2 > fc:
            a, c, fc = c, m2, f2
        else:
            a, b = m1, m2
    return c, fc


def theta_argmax(m: int, delta: float, grid_points: int = 4001) -> float:
    """Location of the probability maximum over theta in (0, pi)."""
    if grid_points < 3:
        raise ValueError(f"grid_points must be >= 3, got {grid_points}")
    step = math.pi / (grid_points + 1)
    thetas = [step * (k + 1) for k in range(grid_points)]
    probs = [success_prob_product(QpeaParams(m, t, delta)) for t in thetas]
    k = max(range(grid_points), key=probs.__getitem__)
    a = thetas[k - 1] if k > 0 else thetas[0]
    b = thetas[k + 1] if k < grid_points - 1 else thetas[-1]
    f = lambda t: success_prob_product(QpeaParams(m, t, delta))
    c, _ = _refine_max(f, a, thetas[k], b, probs[k])
    return c


def derivative_argmax(m: int, delta: float, grid_points: int = 4001) -> float:
    """Location of the derivative maximum on the rising segment (0, theta*)."""
    hi = theta_argmax(m, delta)
    h = 1e-4
    lo = 2.0 * h
    step = (hi - lo) / (grid_points + 1)
    thetas = [lo + step * (k + 1) for k in range(grid_points)]
    f = lambda t: success_prob_derivative(QpeaParams(m, t, delta), h)
    derivs = [f(t) for t in thetas]
    k = max(range(grid_points), key=derivs.__getitem__)
    a = thetas[k - 1] if k > 0 else thetas[0]
    b = thetas[k + 1] if k < grid_points - 1 else thetas[-1]
    c, _ = _refine_max(f, a, thetas[k], b, derivs[k])
    return c


def prob_curve(
    m: int, delta: float, thetas: np.ndarray, with_derivs: bool = True
) -> ProbCurve:
    """Sample probability (and optionally derivative) on a theta grid."""
    h = 1e-4
    probs = np.array([success_prob_product(QpeaParams(m, t, delta)) for t in thetas])
    if with_derivs:
        derivs = np.array(
            [success_prob_derivative(QpeaParams(m, t, delta), h) for t in thetas]
        )
    else:
        derivs = np.zeros_like(probs)
    return ProbCurve(np.asarray(thetas, dtype=float), probs, derivs)
