"""Dense complex Hermitian operators with spectral-function support.

Everything in the toolkit flows through this module: density matrices,
their symmetrised products and the operators derived from them via the
matrix absolute value, fractional powers and the base-2 logarithm.  The
eigensolver is self-contained (closed form for 2x2, cyclic Jacobi above
that) so results are reproducible down to the eigenvector phase
convention.

Matrices here are small (qubits and a handful of dimensions beyond); no
attempt is made to scale past dim ~ 16.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Construction / decomposition tolerances.
HERMITICITY_TOL = 1e-12
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
DEGENERACY_TOL = 1e-14

# Eigenvalue handling for spectral functions (see fractional_power / log2
# for how each band is treated).
NEGATIVE_EIG_TOL = -1e-10
POWER_SNAP_TOL = 1e-12

# Relative-entropy conventions.
SUPPORT_TOL = 1e-10
LOG_FLOOR = 1e-300


class HermiticityError(ValueError):
    """Input deviates from its conjugate transpose beyond tolerance."""


class NotPositiveSemidefiniteError(ValueError):
    """An eigenvalue sits below the negative-roundoff tolerance."""


class SpectralDomainError(ValueError):
    """A spectral function was applied outside its eigenvalue domain."""


class EigenConvergenceError(RuntimeError):
    """Jacobi iteration failed to reach the off-diagonal tolerance."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"eigensolver stalled at off-diagonal norm {residual:.3e} "
            f"after {sweeps} sweeps (target {JACOBI_OFF_TOL:.0e})"
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero component is real positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        for val in col:
            if abs(val) > 1e-12:
                out[:, j] = col * (val.conjugate() / abs(val))
                break
    return out


def _eig2(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form decomposition of a 2x2 Hermitian matrix.

    Uses the trace/determinant form; the branch on the sign of the
    diagonal gap keeps the eigenvector formula well conditioned.  A
    (near-)scalar matrix returns the standard basis, which is a valid
    eigenbasis in that case.
    """
    h00 = matrix[0, 0].real
    h11 = matrix[1, 1].real
    off = matrix[0, 1]
    t = 0.5 * (h00 + h11)
    d = 0.5 * (h00 - h11)
    s = math.hypot(d, abs(off))
    values = np.array([t + s, t - s])
    if 2.0 * s < DEGENERACY_TOL:
        return values, np.eye(2, dtype=complex)
    if d >= 0.0:
        v1 = np.array([s + d, off.conjugate()], dtype=complex)
    else:
        v1 = np.array([off, s - d], dtype=complex)
    v1 /= np.linalg.norm(v1)
    v2 = np.array([-v1[1].conjugate(), v1[0].conjugate()], dtype=complex)
    return values, _fix_phases(np.column_stack([v1, v2]))


def _off_norm(matrix: np.ndarray) -> float:
    off = matrix - np.diag(np.diag(matrix))
    return float(np.linalg.norm(off))


def _eig_jacobi(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization for Hermitian matrices above 2x2.

    Each rotation zeroes one off-diagonal pair; sweeps repeat until the
    off-diagonal Frobenius norm drops below JACOBI_OFF_TOL.
    """
    a = matrix.astype(complex).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    # entries this small cannot lift the off-norm above tolerance, and
    # rotating on them risks overflow in the tangent formula
    skip_tol = JACOBI_OFF_TOL / n
    for sweep in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= JACOBI_OFF_TOL:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                z = a[i, j]
                if abs(z) <= skip_tol:
                    continue
                # Absorb the phase so the 2x2 subproblem is real symmetric,
                # then apply the classical Jacobi rotation.
                phase = z / abs(z)
                tau = (a[j, j].real - a[i, i].real) / (2.0 * abs(z))
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                u_ii, u_ij = c, s
                u_ji, u_jj = -s * phase.conjugate(), c * phase.conjugate()
                rows_i = u_ii.conjugate() * a[i, :] + u_ji.conjugate() * a[j, :]
                rows_j = u_ij.conjugate() * a[i, :] + u_jj.conjugate() * a[j, :]
                a[i, :], a[j, :] = rows_i, rows_j
                cols_i = a[:, i] * u_ii + a[:, j] * u_ji
                cols_j = a[:, i] * u_ij + a[:, j] * u_jj
                a[:, i], a[:, j] = cols_i, cols_j
                vcols_i = v[:, i] * u_ii + v[:, j] * u_ji
                vcols_j = v[:, i] * u_ij + v[:, j] * u_jj
                v[:, i], v[:, j] = vcols_i, vcols_j
    else:
        residual = _off_norm(a)
        if not residual <= JACOBI_OFF_TOL:
            raise EigenConvergenceError(residual, JACOBI_MAX_SWEEPS)
    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return values[order], _fix_phases(v[:, order])


class HermitianOperator:
    """Immutable dense Hermitian matrix with an eager spectral decomposition.

    Construction symmetrises the input via (A + A^dagger)/2 and records the
    pre-symmetrisation deviation; inputs further than HERMITICITY_TOL from
    Hermitian are rejected.  Instances never mutate, so they are safe to
    share across threads.
    """

    __slots__ = ("_matrix", "_decomposition", "hermiticity_defect")

    def __init__(self, entries):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("dimension must be at least 1")
        defect = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
        if defect > HERMITICITY_TOL:
            raise HermiticityError(
                f"matrix deviates from Hermitian by {defect:.3e} "
                f"(tolerance {HERMITICITY_TOL:.0e})"
            )
        m = 0.5 * (a + a.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "_matrix", m)
        object.__setattr__(self, "hermiticity_defect", defect)
        dim = m.shape[0]
        if dim == 1:
            decomp = SpectralDecomposition(
                np.array([m[0, 0].real]), np.eye(1, dtype=complex)
            )
        elif dim == 2:
            decomp = SpectralDecomposition(*_eig2(m))
        else:
            decomp = SpectralDecomposition(*_eig_jacobi(m))
        object.__setattr__(self, "_decomposition", decomp)

    def __setattr__(self, name, value):
        raise AttributeError("HermitianOperator is immutable")

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._decomposition.eigenvalues

    @property
    def decomposition(self) -> SpectralDecomposition:
        return self._decomposition

    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim}, eigenvalues={self.eigenvalues})"

    # -- spectral functions -------------------------------------------------

    def spectral_map(self, f) -> "HermitianOperator":
        """Apply a real function to the eigenvalues, V f(lambda) V^dagger."""
        d = self._decomposition
        mapped = np.array([f(x) for x in d.eigenvalues], dtype=float)
        v = d.eigenvectors
        return HermitianOperator((v * mapped) @ v.conj().T)

    def absolute(self) -> "HermitianOperator":
        """Matrix absolute value |H| (eigenvalue map x -> |x|)."""
        return self.spectral_map(abs)

    def fractional_power(self, alpha: float) -> "HermitianOperator":
        """H^alpha for PSD H and alpha > 0.

        Eigenvalues below NEGATIVE_EIG_TOL raise; the band up to
        POWER_SNAP_TOL is treated as exact zero so that roundoff dust
        cannot be amplified by small exponents.
        """
        if alpha <= 0:
            raise ValueError(f"power exponent must be positive, got {alpha}")
        low = float(self.eigenvalues.min())
        if low < NEGATIVE_EIG_TOL:
            raise NotPositiveSemidefiniteError(
                f"eigenvalue {low:.3e} below tolerance {NEGATIVE_EIG_TOL:.0e}"
            )
        return self.spectral_map(
            lambda x: 0.0 if x < POWER_SNAP_TOL else x**alpha
        )

    def log2(self) -> "HermitianOperator":
        """Base-2 matrix logarithm; defined only for strictly positive spectra."""
        low = float(self.eigenvalues.min())
        if low <= 0.0:
            raise SpectralDomainError(
                f"log2 of a singular or indefinite operator (min eigenvalue {low:.3e})"
            )
        return self.spectral_map(math.log2)


def eig_herm(operator: HermitianOperator) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian operator (cached at construction)."""
    return operator.decomposition


def _clipped_psd_eigenvalues(operator: HermitianOperator) -> np.ndarray:
    values = operator.eigenvalues
    low = float(values.min())
    if low < NEGATIVE_EIG_TOL:
        raise NotPositiveSemidefiniteError(
            f"eigenvalue {low:.3e} below tolerance {NEGATIVE_EIG_TOL:.0e}"
        )
    return np.maximum(values, 0.0)


def relative_entropy(a: HermitianOperator, b: HermitianOperator) -> float:
    """tr(A log2 A - A log2 B) for PSD A, B; +inf on support mismatch.

    Neither argument needs unit trace.  The 0 log 0 = 0 convention applies
    to the eigenvalues of A.  Support mismatch is decided by SUPPORT_TOL:
    any eigenvector of A with eigenvalue above it whose squared overlap
    with the numerical null space of B exceeds it makes the result +inf.
    For sub-threshold overlaps the B eigenvalues are floored at LOG_FLOOR
    inside the logarithm, which keeps 0 * log 0 products finite.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    avals = _clipped_psd_eigenvalues(a)
    bvals = _clipped_psd_eigenvalues(b)
    avecs = a.decomposition.eigenvectors
    bvecs = b.decomposition.eigenvectors

    null_mask = bvals <= SUPPORT_TOL
    if null_mask.any():
        null_cols = bvecs[:, null_mask]
        for i, ai in enumerate(avals):
            if ai <= SUPPORT_TOL:
                continue
            overlap = float(np.sum(np.abs(null_cols.conj().T @ avecs[:, i]) ** 2))
            if overlap > SUPPORT_TOL:
                return math.inf

    term_a = float(sum(x * math.log2(x) for x in avals if x > LOG_FLOOR))
    # tr(A log2 B) = sum_j log2(b_j) <w_j|A|w_j>, with <w_j|A|w_j> expanded
    # over the eigenbasis of A.
    overlaps = np.abs(bvecs.conj().T @ avecs) ** 2
    proj = overlaps @ avals
    term_b = float(
        sum(math.log2(max(bj, LOG_FLOOR)) * wj for bj, wj in zip(bvals, proj))
    )
    return term_a - term_b


def trace_distance(a: HermitianOperator, b: HermitianOperator) -> float:
    """Half the trace norm of A - B."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = HermitianOperator(a.matrix - b.matrix)
    return 0.5 * float(np.abs(diff.eigenvalues).sum())
