import math

import numpy as np
import pytest
import scipy.linalg

from nccoh.hermitian import (
    HermiticityError,
    HermitianOperator,
    NotPositiveSemidefiniteError,
    SpectralDomainError,
    eig_herm,
    relative_entropy,
    trace_distance,
)

from oracles import random_hermitian, random_psd, random_unitary


def test_construction_symmetrizes_and_records_defect():
    a = np.array([[1.0, 0.5 + 1e-13j], [0.5, 2.0]])
    op = HermitianOperator(a)
    assert op.hermiticity_defect <= 1e-12
    assert np.abs(op.matrix - op.matrix.conj().T).max() == 0.0


def test_construction_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        HermitianOperator([[0.0, 1.0], [0.0, 0.0]])


def test_construction_rejects_non_square():
    with pytest.raises(ValueError):
        HermitianOperator(np.zeros((2, 3)))


def test_operator_is_immutable():
    op = HermitianOperator(np.eye(2))
    with pytest.raises(AttributeError):
        op.matrix = np.zeros((2, 2))
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 5.0


def test_eig_diagonal_is_trivial():
    op = HermitianOperator(np.diag([0.7, 0.3]))
    d = eig_herm(op)
    assert np.allclose(d.eigenvalues, [0.7, 0.3], atol=1e-15)
    assert np.allclose(d.eigenvectors, np.eye(2), atol=1e-15)


def test_eig_pauli_x():
    op = HermitianOperator([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(op.eigenvalues, [1.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 4, 6, 9, 16])
def test_eig_reconstruction_and_orthonormality(dim):
    rng = np.random.default_rng(101 + dim)
    for _ in range(10):
        m = random_hermitian(rng, dim)
        op = HermitianOperator(m)
        d = op.decomposition
        assert np.abs(d.reconstruct() - op.matrix).max() < 1e-10
        gram = d.eigenvectors.conj().T @ d.eigenvectors
        assert np.abs(gram - np.eye(dim)).max() < 1e-10
        assert np.all(np.diff(d.eigenvalues) <= 1e-14)


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
def test_eig_matches_numpy(dim):
    rng = np.random.default_rng(7 + dim)
    for _ in range(20):
        m = random_hermitian(rng, dim)
        ours = HermitianOperator(m).eigenvalues
        ref = np.linalg.eigh(m)[0][::-1]
        assert np.abs(ours - ref).max() < 1e-10


def test_eig_sum_is_trace_and_product_is_det():
    rng = np.random.default_rng(11)
    for dim in (2, 4, 7):
        m = random_hermitian(rng, dim)
        op = HermitianOperator(m)
        assert abs(op.eigenvalues.sum() - np.trace(m).real) < 1e-10
    m2 = random_hermitian(rng, 2)
    op2 = HermitianOperator(m2)
    assert abs(np.prod(op2.eigenvalues) - np.linalg.det(m2).real) < 1e-10


def test_eigenvector_phase_convention():
    rng = np.random.default_rng(13)
    for dim in (2, 5):
        op = HermitianOperator(random_hermitian(rng, dim))
        for j in range(dim):
            col = op.decomposition.eigenvectors[:, j]
            first = next(x for x in col if abs(x) > 1e-12)
            assert abs(first.imag) < 1e-12 and first.real > 0


def test_degenerate_2x2_returns_standard_basis():
    op = HermitianOperator(0.5 * np.eye(2))
    assert np.allclose(op.decomposition.eigenvectors, np.eye(2))


def test_jacobi_reports_nonconvergence_with_residual():
    # the absolute off-norm target is unreachable for large-norm input
    from nccoh.hermitian import EigenConvergenceError

    rng = np.random.default_rng(43)
    big = 1e6 * random_hermitian(rng, 4)
    with pytest.raises(EigenConvergenceError) as err:
        HermitianOperator(big)
    assert err.value.residual > 0


def test_spectral_map_generic_callable():
    rng = np.random.default_rng(47)
    op = HermitianOperator(random_psd(rng, 3))
    squared = op.spectral_map(lambda x: x * x)
    assert np.abs(squared.matrix - op.matrix @ op.matrix).max() < 1e-10


def test_abs_of_pauli_spectrum():
    op = HermitianOperator(np.diag([1.0, -1.0]))
    assert np.allclose(op.absolute().matrix, np.eye(2), atol=1e-15)


def test_sqrt_of_projector_is_projector():
    v = np.array([1.0, 1j]) / math.sqrt(2)
    proj = HermitianOperator(np.outer(v, v.conj()))
    root = proj.fractional_power(0.5)
    assert np.abs(root.matrix - proj.matrix).max() < 1e-12


def test_cube_root_of_diagonal():
    op = HermitianOperator(np.diag([8.0, 1.0]))
    assert np.allclose(op.fractional_power(1 / 3).matrix, np.diag([2.0, 1.0]), atol=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0, 1 / 3])
def test_power_round_trip(alpha):
    rng = np.random.default_rng(17)
    for dim in (2, 3, 5):
        for _ in range(7):
            m = random_psd(rng, dim)
            op = HermitianOperator(m)
            back = op.fractional_power(alpha).fractional_power(1.0 / alpha)
            assert np.abs(back.matrix - op.matrix).max() < 1e-9


def test_abs_is_psd():
    rng = np.random.default_rng(19)
    for _ in range(20):
        op = HermitianOperator(random_hermitian(rng, 4))
        assert op.absolute().eigenvalues.min() >= -1e-12


def test_power_rejects_indefinite_and_bad_exponent():
    op = HermitianOperator(np.diag([1.0, -0.5]))
    with pytest.raises(NotPositiveSemidefiniteError):
        op.fractional_power(0.5)
    with pytest.raises(ValueError):
        HermitianOperator(np.eye(2)).fractional_power(0.0)


def test_power_clips_negative_dust():
    op = HermitianOperator(np.diag([1.0, -5e-11]))
    root = op.fractional_power(0.5)
    assert np.allclose(root.matrix, np.diag([1.0, 0.0]), atol=1e-12)


def test_log2_rejects_singular():
    with pytest.raises(SpectralDomainError):
        HermitianOperator(np.diag([1.0, 0.0])).log2()


def test_log2_of_diagonal():
    op = HermitianOperator(np.diag([4.0, 0.5]))
    assert np.allclose(op.log2().matrix, np.diag([2.0, -1.0]), atol=1e-12)


def test_relative_entropy_identical_is_zero():
    rng = np.random.default_rng(23)
    for _ in range(5):
        op = HermitianOperator(random_psd(rng, 3))
        assert abs(relative_entropy(op, op)) < 1e-10


def test_relative_entropy_basic_diagonal():
    a = HermitianOperator(np.diag([1.0, 0.0]))
    b = HermitianOperator(np.diag([0.5, 0.5]))
    assert abs(relative_entropy(a, b) - 1.0) < 1e-12


def test_relative_entropy_support_mismatch_is_infinite():
    a = HermitianOperator(np.diag([1.0, 0.0]))
    b = HermitianOperator(np.diag([0.0, 1.0]))
    assert relative_entropy(a, b) == math.inf


def test_relative_entropy_unitary_invariance():
    rng = np.random.default_rng(29)
    for _ in range(20):
        a = random_psd(rng, 3)
        b = random_psd(rng, 3) + 0.1 * np.eye(3)
        u = random_unitary(rng, 3)
        s0 = relative_entropy(HermitianOperator(a), HermitianOperator(b))
        s1 = relative_entropy(
            HermitianOperator(u @ a @ u.conj().T),
            HermitianOperator(u @ b @ u.conj().T),
        )
        assert abs(s0 - s1) < 1e-9


def test_relative_entropy_matches_scipy_logm():
    rng = np.random.default_rng(31)
    for dim in (2, 3, 4):
        for _ in range(10):
            a = random_psd(rng, dim) + 0.05 * np.eye(dim)
            b = random_psd(rng, dim) + 0.05 * np.eye(dim)
            expected = float(
                np.real(np.trace(a @ (scipy.linalg.logm(a) - scipy.linalg.logm(b))))
                / math.log(2)
            )
            got = relative_entropy(HermitianOperator(a), HermitianOperator(b))
            assert abs(got - expected) < 1e-8


def test_relative_entropy_rejects_indefinite():
    good = HermitianOperator(np.eye(2))
    bad = HermitianOperator(np.diag([1.0, -0.2]))
    with pytest.raises(NotPositiveSemidefiniteError):
        relative_entropy(bad, good)
    with pytest.raises(NotPositiveSemidefiniteError):
        relative_entropy(good, bad)


def test_relative_entropy_dim_mismatch():
    with pytest.raises(ValueError):
        relative_entropy(HermitianOperator(np.eye(2)), HermitianOperator(np.eye(3)))


def test_trace_distance_examples():
    a = HermitianOperator(np.diag([1.0, 0.0]))
    b = HermitianOperator(np.diag([0.0, 1.0]))
    assert trace_distance(a, a) == 0.0
    assert abs(trace_distance(a, b) - 1.0) < 1e-14
    c = HermitianOperator(np.diag([0.75, 0.25]))
    d = HermitianOperator(np.diag([0.5, 0.5]))
    assert abs(trace_distance(c, d) - 0.25) < 1e-14


def test_trace_distance_symmetry_and_triangle():
    rng = np.random.default_rng(37)
    for _ in range(20):
        a, b, c = (HermitianOperator(random_hermitian(rng, 3)) for _ in range(3))
        assert abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-10
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10


def test_trace_distance_dim_mismatch():
    with pytest.raises(ValueError):
        trace_distance(HermitianOperator(np.eye(2)), HermitianOperator(np.eye(4)))
