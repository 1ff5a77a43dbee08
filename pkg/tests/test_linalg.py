import warnings

import numpy as np
import pytest

from quasigns import linalg
from quasigns.errors import DomainError, InvalidParameterError


def test_schatten_norms_of_diagonal():
    D = np.diag([3.0, -4.0])
    assert linalg.schatten_norm(D, 1) == pytest.approx(7.0)
    assert linalg.schatten_norm(D, 2) == pytest.approx(5.0)
    assert linalg.schatten_norm(D, np.inf) == pytest.approx(4.0)
    assert linalg.schatten_norm(D, 3) == pytest.approx((27 + 64) ** (1 / 3))


def test_schatten_norm_against_eigenvalues_of_gram(rng):
    # singular values from eigh(A* A), independent of the SVD path
    A = linalg.random_complex(rng, (5, 5))
    s = np.sqrt(np.clip(np.linalg.eigvalsh(A.conj().T @ A), 0, None))
    for p in (1.0, 1.5, 2.0, 4.0):
        assert linalg.schatten_norm(A, p) == pytest.approx(np.sum(s**p) ** (1 / p), rel=1e-12)
    assert linalg.op_norm(A) == pytest.approx(s.max(), rel=1e-12)


def test_schatten_rejects_small_exponent():
    with pytest.raises(InvalidParameterError):
        linalg.schatten_norm(np.eye(2), 0.5)


def test_conjugate_exponent():
    assert linalg.conjugate_exponent(2) == 2
    assert linalg.conjugate_exponent(1) == np.inf
    assert linalg.conjugate_exponent(np.inf) == 1
    assert linalg.conjugate_exponent(4) == pytest.approx(4 / 3)


def test_is_psd():
    assert linalg.is_psd(np.diag([1.0, 0.0]))
    assert not linalg.is_psd(np.diag([1.0, -1e-6]))
    assert not linalg.is_psd(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(InvalidParameterError):
        linalg.is_psd(np.eye(2), tol=-1)


def test_mat_fun_sqrt_squares_back(rng):
    H = linalg.random_psd(rng, 4)
    R = linalg.psd_sqrt(H)
    np.testing.assert_allclose(R @ R, H, atol=1e-10)
    assert linalg.is_hermitian(R)


def test_mat_fun_domain():
    with pytest.raises(DomainError):
        linalg.mat_fun(np.diag([1.0, -1.0]), np.sqrt)


def test_mat_fun_diagonal():
    out = linalg.mat_fun(np.diag([0.9, 0.5, 0.0]), lambda t: t + 2)
    np.testing.assert_allclose(out, np.diag([2.9, 2.5, 2.0]))


def test_spectral_cut_open_interval():
    W = np.diag([1.0, 0.4, 0.05])
    np.testing.assert_allclose(linalg.spectral_projection(W, 0.3), np.diag([1, 1, 0]))
    cut = linalg.spectral_cut(W, 0.4)
    assert cut.rank == 1
    assert cut.ties == (0.4,)
    assert cut.warning is not None


def test_spectral_projection_warns_on_tie():
    with pytest.warns(linalg.SpectralTieWarning):
        P = linalg.spectral_projection(np.diag([1.0, 0.5]), 0.5)
    np.testing.assert_allclose(P, np.diag([1, 0]))


def test_spectral_projection_no_warning_off_tie():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        linalg.spectral_projection(np.diag([1.0, 0.5]), 0.7)


def test_spectral_projection_of_projection():
    Q = np.diag([1.0, 1.0, 0.0])
    np.testing.assert_allclose(linalg.spectral_projection(Q, 0.5), Q)


def test_diagonal_projection_nested():
    P2, P3 = linalg.diagonal_projection(4, 2), linalg.diagonal_projection(4, 3)
    np.testing.assert_array_equal(P2 @ P3, P2)


def test_trapezoid_weights():
    x = np.linspace(0, 1, 11)
    w = linalg.trapezoid_weights(x)
    assert w @ x == pytest.approx(0.5)
    assert w.sum() == pytest.approx(1.0)


def test_as_matrix_rejects_nan():
    with pytest.raises(InvalidParameterError):
        linalg.as_matrix(np.array([[np.nan]]))
