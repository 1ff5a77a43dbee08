"""Dense complex linear algebra: Schatten norms, positivity, functional calculus
and spectral projections.

Everything here is deterministic (LAPACK ``eigh``/``svd``) so that reports built
on top of it are reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError

DEFAULT_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TIE_TOL = 1e-12


class SpectralTieWarning(UserWarning):
    """An eigenvalue sits on the spectral cut and was excluded."""


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidParameterError(f"expected a non-empty 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidParameterError("matrix has non-finite entries")
    return A


def adjoint(M) -> np.ndarray:
    return np.conj(np.asarray(M)).T


def hermitian_part(M) -> np.ndarray:
    M = np.asarray(M)
    return (M + adjoint(M)) / 2


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return bool(np.max(np.abs(M - adjoint(M)), initial=0.0) <= tol)


def singular_values(M) -> np.ndarray:
    return np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)


def schatten_norm(M, p: float = 2.0) -> float:
    """l_p norm of the singular values; ``p=np.inf`` gives the operator norm."""
    if not p >= 1:
        raise InvalidParameterError(f"Schatten exponent must be >= 1, got {p}")
    s = singular_values(M)
    if np.isinf(p):
        return float(s.max(initial=0.0))
    if p == 2:
        return float(np.linalg.norm(np.asarray(M)))
    return float(np.sum(s**p) ** (1.0 / p))


def op_norm(M) -> float:
    return schatten_norm(M, np.inf)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def min_eigenvalue(H) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(H))[0])


def is_psd(H, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``H`` is Hermitian (to ``tol``) with smallest eigenvalue >= -tol."""
    if tol < 0:
        raise InvalidParameterError("tol must be >= 0")
    H = np.asarray(H)
    if not is_hermitian(H, max(tol, HERMITIAN_TOL)):
        return False
    return min_eigenvalue(H) >= -tol


def eigh(H):
    """Eigendecomposition of the Hermitian part, eigenvalues ascending."""
    return np.linalg.eigh(hermitian_part(np.asarray(H, dtype=complex)))


def mat_fun(H, f, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply the scalar function ``f`` to a PSD matrix through its eigenvalues.

    ``f`` is called once with the (clipped, nonnegative) eigenvalue vector and
    must be vectorised.
    """
    H = as_matrix(H)
    if not is_psd(H, tol):
        raise DomainError("mat_fun requires a PSD argument")
    lam, Q = eigh(H)
    lam = np.clip(lam, 0.0, None)
    vals = np.asarray(f(lam), dtype=complex)
    if vals.shape != lam.shape:
        vals = np.broadcast_to(vals, lam.shape)
    out = (Q * vals) @ adjoint(Q)
    if np.all(np.abs(vals.imag) == 0):
        out = hermitian_part(out)
    return out


def psd_sqrt(H, tol: float = DEFAULT_TOL) -> np.ndarray:
    return mat_fun(H, np.sqrt, tol)


@dataclass(frozen=True)
class SpectralCut:
    projection: np.ndarray
    rank: int
    ties: tuple[float, ...]

    @property
    def warning(self) -> str | None:
        if not self.ties:
            return None
        return f"{len(self.ties)} eigenvalue(s) within {TIE_TOL:g} of the cut were excluded"


def spectral_cut(H, s: float, tie_tol: float = TIE_TOL) -> SpectralCut:
    """Projection onto eigenvectors with eigenvalue strictly above ``s``.

    Eigenvalues within ``tie_tol`` of ``s`` count as ties and are excluded,
    i.e. the cut is the open interval (s, inf).
    """
    lam, Q = eigh(as_matrix(H))
    ties = tuple(float(x) for x in lam[np.abs(lam - s) <= tie_tol])
    keep = (lam > s) & (np.abs(lam - s) > tie_tol)
    Qk = Q[:, keep]
    P = Qk @ adjoint(Qk)
    return SpectralCut(hermitian_part(P), int(keep.sum()), ties)


def spectral_projection(H, s: float, tie_tol: float = TIE_TOL) -> np.ndarray:
    cut = spectral_cut(H, s, tie_tol)
    if cut.ties:
        warnings.warn(cut.warning, SpectralTieWarning, stacklevel=2)
    return cut.projection


def diagonal_projection(n: int, m: int) -> np.ndarray:
    """Orthogonal projection onto the first ``m`` standard basis vectors of C^n."""
    P = np.zeros((n, n), dtype=complex)
    P[np.arange(m), np.arange(m)] = 1.0
    return P


def random_complex(rng: np.random.Generator, shape, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    A = random_complex(rng, (n, rank or n))
    return hermitian_part(A @ adjoint(A))


def trapezoid_weights(x) -> np.ndarray:
    """Weights ``w`` with ``w @ f(x)`` equal to the trapezoidal integral."""
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    if x.size < 2:
        return w
    h = np.diff(x)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w
