"""Dense complex matrix utilities: unitarity, Haar sampling, eigenphases, spectral distance."""

import numpy as np
import scipy.linalg

from .errors import ContractError, DimensionError

UNITARY_TOL = 1e-10


def as_matrix(M, name="matrix"):
    """Return ``M`` as a 2-D complex128 array, rejecting empty or non-finite input."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError(f"{name} contains NaN or Inf entries")
    return A


def as_square(M, name="matrix"):
    A = as_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def unitarity_defect(M):
    """``||M* M - I||_op``."""
    A = as_square(M)
    return float(np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0]), 2))


def is_unitary(M, tol=1e-12):
    return unitarity_defect(M) <= tol


def require_unitary(M, tol=UNITARY_TOL, name="U"):
    A = as_square(M, name)
    defect = unitarity_defect(A)
    if defect > tol:
        raise ContractError(f"{name} is not unitary: defect {defect:.3e} > {tol:.1e}")
    return A


def haar_random_unitary(m, seed):
    """Draw an m x m unitary from the Haar measure.

    QR of a complex Ginibre matrix, with each column of Q rescaled so that the
    diagonal of R is real positive; without that fix the law of Q is not Haar.

    Parameters
    ----------
    m : int
        Dimension, at least 1.
    seed : int or numpy.random.Generator
        Anything accepted by :func:`numpy.random.default_rng`.
    """
    if m < 1:
        raise DimensionError(f"unitary dimension must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def _wrap_phase(theta):
    # map into (-pi, pi]
    out = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(out <= -np.pi, np.pi, out)


def wrap_phase(theta):
    """Reduce angles to the half-open interval (-pi, pi]."""
    return _wrap_phase(theta)


def unitary_eigenphases(U, return_vectors=False):
    """Eigenphases of a unitary, sorted ascending in (-pi, pi].

    Uses the complex Schur form, which is diagonal for normal matrices, so the
    Schur vectors double as an orthonormal eigenbasis. Ties keep the original
    Schur order (stable sort).
    """
    A = require_unitary(U)
    T, Z = scipy.linalg.schur(A, output="complex")
    phases = _wrap_phase(np.angle(np.diagonal(T)))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    if return_vectors:
        return phases, Z[:, order]
    return phases


def operator_distance(A, B):
    """Spectral norm of ``A - B`` (largest singular value)."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B, 2))


def unitary_operator_distance(A, B):
    """``||A - B||_op`` for unitaries, read off the eigenvalues of ``A B^-1``.

    Equals ``max_i |lambda_i - 1|``; :func:`operator_distance` is the SVD
    reference it is checked against.
    """
    A = require_unitary(A, name="A")
    B = require_unitary(B, name="B")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    phases = unitary_eigenphases(A @ B.conj().T)
    return float(np.max(2.0 * np.abs(np.sin(phases / 2.0))))
