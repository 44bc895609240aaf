"""Dense complex linear algebra for small Hilbert spaces (dim <= ~16).

Everything operates on plain complex ndarrays.  Hermitian inputs are
validated, never silently symmetrized: rejecting a matrix that fails the
Hermiticity tolerance surfaces construction bugs instead of hiding them.
"""

import numpy as np

from .errors import DomainError

HERMITICITY_ATOL = 1e-12
STATE_NORM_ATOL = 1e-12

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def require_hermitian(a, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Validate that `a` is a finite square matrix with ||a - a†||_max <= atol."""
    a = _as_matrix(a)
    dev = np.abs(a - a.conj().T).max()
    if dev > atol:
        raise DomainError(f"matrix is not Hermitian: max |a - a†| = {dev:.3e} > {atol:.1e}")
    return a


def require_state(psi, atol: float = STATE_NORM_ATOL) -> np.ndarray:
    """Validate that `psi` is a finite complex vector with unit Euclidean norm."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DomainError(f"expected a vector, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise DomainError("state has non-finite entries")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > atol:
        raise DomainError(f"state is not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
    return psi


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two square matrices; (a⊗b)(x⊗y) = (ax)⊗(by)."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def eig_hermitian(h, atol: float = HERMITICITY_ATOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with real eigenvalues in ascending
    order and eigenvector columns forming a unitary matrix.  Within a
    degenerate cluster the eigenvector basis is arbitrary; every consumer in
    this package is basis-independent, so no canonicalization is applied.
    Raises np.linalg.LinAlgError if the QR iteration fails to converge.
    """
    h = require_hermitian(h, atol=atol)
    return np.linalg.eigh(h)


def seminorm(h, atol: float = HERMITICITY_ATOL) -> float:
    """Spectral width max eigenvalue - min eigenvalue of a Hermitian matrix."""
    w, _ = eig_hermitian(h, atol=atol)
    return float(w[-1] - w[0])


def expm_hermitian(h, t: float, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Unitary exp(-i h t) for Hermitian h, via eigendecomposition."""
    w, v = eig_hermitian(h, atol=atol)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def expectation(op, psi, atol: float = HERMITICITY_ATOL) -> float:
    """<psi|op|psi> for Hermitian op; the imaginary residue is discarded."""
    op = require_hermitian(op, atol=atol)
    psi = require_state(psi)
    if op.shape[0] != psi.shape[0]:
        raise DomainError(f"dimension mismatch: op {op.shape[0]}, state {psi.shape[0]}")
    return float(np.vdot(psi, op @ psi).real)


def variance(op, psi, atol: float = HERMITICITY_ATOL) -> float:
    """Var[op] = <op²> - <op>² over a pure state (>= 0 up to rounding)."""
    op = require_hermitian(op, atol=atol)
    psi = require_state(psi)
    if op.shape[0] != psi.shape[0]:
        raise DomainError(f"dimension mismatch: op {op.shape[0]}, state {psi.shape[0]}")
    phi = op @ psi
    mean = np.vdot(psi, phi).real
    return float(np.vdot(phi, phi).real - mean**2)


def covariance(a, b, psi, atol: float = HERMITICITY_ATOL) -> float:
    """Symmetrized covariance ½<AB+BA> - <A><B> over a pure state."""
    a = require_hermitian(a, atol=atol)
    b = require_hermitian(b, atol=atol)
    psi = require_state(psi)
    if a.shape != b.shape or a.shape[0] != psi.shape[0]:
        raise DomainError("dimension mismatch between operators and state")
    apsi = a @ psi
    bpsi = b @ psi
    sym = np.vdot(apsi, bpsi).real
    return float(sym - np.vdot(psi, apsi).real * np.vdot(psi, bpsi).real)
