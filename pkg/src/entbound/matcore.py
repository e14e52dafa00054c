"""Dense Hermitian linear algebra for 2x2 and 4x4 complex matrices.

Thin validated wrappers over the compiled Jacobi kernels.  Eigenvalue order
and eigenvector phases are canonicalized so every routine is a pure function
of its input bits.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NotHermitian, NotPSD

HERMITICITY_TOL = 1e-10
RANK_TOL = 1e-12


def as_complex_matrix(M: np.ndarray, dims: tuple[int, ...] = (2, 4)) -> np.ndarray:
    """Coerce to a square complex128 array of an allowed dimension."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] not in dims:
        want = " or ".join(f"{d}x{d}" for d in dims)
        raise ValueError(f"expected a {want} matrix, got shape {A.shape}")
    return A


def _require_hermitian(H: np.ndarray) -> None:
    dev = np.max(np.abs(H - H.conj().T))
    scale = max(1.0, float(np.linalg.norm(H)))
    if dev > HERMITICITY_TOL * scale:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")


@dataclass(frozen=True)
class HermEigResult:
    """Eigenvalues ascending with matching unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _canonical_phase(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    W = V.copy()
    for j in range(W.shape[1]):
        k = int(np.argmax(np.abs(W[:, j])))
        a = W[k, j]
        m = abs(a)
        if m > 1e-300:
            W[:, j] *= np.conj(a) / m
    return W


def herm_eig(H: np.ndarray) -> HermEigResult:
    """Full eigensystem of a Hermitian matrix, ascending order."""
    A = as_complex_matrix(H)
    _require_hermitian(A)
    A = 0.5 * (A + A.conj().T)
    w, V = _kernels.jacobi_eigh(A)
    order = np.argsort(w, kind="stable")
    return HermEigResult(w[order], _canonical_phase(V[:, order]))


def singular_values(M: np.ndarray) -> np.ndarray:
    """Singular values of a square complex matrix, descending."""
    A = as_complex_matrix(M)
    return _kernels.jacobi_sv(A)


def psd_factor(H: np.ndarray) -> np.ndarray:
    """Factor a PSD matrix as H = X X^dagger with X = V sqrt(Lambda).

    Eigenvalues are taken in descending order and columns past the numerical
    rank (relative tolerance 1e-12) are exactly zero.
    """
    res = herm_eig(H)
    w = res.eigenvalues[::-1].copy()
    V = res.eigenvectors[:, ::-1].copy()
    scale = max(float(w[0]), 0.0)
    if w[-1] < -HERMITICITY_TOL * max(1.0, scale):
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e} is negative")
    X = np.zeros_like(V)
    for j in range(w.shape[0]):
        if w[j] > RANK_TOL * max(scale, 1e-300):
            X[:, j] = V[:, j] * np.sqrt(w[j])
    return X


def herm_func(H: np.ndarray, f) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix by its spectrum."""
    res = herm_eig(H)
    vals = np.empty(res.eigenvalues.shape[0])
    with np.errstate(all="ignore"):
        for i, x in enumerate(res.eigenvalues):
            try:
                y = float(f(x))
            except (ValueError, ZeroDivisionError, FloatingPointError) as exc:
                raise DomainError(f"function undefined at eigenvalue {x:.6e}") from exc
            if not np.isfinite(y):
                raise DomainError(f"function not finite at eigenvalue {x:.6e}")
            vals[i] = y
    V = res.eigenvectors
    return (V * vals) @ V.conj().T
