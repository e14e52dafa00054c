"""Entanglement measures for two-qubit states.

Negativity comes from the spectrum of the partial transpose, concurrence from
the singular values of a Gram-factor bilinear form (two independent factor
routes are provided), and entanglement of formation from concurrence through
the binary-entropy formula.  All entropic quantities are in bits.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .matcore import as_complex_matrix, herm_eig, psd_factor, singular_values
from .states import DensityMatrix, PureState

#: Antisymmetric spin-flip form: sigma_y (x) sigma_y in the product basis.
SPIN_FLIP = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose the second tensor factor: ((i,j),(k,l)) -> ((i,l),(k,j))."""
    A = as_complex_matrix(rho, dims=(4,))
    return A.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4).copy()


def negativity(rho: DensityMatrix) -> float:
    """Twice the magnitude of the negative partial-transpose eigenvalue.

    A two-qubit partial transpose has at most one negative eigenvalue, so
    this equals the trace-norm form of the measure.  Zero for separable
    states.
    """
    w = herm_eig(partial_transpose(rho)).eigenvalues
    return float(2.0 * max(0.0, -w[0]))


def _factor_concurrence(X: np.ndarray) -> float:
    s = singular_values(X.T @ SPIN_FLIP @ X)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def concurrence(rho: DensityMatrix) -> float:
    """Concurrence via the spectral Gram factor of the state.

    With rho = X X^dagger, the singular values s1 >= ... >= s4 of
    X^T (sigma_y (x) sigma_y) X give C = max(0, s1 - s2 - s3 - s4); they are
    independent of which Gram factor is used.
    """
    return _factor_concurrence(psd_factor(rho))


def _pivoted_cholesky(H: np.ndarray) -> np.ndarray:
    """Permuted lower-triangular Y with H = Y Y^dagger, H PSD (any rank)."""
    A = np.asarray(H, dtype=np.complex128).copy()
    n = A.shape[0]
    L = np.zeros((n, n), dtype=np.complex128)
    perm = np.arange(n)
    scale = max(float(np.max(np.diagonal(A).real)), 0.0)
    for k in range(n):
        d = np.diagonal(A).real.copy()
        d[:k] = -np.inf
        j = int(np.argmax(d))
        if d[j] <= 1e-14 * max(scale, 1e-300):
            break
        if j != k:
            A[[k, j], :] = A[[j, k], :]
            A[:, [k, j]] = A[:, [j, k]]
            L[[k, j], :k] = L[[j, k], :k]
            perm[[k, j]] = perm[[j, k]]
        piv = np.sqrt(d[j])
        L[k, k] = piv
        if k + 1 < n:
            col = A[k + 1 :, k] / piv
            L[k + 1 :, k] = col
            A[k + 1 :, k + 1 :] -= np.outer(col, col.conj())
    Y = np.zeros_like(L)
    Y[perm, :] = L
    return Y


def concurrence_cholesky(rho: DensityMatrix) -> float:
    """Concurrence via a pivoted Cholesky factor instead of the spectral one.

    Exercises the factor-invariance of the construction; agrees with
    :func:`concurrence` to within numerical tolerance on any valid state.
    """
    A = as_complex_matrix(rho, dims=(4,))
    return _factor_concurrence(_pivoted_cholesky(A))


def concurrence_pure(psi: PureState) -> float:
    """Concurrence 2|a d - b c| of a normalized pure state (a, b, c, d)."""
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape[0] != 4:
        raise ValueError(f"expected a 4-component state vector, got {v.shape[0]}")
    return float(2.0 * abs(v[0] * v[3] - v[1] * v[2]))


def concurrence_bell_diagonal(spec) -> float:
    """Concurrence max(0, 2 lambda_1 - 1) of a Bell-diagonal state."""
    return float(max(0.0, 2.0 * spec.lambdas[0] - 1.0))


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    x = float(x)
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise OutOfRange(f"binary entropy argument must be in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    out = 0.0
    if x > 0.0:
        out -= x * np.log2(x)
    if x < 1.0:
        out -= (1.0 - x) * np.log2(1.0 - x)
    return float(out)


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation as a function of concurrence, in bits."""
    c = float(c)
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise OutOfRange(f"concurrence must be in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c))))


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state, in bits."""
    return eof_from_concurrence(concurrence(rho))


@dataclass(frozen=True)
class MeasureReport:
    """Bundle of measure values for one state; rel_entropy is optional."""

    negativity: float
    concurrence: float
    eof: float
    rel_entropy: float | None = None
