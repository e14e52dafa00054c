"""Construction, validation, sampling, and serialization of two-qubit states.

A density matrix is represented as a plain 4x4 complex128 ndarray that has
passed :func:`make_density`.  Basis order is the computational product basis
|00>, |01>, |10>, |11>; the first tensor factor is subsystem 0.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidSpec,
    NotPSD,
    NotUnitTrace,
    OutOfRange,
)
from .matcore import as_complex_matrix, herm_eig

DensityMatrix = np.ndarray
PureState = np.ndarray

VALIDATION_TOL = 1e-10

#: Columns are the four Bell vectors in the order
#: (|00>+|11>)/sqrt2, (|00>-|11>)/sqrt2, (|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2.
BELL_BASIS = np.array(
    [
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, -1],
        [1, -1, 0, 0],
    ],
    dtype=np.complex128,
) / np.sqrt(2.0)


def make_density(M: np.ndarray) -> DensityMatrix:
    """Validate a raw matrix as a two-qubit density matrix.

    Checks shape, hermiticity, unit trace, and positive semidefiniteness at
    tolerance 1e-10; error messages carry the measured deviation.  The
    returned array is Hermitian-symmetrized but otherwise unchanged.
    """
    A = as_complex_matrix(M, dims=(4,))
    res = herm_eig(A)  # raises NotHermitian with the deviation magnitude
    tr_dev = abs(float(np.trace(A).real) - 1.0) + abs(float(np.trace(A).imag))
    if tr_dev > VALIDATION_TOL:
        raise NotUnitTrace(f"trace deviates from 1 by {tr_dev:.3e}")
    lmin = float(res.eigenvalues[0])
    if lmin < -VALIDATION_TOL:
        raise NotPSD(f"smallest eigenvalue {lmin:.3e} is negative")
    return 0.5 * (A + A.conj().T)


def pure_density(psi: np.ndarray) -> DensityMatrix:
    """Projector onto a normalized 4-component pure state."""
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape[0] != 4:
        raise ValueError(f"expected a 4-component state vector, got {v.shape[0]}")
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > VALIDATION_TOL:
        raise NotUnitTrace(f"state vector norm deviates from 1 by {abs(n - 1.0):.3e}")
    return np.outer(v, v.conj())


def bell_state(k: int) -> PureState:
    """The k-th Bell vector, k in 0..3, in the order of BELL_BASIS columns."""
    if not 0 <= int(k) <= 3:
        raise IndexOutOfRange(f"Bell state index must be in 0..3, got {k}")
    return BELL_BASIS[:, int(k)].copy()


@dataclass(frozen=True)
class BellDiagonalSpec:
    """Mixing weights over the four Bell projectors, descending order."""

    lambdas: tuple[float, float, float, float]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 4:
            raise InvalidSpec(f"need 4 weights, got {len(lam)}")
        if any(x < -1e-12 for x in lam):
            raise InvalidSpec(f"negative weight {min(lam):.3e}")
        if abs(sum(lam) - 1.0) > 1e-12:
            raise InvalidSpec(f"weights sum to {sum(lam):.15g}, expected 1")
        if any(lam[i] < lam[i + 1] - 1e-12 for i in range(3)):
            raise InvalidSpec(f"weights not in descending order: {lam}")
        object.__setattr__(self, "lambdas", lam)


def bell_diagonal(spec: BellDiagonalSpec) -> DensityMatrix:
    """Mixture of Bell projectors with the given descending weights."""
    lam = np.clip(np.asarray(spec.lambdas, dtype=np.float64), 0.0, None)
    rho = (BELL_BASIS * lam) @ BELL_BASIS.conj().T
    return make_density(rho)


def werner(p: float) -> DensityMatrix:
    """Mixture p |Phi+><Phi+| + (1-p) I/4 for p in [0, 1]."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"mixing parameter must be in [0, 1], got {p}")
    phi = bell_state(0)
    return make_density(p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(4) / 4.0)


def mems_rank2(c: float) -> DensityMatrix:
    """Rank-2 state with concurrence c sitting on the lower negativity edge."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise OutOfRange(f"concurrence parameter must be in [0, 1], got {c}")
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = c / 2.0
    rho[1, 1] = 1.0 - c
    return make_density(rho)


@dataclass(frozen=True)
class ExtremalFamilySpec:
    """Parameters (lam1..lam4, a, b) of the boundary-family construction.

    lam1 >= lam2 >= 0 and lam3 >= |lam4| (lam4 may be negative), the four
    summing to 1; (a, b) is a unit vector in C^2.
    """

    lam1: float
    lam2: float
    lam3: float
    lam4: float
    a: complex
    b: complex

    def __post_init__(self):
        l1, l2, l3, l4 = (float(self.lam1), float(self.lam2),
                          float(self.lam3), float(self.lam4))
        if l2 < -1e-12 or l1 < l2 - 1e-12:
            raise InvalidSpec(f"need lam1 >= lam2 >= 0, got ({l1}, {l2})")
        if l3 < abs(l4) - 1e-12:
            raise InvalidSpec(f"need lam3 >= |lam4|, got ({l3}, {l4})")
        if abs(l1 + l2 + l3 + l4 - 1.0) > 1e-12:
            raise InvalidSpec(f"weights sum to {l1 + l2 + l3 + l4:.15g}, expected 1")
        norm = abs(complex(self.a)) ** 2 + abs(complex(self.b)) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidSpec(f"|a|^2 + |b|^2 = {norm:.15g}, expected 1")


def extremal_family(spec: ExtremalFamilySpec) -> DensityMatrix:
    """Boundary-family state with the given partial-transpose spectrum.

    The parameters are the eigenvalues the partial transpose of the result
    takes exactly; not every admissible spec yields a positive matrix, in
    which case NotPSD propagates from validation.
    """
    l1, l2, l3, l4 = spec.lam1, spec.lam2, spec.lam3, spec.lam4
    a, b = complex(spec.a), complex(spec.b)
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = rho[3, 3] = (l1 + l2) / 2.0
    rho[0, 3] = a * b * (l3 - l4)
    rho[3, 0] = np.conj(rho[0, 3])
    rho[1, 1] = l3 * abs(a) ** 2 + l4 * abs(b) ** 2
    rho[2, 2] = l3 * abs(b) ** 2 + l4 * abs(a) ** 2
    rho[1, 2] = rho[2, 1] = (l1 - l2) / 2.0
    return make_density(rho)


def optimal_family_spec(c: float) -> ExtremalFamilySpec:
    """Family parameters minimizing negativity at fixed concurrence c."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise OutOfRange(f"concurrence must be in [0, 1], got {c}")
    # Half the least compatible negativity: 4x^2 + 4x(1-c) - c^2 = 0.
    x = 0.5 * (np.sqrt((1.0 - c) ** 2 + c * c) - (1.0 - c))
    l3 = x + (1.0 - c)
    l12 = np.sqrt(l3 * x)
    denom = l3 + x
    a = np.sqrt(l3 / denom) if denom > 0 else 1.0
    b = np.sqrt(x / denom) if denom > 0 else 0.0
    return ExtremalFamilySpec(l12, l12, l3, -x, complex(a), complex(b))


def sample_random(rank: int, seed: int) -> DensityMatrix:
    """Random state of the given rank, induced from a complex Gaussian factor.

    Draws a 4 x rank standard complex Gaussian G with the seeded generator
    and returns G G^dagger normalized to unit trace.  Same (rank, seed)
    always yields the same state.
    """
    rank = int(rank)
    if not 1 <= rank <= 4:
        raise OutOfRange(f"rank must be in 1..4, got {rank}")
    seed = int(seed)
    if seed < 0:
        raise OutOfRange(f"seed must be nonnegative, got {seed}")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    rho = G @ G.conj().T
    return make_density(rho / np.trace(rho).real)


def reduced_state(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Partial trace onto one qubit; subsystem 0 keeps the first factor."""
    if subsystem not in (0, 1):
        raise IndexOutOfRange(f"subsystem must be 0 or 1, got {subsystem}")
    T = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    if subsystem == 0:
        return np.einsum("ikjk->ij", T)
    return np.einsum("kikj->ij", T)


def density_to_json(rho: DensityMatrix) -> dict:
    """JSON-ready dict with the matrix as nested [re, im] pairs."""
    return {
        "matrix": [
            [[float(rho[i, j].real), float(rho[i, j].imag)] for j in range(4)]
            for i in range(4)
        ]
    }


def density_from_json(data: dict) -> DensityMatrix:
    """Inverse of density_to_json, with full validation."""
    if not isinstance(data, dict) or "matrix" not in data:
        raise ValueError("expected an object with a 'matrix' key")
    raw = data["matrix"]
    try:
        M = np.asarray(
            [[complex(cell[0], cell[1]) for cell in row] for row in raw],
            dtype=np.complex128,
        )
    except (TypeError, IndexError) as exc:
        raise ValueError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return make_density(M)


def save_density(rho: DensityMatrix, path: str) -> None:
    """Write a state to a JSON file."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(density_to_json(rho), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_density(path: str) -> DensityMatrix:
    """Read and validate a state from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return density_from_json(json.load(fh))
