"""Local filtering operations and the decompositions built on them.

Covers determinant-one local filters and their action on states, the
filtering normal form that takes any full-rank state to Bell-diagonal form,
and the construction of a pure-state ensemble whose members all share the
concurrence of the mixed state.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidSpec,
    NoConvergence,
    NonpositiveTrace,
    NotUnitTrace,
    RankDeficient,
    VanishingTrace,
)
from . import _kernels
from .matcore import herm_eig
from .measures import SPIN_FLIP
from .states import (
    BellDiagonalSpec,
    DensityMatrix,
    PureState,
    make_density,
    reduced_state,
)

#: Columns are the Bell vectors with phases chosen so that product unitaries
#: become real orthogonal matrices in this basis.
MAGIC_BASIS = np.array(
    [
        [1, 1j, 0, 0],
        [0, 0, 1j, 1],
        [0, 0, 1j, -1],
        [1, -1j, 0, 0],
    ],
    dtype=np.complex128,
) / np.sqrt(2.0)

DET_TOL = 1e-10


def _det2(A: np.ndarray) -> complex:
    return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])


@dataclass(frozen=True)
class FilterPair:
    """Local operation A (x) B with both factors of determinant one."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128)
        b = np.asarray(self.b, dtype=np.complex128)
        if a.shape != (2, 2) or b.shape != (2, 2):
            raise InvalidSpec(f"filters must be 2x2, got {a.shape} and {b.shape}")
        for name, M in (("a", a), ("b", b)):
            dev = abs(_det2(M) - 1.0)
            if dev > DET_TOL:
                raise InvalidSpec(f"det({name}) deviates from 1 by {dev:.3e}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def apply_filter(rho: DensityMatrix, f: FilterPair) -> tuple[DensityMatrix, float]:
    """Conjugate by A (x) B and renormalize; also return the trace factor."""
    K = np.kron(f.a, f.b)
    out = K @ rho @ K.conj().T
    t = float(np.trace(out).real)
    if t <= 1e-12:
        raise VanishingTrace(f"filtered trace {t:.3e} is numerically zero")
    return make_density(out / t), t


def concurrence_transform(c_in: float, f: FilterPair, trace_factor: float) -> float:
    """Concurrence of a filtered state from the concurrence of the input.

    C' = C |det A| |det B| / trace_factor.  Values escaping [0, 1] by more
    than 1e-9 are clipped with a warning; smaller excursions are clipped
    silently.
    """
    t = float(trace_factor)
    if t <= 0.0:
        raise NonpositiveTrace(f"trace factor must be positive, got {t:.3e}")
    c_out = float(c_in) * abs(_det2(f.a)) * abs(_det2(f.b)) / t
    if c_out < -1e-9 or c_out > 1.0 + 1e-9:
        warnings.warn(
            f"transformed concurrence {c_out:.12g} clipped to [0, 1]",
            stacklevel=2,
        )
    return min(max(c_out, 0.0), 1.0)


@dataclass(frozen=True)
class EnsembleDecomposition:
    """Pure-state ensemble (weight, state) realizing a density matrix."""

    pairs: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        total = sum(w for w, _ in self.pairs)
        if abs(total - 1.0) > 1e-10:
            raise NotUnitTrace(f"ensemble weights sum to {total:.15g}")
        if any(w <= 0 for w, _ in self.pairs):
            raise InvalidSpec("ensemble weights must be positive")

    def reconstruct(self) -> np.ndarray:
        """Mixture sum of the weighted projectors."""
        out = np.zeros((4, 4), dtype=np.complex128)
        for w, psi in self.pairs:
            out += w * np.outer(psi, psi.conj())
        return out


@dataclass(frozen=True)
class NormalFormResult:
    """Filters taking a state to Bell-diagonal form, plus its weights."""

    filters: FilterPair
    spec: BellDiagonalSpec
    iterations: int


def _inv_sqrt_det1(H2: np.ndarray) -> np.ndarray:
    """H^(-1/2) det(H)^(1/4) for a 2x2 positive matrix; has determinant 1."""
    res = herm_eig(H2)
    w = res.eigenvalues
    if w[0] <= 1e-14:
        raise RankDeficient(f"marginal eigenvalue {w[0]:.3e} too small to filter")
    V = res.eigenvectors
    inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
    return inv_sqrt * (w[0] * w[1]) ** 0.25


def _split_product_unitary(W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor a product unitary W ~ U (x) V into determinant-one factors.

    Reshuffling W so that a Kronecker product becomes a rank-one matrix, the
    factors are read off the dominant singular pair.
    """
    R = W.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    res = herm_eig(R @ R.conj().T)
    u = res.eigenvectors[:, -1]
    v = (R.T @ u.conj()) / float(res.eigenvalues[-1] ** 0.5)
    A = u.reshape(2, 2)
    B = v.reshape(2, 2)
    A = A / np.sqrt(_det2(A))
    B = B / np.sqrt(_det2(B))
    phase = np.trace(np.kron(A, B).conj().T @ W) / 4.0
    residual = float(np.max(np.abs(W - phase * np.kron(A, B))))
    if residual > 1e-8:
        raise NoConvergence(f"unitary is not a tensor product (residual {residual:.3e})")
    return A, B


def bell_diagonal_normal_form(
    rho: DensityMatrix, tol: float = 1e-9, max_iters: int = 500
) -> NormalFormResult:
    """Filter a full-rank state into Bell-diagonal form.

    Alternates determinant-one filters that whiten one marginal at a time;
    once both marginals are maximally mixed the state is real symmetric in
    the magic basis and a final local unitary diagonalizes it.  Weights are
    returned in descending order.
    """
    lmin = float(herm_eig(rho).eigenvalues[0])
    if lmin < 1e-8:
        raise RankDeficient(f"normal form needs rank 4; smallest eigenvalue {lmin:.3e}")

    eye2 = np.eye(2, dtype=np.complex128)
    half = eye2 / 2.0
    mu = np.asarray(rho, dtype=np.complex128).copy()
    FA = eye2.copy()
    FB = eye2.copy()
    iterations = 0
    converged = False
    dev = np.inf
    for _ in range(max_iters):
        ra = reduced_state(mu, 0)
        rb = reduced_state(mu, 1)
        dev = max(float(np.linalg.norm(ra - half)), float(np.linalg.norm(rb - half)))
        if dev <= tol:
            converged = True
            break
        iterations += 1
        A = _inv_sqrt_det1(ra)
        K = np.kron(A, eye2)
        mu = K @ mu @ K.conj().T
        mu /= np.trace(mu).real
        FA = A @ FA
        B = _inv_sqrt_det1(reduced_state(mu, 1))
        K = np.kron(eye2, B)
        mu = K @ mu @ K.conj().T
        mu /= np.trace(mu).real
        FB = B @ FB
    if not converged:
        raise NoConvergence(
            f"marginal deviation {dev:.3e} after {max_iters} iterations (tol {tol:.1e})"
        )

    M = MAGIC_BASIS.conj().T @ mu @ MAGIC_BASIS
    X = 0.5 * (M.real + M.real.T)
    res = herm_eig(X)
    w = res.eigenvalues[::-1].copy()
    O = res.eigenvectors[:, ::-1].real.copy()
    if np.linalg.det(O) < 0:
        O[:, 3] = -O[:, 3]
    W = MAGIC_BASIS @ O @ MAGIC_BASIS.conj().T
    AU, BU = _split_product_unitary(W)

    A_tot = AU.conj().T @ FA
    B_tot = BU.conj().T @ FB
    A_tot = A_tot / np.sqrt(_det2(A_tot))
    B_tot = B_tot / np.sqrt(_det2(B_tot))

    lam = np.clip(w, 0.0, None)
    lam = lam / lam.sum()
    spec = BellDiagonalSpec(tuple(float(x) for x in lam))
    return NormalFormResult(FilterPair(A_tot, B_tot), spec, iterations)


def _takagi(T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric SVD: unitary Q with Q T Q^T = diag(s), s descending >= 0.

    Solved through the real embedding [[Re T, Im T], [Im T, -Re T]], whose
    spectrum splits into +/- the singular values; eigenvectors [p; q] at
    positive values give Takagi vectors p + iq.  Vectors for the null space
    are completed by projection so Q stays exactly unitary.
    """
    r = T.shape[0]
    fro = float(np.linalg.norm(T))
    if fro < 1e-300:
        return np.zeros(r), np.eye(r, dtype=np.complex128)
    K = np.block([[T.real, T.imag], [T.imag, -T.real]])
    ev, evec = _kernels.jacobi_eigh(K.astype(np.complex128))
    order = np.argsort(ev, kind="stable")[::-1][:r]
    s = ev[order]
    cols = evec[:, order]
    vecs: list[np.ndarray] = []
    kept = 0
    for j in range(r):
        if s[j] > 1e-13 * s[0]:
            v = cols[:r, j].real + 1j * cols[r:, j].real
            vecs.append(v / np.linalg.norm(v))
            kept += 1
    s_out = np.zeros(r)
    s_out[:kept] = s[:kept]
    while len(vecs) < r:
        # complete within the null space: best remaining basis direction
        best = None
        best_norm = -1.0
        for m in range(r):
            u = np.zeros(r, dtype=np.complex128)
            u[m] = 1.0
            for v in vecs:
                u -= v * (v.conj() @ u)
            nu = float(np.linalg.norm(u))
            if nu > best_norm:
                best_norm = nu
                best = u
        vecs.append(best / best_norm)
    Q = np.array(vecs).conj()
    return s_out, Q


def _bilinear_diag_rotations(S: np.ndarray) -> np.ndarray:
    """Real rotations driving the diagonal of the symmetric S to zero.

    S must be real symmetric with zero trace.  Each step picks the extreme
    diagonal pair and zeroes the larger one exactly; the returned orthogonal
    R satisfies diag(R S R^T) = 0.
    """
    r = S.shape[0]
    S = S.copy()
    R = np.eye(r)
    active = list(range(r))
    for _ in range(r - 1):
        diag = [S[i, i] for i in active]
        hi = active[int(np.argmax(diag))]
        lo = active[int(np.argmin(diag))]
        if max(abs(S[hi, hi]), abs(S[lo, lo])) <= 1e-14:
            break
        a = S[lo, lo]
        b = S[hi, lo]
        c0 = S[hi, hi]
        disc = np.sqrt(max(b * b - a * c0, 0.0))
        if abs(a) < 1e-300:
            t = -c0 / (2.0 * b) if abs(b) > 1e-300 else 0.0
        else:
            q = -(b + np.copysign(disc, b)) if b != 0.0 else disc
            roots = [x for x in (q / a if q != 0.0 else np.inf, c0 / q if q != 0.0 else np.inf)
                     if np.isfinite(x)]
            if not roots:
                t = 0.0
            else:
                t = min(roots, key=abs)
        c = 1.0 / np.sqrt(1.0 + t * t)
        sn = t * c
        G = np.eye(r)
        G[hi, hi] = c
        G[hi, lo] = sn
        G[lo, hi] = -sn
        G[lo, lo] = c
        S = G @ S @ G.T
        S[hi, hi] = 0.0
        R = G @ R
        active.remove(hi)
    return R


def wootters_decomposition(rho: DensityMatrix) -> EnsembleDecomposition:
    """Ensemble of at most four pure states all with the state's concurrence.

    Starting from the spectral sub-normalized vectors, a Takagi rotation
    diagonalizes the spin-flip bilinear form.  For entangled states a phase
    gauge plus trace-free diagonal rotations equalize every member's
    preconcurrence at the concurrence; for separable states paired phase
    mixes cancel the bilinear diagonal entirely, leaving members of zero
    concurrence.
    """
    res = herm_eig(rho)
    keep = [j for j in range(3, -1, -1) if res.eigenvalues[j] > 1e-12]
    X = np.stack(
        [res.eigenvectors[:, j] * np.sqrt(res.eigenvalues[j]) for j in keep], axis=1
    )
    r = X.shape[1]
    if r == 1:
        psi = X[:, 0] / np.linalg.norm(X[:, 0])
        return EnsembleDecomposition(((1.0, psi),))

    T = X.T @ SPIN_FLIP @ X
    s, Q = _takagi(T)
    Y = X @ Q.T
    cval = float(s[0] - s[1:].sum())

    if cval > 1e-12:
        phases = np.ones(r, dtype=np.complex128)
        phases[1:] = 1j
        Z = Y * phases
        D = np.diag(np.concatenate(([s[0]], -s[1:])))
        S = D - cval * (Z.conj().T @ Z).real
        R = _bilinear_diag_rotations(0.5 * (S + S.T))
        W = Z @ R.T
    else:
        m = 2 if r == 2 else 4
        Zx = np.zeros((4, m), dtype=np.complex128)
        Zx[:, :r] = Y
        sx = np.zeros(m)
        sx[:r] = s
        V = np.eye(m, dtype=np.complex128)
        if m == 2:
            target = np.array([0.0, 0.0])
        else:
            lo = max(sx[0] - sx[1], sx[2] - sx[3]) / 2.0
            hi = min(sx[0] + sx[1], sx[2] + sx[3]) / 2.0
            t = 0.5 * (lo + hi)
            target = np.array([t, -t])
        for pair_idx, (i, j) in enumerate(((0, 1), (2, 3))[: m // 2]):
            si, sj = sx[i], sx[j]
            tgt = target[pair_idx]
            if si * sj > 1e-300:
                cpsi = ((2.0 * tgt) ** 2 - si * si - sj * sj) / (2.0 * si * sj)
                psi_ang = np.arccos(min(max(cpsi, -1.0), 1.0))
            else:
                psi_ang = 0.0
            f_raw = 0.5 * (si + sj * np.exp(1j * psi_ang))
            if abs(f_raw) > 1e-300:
                chi = 0.5 * (np.angle(complex(tgt) + 0j) - np.angle(f_raw))
            else:
                chi = 0.0
            e_chi = np.exp(1j * chi)
            e_phi = np.exp(1j * psi_ang / 2.0)
            G = np.eye(m, dtype=np.complex128)
            G[i, i] = e_chi / np.sqrt(2.0)
            G[i, j] = e_chi * e_phi / np.sqrt(2.0)
            G[j, i] = e_chi / np.sqrt(2.0)
            G[j, j] = -e_chi * e_phi / np.sqrt(2.0)
            V = G @ V
        if m == 4:
            G = np.zeros((4, 4))
            for i, j in ((0, 2), (1, 3)):
                G[i, i] = G[i, j] = G[j, i] = 1.0 / np.sqrt(2.0)
                G[j, j] = -1.0 / np.sqrt(2.0)
            V = G @ V
        W = Zx @ V.T

    pairs = []
    for i in range(W.shape[1]):
        wgt = float(np.vdot(W[:, i], W[:, i]).real)
        if wgt > 1e-13:
            pairs.append((wgt, W[:, i] / np.sqrt(wgt)))
    total = sum(w for w, _ in pairs)
    pairs = [(w / total, psi) for w, psi in pairs]
    return EnsembleDecomposition(tuple(pairs))
