"""Entropic quantities and the relative entropy of entanglement.

The solver minimizes S(rho || sigma) over the separable set by conditional
gradient descent with pairwise steps: each iteration solves a linear
minimization over product pure states (the extreme points), transfers weight
from the worst active atom toward the new one along an exact line search,
and keeps a duality-gap optimality certificate.  All entropies are in bits.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import OutOfRange
from .matcore import herm_eig
from .states import DensityMatrix, make_density

KERNEL_MASS_TOL = 1e-10
RANK_TOL = 1e-12


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum lambda log2 lambda of a state, in bits."""
    w = herm_eig(rho).eigenvalues
    out = 0.0
    for x in w:
        if x > 0.0:
            out -= float(x) * math.log2(float(x))
    return out


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho || sigma) in bits; infinity when rho leaks out of sigma's support.

    Support is decided by the weight rho places on the numerical kernel of
    sigma: more than 1e-10 returns math.inf rather than raising.  Tiny
    negative round-off results clamp to zero.
    """
    res = herm_eig(sigma)
    w = res.eigenvalues
    V = res.eigenvectors
    scale = max(float(w[-1]), 0.0)
    cross = 0.0
    for j in range(4):
        q = float(np.vdot(V[:, j], rho @ V[:, j]).real)
        if w[j] <= RANK_TOL * max(scale, 1e-300):
            if q > KERNEL_MASS_TOL:
                return math.inf
        else:
            cross -= math.log2(float(w[j])) * q
    return max(0.0, cross - von_neumann_entropy(rho))


@dataclass(frozen=True)
class ERSolverConfig:
    """Conditional-gradient solver knobs; defaults suit 1e-6 certificates."""

    tol: float = 1e-6
    max_iters: int = 5000
    restarts: int = 16
    seed: int = 0


@dataclass(frozen=True)
class EROptResult:
    """Solver output: optimal value, the separable argmin, and certificates.

    gap_bound upper-bounds the distance of `value` from the true minimum; if
    the iteration budget ran out it simply reflects the best iterate reached,
    no exception is raised.
    """

    value: float
    closest_separable: DensityMatrix
    iterations: int
    gap_bound: float


_REFINE_CAP = 128


def _refine_targets(mix) -> np.ndarray:
    """Indices of the atoms worth moving: all of them, or the heaviest few."""
    n = mix.count
    if n <= _REFINE_CAP:
        return np.arange(n, dtype=np.int64)
    cut = n - _REFINE_CAP
    return np.argpartition(mix.weights[:n], cut)[cut:].astype(np.int64)


class _AtomMix:
    """Convex combination of the maximally mixed seed and product projectors.

    Atom vectors live in a preallocated array so per-iteration scoring stays
    O(active atoms); near-duplicate product states (overlap above 1 - 1e-8)
    share one atom, which keeps the active set small.
    """

    def __init__(self):
        self.eye4 = np.eye(4, dtype=np.complex128) / 4.0
        self.arr = np.zeros((64, 4), dtype=np.complex128)
        self.weights = np.zeros(64)
        self.count = 0
        self.w_mix = 1.0

    def rebuild(self) -> np.ndarray:
        """Exact mixture from the bookkeeping, dropping dead atoms."""
        total = self.w_mix + float(self.weights[: self.count].sum())
        self.w_mix /= total
        self.weights[: self.count] /= total
        alive = np.flatnonzero(self.weights[: self.count] > 1e-15)
        k = alive.shape[0]
        self.arr[:k] = self.arr[alive]
        self.weights[:k] = self.weights[alive]
        self.weights[k : self.count] = 0.0
        self.count = k
        sigma = self.w_mix * self.eye4.copy()
        for j in range(k):
            sigma += self.weights[j] * np.outer(self.arr[j], self.arr[j].conj())
        return sigma

    def find_or_add(self, psi: np.ndarray) -> int:
        if self.count:
            overlaps = np.abs(self.arr[: self.count].conj() @ psi)
            j = int(np.argmax(overlaps))
            if overlaps[j] >= 1.0 - 1e-8:
                return j
        if self.count == self.arr.shape[0]:
            self.arr = np.concatenate([self.arr, np.zeros_like(self.arr)])
            self.weights = np.concatenate([self.weights, np.zeros_like(self.weights)])
        self.arr[self.count] = psi
        self.weights[self.count] = 0.0
        self.count += 1
        return self.count - 1

    def worst_active(self, G: np.ndarray) -> tuple[int, float]:
        """Index (-1 for the mixed seed) and weight of the worst-score atom."""
        best_idx = -1
        best_score = float(np.trace(G).real) / 4.0 if self.w_mix > 1e-15 else -np.inf
        best_weight = self.w_mix
        if self.count:
            scores = _kernels.atom_scores(G, self.arr[: self.count])
            scores[self.weights[: self.count] <= 1e-15] = -np.inf
            j = int(np.argmax(scores))
            if scores[j] > best_score:
                best_idx, best_weight = j, float(self.weights[j])
        return best_idx, best_weight

    def matrix_of(self, idx: int) -> np.ndarray:
        if idx < 0:
            return self.eye4
        psi = self.arr[idx]
        return np.outer(psi, psi.conj())

    def transfer(self, from_idx: int, to_idx: int, amount: float) -> None:
        if from_idx < 0:
            self.w_mix = max(self.w_mix - amount, 0.0)
        else:
            self.weights[from_idx] = max(self.weights[from_idx] - amount, 0.0)
        self.weights[to_idx] += amount

    def scale_all(self, factor: float) -> None:
        self.w_mix *= factor
        self.weights[: self.count] *= factor


def rel_entropy_entanglement(
    rho: DensityMatrix, cfg: ERSolverConfig | None = None, on_iterate=None
) -> EROptResult:
    """Distance (in relative entropy) from rho to the separable set.

    Deterministic for fixed (rho, cfg): restart seeds for the inner product
    state search come from the config seed.  `on_iterate(k, value, gap)` is
    called once per outer iteration when provided.  If the iteration budget
    runs out the best iterate is returned with its gap certificate.
    """
    if cfg is None:
        cfg = ERSolverConfig()
    rng = np.random.default_rng(cfg.seed)
    rho = np.asarray(rho, dtype=np.complex128)
    ent_rho = von_neumann_entropy(rho)
    mix = _AtomMix()
    sigma = mix.rebuild()

    iterations = 0
    gap = math.inf
    best_raw = math.inf
    best_sigma = sigma
    dual_floor = -math.inf
    for k in range(cfg.max_iters + 1):
        if k and k % 64 == 0:
            sigma = mix.rebuild()

        # a rank-starved iterate freezes the line searches (the log barrier
        # walls off the remaining descent directions), so keep a little of
        # the mixed seed around; the amount shrinks with the gap and only
        # perturbs the objective at a fraction of the current suboptimality
        floor = min(1e-3, 0.01 * gap)
        if mix.w_mix < floor:
            delta = (floor - mix.w_mix) / (1.0 - floor)
            sigma = (sigma + delta * mix.eye4) / (1.0 + delta)
            mix.scale_all(1.0 / (1.0 + delta))
            mix.w_mix = floor

        w, V = _kernels.jacobi_eigh(sigma)
        G = _kernels.log2_gradient(w, V, rho)
        draws = rng.standard_normal((cfg.restarts, 2)) + 1j * rng.standard_normal(
            (cfg.restarts, 2)
        )
        if mix.count:
            # seed some restarts at the lowest-energy atoms; near the optimum
            # the minimizing directions sit next to the active support
            scores = _kernels.atom_scores(G, mix.arr[: mix.count])
            scores = np.where(mix.weights[: mix.count] > 1e-15, scores, np.inf)
            n_seed = min(4, mix.count, draws.shape[0])
            order = np.argpartition(scores, n_seed - 1)[:n_seed]
            for slot in range(n_seed):
                M = mix.arr[order[slot]].reshape(2, 2)
                row = M[0] if np.linalg.norm(M[0]) >= np.linalg.norm(M[1]) else M[1]
                draws[slot] = row
        vmin, alpha, beta = _kernels.product_lmo(G, draws)
        raw = float(_kernels.cross_entropy_term(rho, sigma)) - ent_rho
        step_gap = float(np.trace(G @ sigma).real - vmin)
        if raw < best_raw:
            best_raw = raw
            best_sigma = sigma.copy()
        if math.isfinite(step_gap):
            # raw - step_gap lower-bounds the optimum, so the best iterate
            # carries the certificate  best_raw - optimum <= gap
            dual_floor = max(dual_floor, raw - step_gap)
        gap = max(best_raw - dual_floor, 0.0)
        if on_iterate is not None:
            on_iterate(k, max(0.0, raw), gap)
        if gap <= cfg.tol or k == cfg.max_iters:
            break

        if k and k % 16 == 0:
            # corrective passes invalidate the gradient, so restart the
            # iteration afterwards instead of stepping on stale directions
            if k % 32 == 0:
                sigma, new_mix, _ = _kernels.reweight_pass(
                    rho, sigma, mix.arr[: mix.count], mix.weights[: mix.count],
                    mix.count, mix.w_mix, 8,
                )
                mix.w_mix = float(new_mix)
            sigma, _ = _kernels.refine_pass(
                rho, sigma, G, mix.arr, mix.weights, _refine_targets(mix)
            )
            iterations += 1
            continue

        # the merged atom's projector is used everywhere below so the
        # incremental sigma and the atom bookkeeping stay consistent
        to_idx = mix.find_or_add(np.kron(alpha, beta))
        omega = mix.matrix_of(to_idx)
        away_idx, away_weight = mix.worst_active(G)
        stepped = False
        if away_weight > 1e-15 and away_idx != to_idx:
            S1 = sigma + away_weight * (omega - mix.matrix_of(away_idx))
            t, _ = _kernels.golden_segment(rho, sigma, S1)
            if away_idx < 0:
                # never drain the full-rank seed in one move: a rank-starved
                # iterate makes the line searches too ill-conditioned to see
                # the remaining descent directions
                t = min(t, 0.9)
            if t > 0.0:
                mix.transfer(away_idx, to_idx, t * away_weight)
                sigma = (1.0 - t) * sigma + t * S1
                sigma = 0.5 * (sigma + sigma.conj().T)
                stepped = True
        if not stepped:
            # plain conditional-gradient fallback keeps progress guaranteed
            gmax = 1.0 - 1e-9
            S1 = (1.0 - gmax) * sigma + gmax * omega
            t, _ = _kernels.golden_segment(rho, sigma, S1)
            gamma = min(t * gmax, 0.9)
            if gamma <= 0.0:
                # both searches stalled; try one corrective rescue before
                # concluding the iterate cannot be improved further
                f_before = float(_kernels.cross_entropy_term(rho, sigma))
                sigma2, new_mix, _ = _kernels.reweight_pass(
                    rho, sigma, mix.arr[: mix.count], mix.weights[: mix.count],
                    mix.count, mix.w_mix, 8,
                )
                mix.w_mix = float(new_mix)
                sigma2, _ = _kernels.refine_pass(
                    rho, sigma2, G, mix.arr, mix.weights, _refine_targets(mix)
                )
                if float(_kernels.cross_entropy_term(rho, sigma2)) >= f_before - 1e-15:
                    break
                sigma = sigma2
                iterations += 1
                continue
            mix.scale_all(1.0 - gamma)
            mix.weights[to_idx] += gamma
            sigma = (1.0 - gamma) * sigma + gamma * omega
            sigma = 0.5 * (sigma + sigma.conj().T)
        iterations += 1

    return EROptResult(
        value=max(0.0, best_raw),
        closest_separable=make_density(best_sigma),
        iterations=iterations,
        gap_bound=gap,
    )


def er_bell_diagonal(spec) -> float:
    """Closed-form relative entropy of entanglement of a Bell-diagonal state.

    1 - H(lambda_1) for lambda_1 > 1/2, zero otherwise; the minimizer is the
    Bell-diagonal state with largest weight flattened to 1/2.
    """
    lam1 = float(spec.lambdas[0])
    if lam1 <= 0.5:
        return 0.0
    h = -lam1 * math.log2(lam1) - (1.0 - lam1) * math.log2(1.0 - lam1)
    return 1.0 - h


def er_mems_closed_form(c: float) -> float:
    """Relative entropy of entanglement along the rank-2 boundary family."""
    c = float(c)
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise OutOfRange(f"concurrence must be in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    out = (c - 2.0) * math.log2(1.0 - c / 2.0)
    if c < 1.0:
        out += (1.0 - c) * math.log2(1.0 - c)
    return max(0.0, out)
