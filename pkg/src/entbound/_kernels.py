"""Compiled numerical kernels.

All heavy per-matrix work lives here as numba-jitted functions so that bulk
sampling loops stay fast.  Kernels operate on plain complex128 arrays and do
no validation; callers in :mod:`entbound.matcore` and friends are responsible
for checking inputs.  Everything is deterministic: fixed sweep order, fixed
tolerances, no runtime RNG.
"""

import numpy as np
from numba import njit

_SWEEP_LIMIT = 100
_OFF_TOL = 1e-14


@njit(cache=True, nogil=True)
def jacobi_eigh(H):
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns (w, V) with w unsorted real diagonal values and V unitary,
    H @ V[:, k] == w[k] * V[:, k].  Sweeps stop when the off-diagonal
    Frobenius norm drops below 1e-14 times the Frobenius norm of H.
    """
    n = H.shape[0]
    A = H.copy()
    V = np.eye(n, dtype=np.complex128)

    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += abs(A[i, j]) ** 2
    fro = np.sqrt(fro)
    if fro == 0.0:
        return np.zeros(n), V
    tol = _OFF_TOL * fro

    for _ in range(_SWEEP_LIMIT):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * abs(A[p, q]) ** 2
        if np.sqrt(off) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                m = abs(apq)
                if m <= 1e-300:
                    continue
                phase = apq / m
                theta = (A[q, q].real - A[p, p].real) / (2.0 * m)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c * phase
                sc = np.conj(s)
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - sc * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = sc * apk + c * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - sc * vkq
                    V[k, q] = s * vkp + c * vkq

    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    return w, V


@njit(cache=True, nogil=True)
def jacobi_sv(M):
    """Singular values of a square complex matrix, descending.

    One-sided Jacobi: columns are rotated pairwise until mutually orthogonal,
    then singular values are the column norms.  Working on columns directly
    keeps full absolute accuracy for tiny singular values, which the
    squared-eigenvalue route loses.
    """
    n = M.shape[0]
    A = M.copy()
    for _ in range(_SWEEP_LIMIT):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = 0.0
                aqq = 0.0
                apq = 0.0 + 0.0j
                for k in range(n):
                    app += abs(A[k, p]) ** 2
                    aqq += abs(A[k, q]) ** 2
                    apq += np.conj(A[k, p]) * A[k, q]
                m = abs(apq)
                if m <= 1e-15 * np.sqrt(app * aqq) or m == 0.0:
                    continue
                rotated = True
                phase = apq / m
                theta = (aqq - app) / (2.0 * m)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c * phase
                sc = np.conj(s)
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - sc * akq
                    A[k, q] = s * akp + c * akq
        if not rotated:
            break

    sv = np.empty(n)
    for j in range(n):
        acc = 0.0
        for k in range(n):
            acc += abs(A[k, j]) ** 2
        sv[j] = np.sqrt(acc)
    return np.sort(sv)[::-1].copy()


@njit(cache=True, nogil=True)
def log2_gradient(w, V, rho):
    """Gradient of sigma -> -tr(rho log2 sigma) at sigma = V diag(w) V^H.

    Uses the Loewner divided-difference kernel of the natural log on the
    eigenbasis of sigma; near-degenerate eigenvalue pairs fall back to the
    derivative 2/(w_i + w_j) to avoid cancellation.
    """
    n = w.shape[0]
    R = np.conj(V.T) @ rho @ V
    L = np.empty((n, n))
    for i in range(n):
        wi = w[i] if w[i] > 1e-300 else 1e-300
        for j in range(n):
            wj = w[j] if w[j] > 1e-300 else 1e-300
            d = wi - wj
            if abs(d) <= 1e-12 * (wi + wj):
                L[i, j] = 2.0 / (wi + wj)
            else:
                L[i, j] = (np.log(wi) - np.log(wj)) / d
    G = V @ (L * R) @ np.conj(V.T)
    G = -(G + np.conj(G.T)) / (2.0 * np.log(2.0))
    return G


@njit(cache=True, nogil=True)
def _min_eigvec2(a, b, c):
    """Smallest eigenpair of [[a, c], [conj(c), b]] with a, b real."""
    half = 0.5 * (a + b)
    rad = np.sqrt(0.25 * (a - b) ** 2 + abs(c) ** 2)
    lmin = half - rad
    v0 = c
    v1 = lmin - a
    norm = np.sqrt(abs(v0) ** 2 + abs(v1) ** 2)
    if norm < 1e-150:
        v0 = lmin - b
        v1 = np.conj(c)
        norm = np.sqrt(abs(v0) ** 2 + abs(v1) ** 2)
    if norm < 1e-150:
        return lmin, 1.0 + 0.0j, 0.0 + 0.0j
    return lmin, v0 / norm, v1 / norm


@njit(cache=True, nogil=True)
def product_lmo(G, beta_init):
    """Minimize <a (x) b| G |a (x) b> over unit vectors a, b in C^2.

    Alternating closed-form 2x2 eigenvector updates from each seed row of
    beta_init; returns the best (value, a, b) over all restarts.
    """
    restarts = beta_init.shape[0]
    best_val = np.inf
    best_alpha = np.zeros(2, dtype=np.complex128)
    best_beta = np.zeros(2, dtype=np.complex128)
    for r in range(restarts):
        b0 = beta_init[r, 0]
        b1 = beta_init[r, 1]
        nb = np.sqrt(abs(b0) ** 2 + abs(b1) ** 2)
        if nb < 1e-150:
            b0, b1 = 1.0 + 0.0j, 0.0 + 0.0j
        else:
            b0, b1 = b0 / nb, b1 / nb
        a0, a1 = 1.0 + 0.0j, 0.0 + 0.0j
        val_prev = np.inf
        val = np.inf
        for _ in range(60):
            # alpha update: M_ik = sum_jl conj(b_j) b_l G[2i+j, 2k+l]
            m00 = (np.conj(b0) * b0 * G[0, 0] + np.conj(b0) * b1 * G[0, 1]
                   + np.conj(b1) * b0 * G[1, 0] + np.conj(b1) * b1 * G[1, 1])
            m11 = (np.conj(b0) * b0 * G[2, 2] + np.conj(b0) * b1 * G[2, 3]
                   + np.conj(b1) * b0 * G[3, 2] + np.conj(b1) * b1 * G[3, 3])
            m01 = (np.conj(b0) * b0 * G[0, 2] + np.conj(b0) * b1 * G[0, 3]
                   + np.conj(b1) * b0 * G[1, 2] + np.conj(b1) * b1 * G[1, 3])
            _, a0, a1 = _min_eigvec2(m00.real, m11.real, m01)
            # beta update: N_jl = sum_ik conj(a_i) a_k G[2i+j, 2k+l]
            n00 = (np.conj(a0) * a0 * G[0, 0] + np.conj(a0) * a1 * G[0, 2]
                   + np.conj(a1) * a0 * G[2, 0] + np.conj(a1) * a1 * G[2, 2])
            n11 = (np.conj(a0) * a0 * G[1, 1] + np.conj(a0) * a1 * G[1, 3]
                   + np.conj(a1) * a0 * G[3, 1] + np.conj(a1) * a1 * G[3, 3])
            n01 = (np.conj(a0) * a0 * G[0, 1] + np.conj(a0) * a1 * G[0, 3]
                   + np.conj(a1) * a0 * G[2, 1] + np.conj(a1) * a1 * G[2, 3])
            val, b0, b1 = _min_eigvec2(n00.real, n11.real, n01)
            if abs(val - val_prev) < 1e-12:
                break
            val_prev = val
        if val < best_val:
            best_val = val
            best_alpha[0], best_alpha[1] = a0, a1
            best_beta[0], best_beta[1] = b0, b1
    return best_val, best_alpha, best_beta


@njit(cache=True, nogil=True)
def cross_entropy_term(rho, sigma):
    """-sum_j log2(mu_j) <w_j|rho|w_j> over the eigensystem of sigma."""
    w, V = jacobi_eigh(sigma)
    total = 0.0
    n = w.shape[0]
    for j in range(n):
        q = 0.0
        for i in range(n):
            for k in range(n):
                q += (np.conj(V[i, j]) * rho[i, k] * V[k, j]).real
        mu = w[j] if w[j] > 1e-300 else 1e-300
        total -= np.log2(mu) * q
    return total


@njit(cache=True, nogil=True)
def golden_segment(rho, S0, S1):
    """Exact line search for -tr(rho log2 .) on the segment S0 -> S1.

    Golden-section minimization over t in [0, 1] of the cross-entropy term
    (the entropy of rho is constant along the line); both endpoints are
    candidates, so the returned value never exceeds the value at t = 0.
    """
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a = 0.0
    b = 1.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = cross_entropy_term(rho, (1.0 - c) * S0 + c * S1)
    fd = cross_entropy_term(rho, (1.0 - d) * S0 + d * S1)
    for _ in range(55):
        if b - a <= 1e-11:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = cross_entropy_term(rho, (1.0 - c) * S0 + c * S1)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = cross_entropy_term(rho, (1.0 - d) * S0 + d * S1)
    t = 0.5 * (a + b)
    ft = cross_entropy_term(rho, (1.0 - t) * S0 + t * S1)
    f0 = cross_entropy_term(rho, S0)
    f1 = cross_entropy_term(rho, S1)
    if f0 <= ft and f0 <= f1:
        return 0.0, f0
    if f1 < ft:
        return 1.0, f1
    return t, ft


@njit(cache=True, nogil=True)
def atom_scores(G, P):
    """<psi_k| G |psi_k> for each row psi_k of P."""
    k = P.shape[0]
    out = np.empty(k)
    for r in range(k):
        acc = 0.0
        for i in range(4):
            for j in range(4):
                acc += (np.conj(P[r, i]) * G[i, j] * P[r, j]).real
        out[r] = acc
    return out


@njit(cache=True, nogil=True)
def _nearest_product(v):
    """Principal Schmidt pair of a 4-vector as a normalized product vector."""
    h00 = abs(v[0]) ** 2 + abs(v[1]) ** 2
    h11 = abs(v[2]) ** 2 + abs(v[3]) ** 2
    h01 = v[0] * np.conj(v[2]) + v[1] * np.conj(v[3])
    # largest eigenvector of [[h00, h01], [conj(h01), h11]]
    _, a0, a1 = _min_eigvec2(-h00, -h11, -h01)
    b0 = np.conj(a0) * v[0] + np.conj(a1) * v[2]
    b1 = np.conj(a0) * v[1] + np.conj(a1) * v[3]
    nb = np.sqrt(abs(b0) ** 2 + abs(b1) ** 2)
    if nb < 1e-150:
        b0, b1 = 1.0 + 0.0j, 0.0 + 0.0j
    else:
        b0, b1 = b0 / nb, b1 / nb
    out = np.empty(4, dtype=np.complex128)
    out[0] = a0 * b0
    out[1] = a0 * b1
    out[2] = a1 * b0
    out[3] = a1 * b1
    return out


@njit(cache=True, nogil=True)
def reweight_pass(rho, sigma, atoms, weights, count, w_mix, passes):
    """Exponentiated-gradient re-balancing of all mixture weights at once.

    Multiplicative updates with backtracking keep the weights on the simplex
    and the objective monotone; atoms below the live threshold are left
    untouched so vanished weights cannot resurrect through the exponential.
    Mutates weights in place and returns (sigma, w_mix, objective).
    """
    f_cur = cross_entropy_term(rho, sigma)
    eta = 1.0
    sig = np.empty((4, 4), dtype=np.complex128)
    wn = np.empty(count)
    scores = np.empty(count)
    for _ in range(passes):
        w, V = jacobi_eigh(sigma)
        G = log2_gradient(w, V, rho)
        s_seed = (G[0, 0] + G[1, 1] + G[2, 2] + G[3, 3]).real / 4.0
        avg = w_mix * s_seed
        for j in range(count):
            acc = 0.0
            for i in range(4):
                for l in range(4):
                    acc += (np.conj(atoms[j, i]) * G[i, l] * atoms[j, l]).real
            scores[j] = acc
            avg += weights[j] * acc
        spread = abs(s_seed - avg) if w_mix > 1e-15 else 0.0
        for j in range(count):
            if weights[j] > 1e-15:
                d = abs(scores[j] - avg)
                if d > spread:
                    spread = d
        if spread < 1e-14:
            break
        improved = False
        step = eta / spread
        for _bt in range(10):
            arg = -step * (s_seed - avg)
            if arg > 50.0:
                arg = 50.0
            m_new = w_mix * np.exp(arg) if w_mix > 1e-15 else w_mix
            total = m_new
            for j in range(count):
                if weights[j] > 1e-15:
                    arg = -step * (scores[j] - avg)
                    if arg > 50.0:
                        arg = 50.0
                    wn[j] = weights[j] * np.exp(arg)
                else:
                    wn[j] = weights[j]
                total += wn[j]
            for r in range(4):
                for c in range(4):
                    sig[r, c] = 0.0
            for j in range(count):
                wj = wn[j] / total
                wn[j] = wj
                if wj <= 0.0:
                    continue
                for r in range(4):
                    for c in range(4):
                        sig[r, c] += wj * atoms[j, r] * np.conj(atoms[j, c])
            m_new /= total
            for r in range(4):
                sig[r, r] += m_new * 0.25
            f_new = cross_entropy_term(rho, sig)
            if f_new < f_cur - 1e-15:
                f_cur = f_new
                w_mix = m_new
                for j in range(count):
                    weights[j] = wn[j]
                sigma = 0.5 * (sig + np.conj(sig.T))
                eta = min(step * spread * 1.5, 64.0)
                improved = True
                break
            step /= 3.0
        if not improved:
            break
    return sigma, w_mix, f_cur


@njit(cache=True, nogil=True)
def refine_pass(rho, sigma, G, atoms, weights, idx):
    """One sweep of local descent on atom positions at fixed weights.

    Each listed atom is rotated toward its negative objective gradient and
    snapped back to the nearest product vector; moves are kept only when the
    full objective decreases.  Mutates atoms in place and returns the
    updated sigma together with the number of accepted moves.
    """
    f_cur = cross_entropy_term(rho, sigma)
    moved = 0
    angles = (0.3, 0.1, 0.03, 0.01)
    trial = np.empty((4, 4), dtype=np.complex128)
    for jj in range(idx.shape[0]):
        j = idx[jj]
        wj = weights[j]
        if wj <= 1e-12:
            continue
        psi = atoms[j]
        g = G @ psi
        ip = (np.conj(psi[0]) * g[0] + np.conj(psi[1]) * g[1]
              + np.conj(psi[2]) * g[2] + np.conj(psi[3]) * g[3])
        gt = g - ip * psi
        ng = np.sqrt(abs(gt[0]) ** 2 + abs(gt[1]) ** 2
                     + abs(gt[2]) ** 2 + abs(gt[3]) ** 2)
        if ng < 1e-14:
            continue
        gt = gt / ng
        accepted = False
        best = psi
        for a_i in range(4):
            theta = angles[a_i]
            cand = _nearest_product(np.cos(theta) * psi - np.sin(theta) * gt)
            for r in range(4):
                for c in range(4):
                    trial[r, c] = sigma[r, c] + wj * (
                        cand[r] * np.conj(cand[c]) - psi[r] * np.conj(psi[c])
                    )
            f_trial = cross_entropy_term(rho, trial)
            if f_trial < f_cur - 1e-15:
                f_cur = f_trial
                best = cand
                accepted = True
        if accepted:
            for r in range(4):
                for c in range(4):
                    sigma[r, c] += wj * (
                        best[r] * np.conj(best[c]) - psi[r] * np.conj(psi[c])
                    )
            for r in range(4):
                atoms[j, r] = best[r]
            moved += 1
    sigma = 0.5 * (sigma + np.conj(sigma.T))
    return sigma, moved
