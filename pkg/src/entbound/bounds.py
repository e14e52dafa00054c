"""Bound relations between the measures and their tightness certificates.

Negativity never exceeds concurrence, and at fixed concurrence it never
drops below the rank-2 boundary value; both facts are checked here per
state, together with closed forms for the boundary family and the induced
lower envelopes used for plotting.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ComplexSigma, NotEntangled, OutOfRange
from .filters import _takagi
from .matcore import herm_eig
from .measures import (
    SPIN_FLIP,
    concurrence,
    eof_from_concurrence,
    negativity,
    partial_transpose,
)
from .relent import er_mems_closed_form
from .states import DensityMatrix, PureState, pure_density, reduced_state

SEPARABLE_TOL = 1e-9
TIGHT_MARGINAL_TOL = 1e-7
DEGENERACY_TOL = 1e-10


def negativity_lower_bound(c: float) -> float:
    """Least negativity compatible with concurrence c."""
    c = float(c)
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise OutOfRange(f"concurrence must be in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    return float(np.sqrt((1.0 - c) ** 2 + c * c) - (1.0 - c))


def er_lower_curve(ef: float) -> float:
    """Least relative entropy of entanglement seen at fixed formation cost.

    Inverts the formation-cost formula for the concurrence by bisection and
    evaluates the boundary-family closed form there.
    """
    ef = float(ef)
    if not -1e-12 <= ef <= 1.0 + 1e-12:
        raise OutOfRange(f"entanglement of formation must be in [0, 1], got {ef}")
    ef = min(max(ef, 0.0), 1.0)
    if ef == 0.0 or ef == 1.0:
        return ef
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if eof_from_concurrence(mid) < ef:
            lo = mid
        else:
            hi = mid
    return er_mems_closed_form(0.5 * (lo + hi))


def _max_entangled_in_span(v1: np.ndarray, v2: np.ndarray) -> PureState:
    """Unit vector of maximal concurrence in the span of two orthonormal vecs."""
    T2 = np.empty((2, 2), dtype=np.complex128)
    T2[0, 0] = v1 @ SPIN_FLIP @ v1
    T2[0, 1] = T2[1, 0] = v1 @ SPIN_FLIP @ v2
    T2[1, 1] = v2 @ SPIN_FLIP @ v2
    _, Q = _takagi(T2)
    z = Q[0, :]
    psi = z[0] * v1 + z[1] * v2
    return psi / np.linalg.norm(psi)


def is_negativity_tight(rho: DensityMatrix, degeneracy_tol: float = DEGENERACY_TOL) -> bool:
    """Whether negativity meets concurrence on this entangled state.

    True exactly when the eigenvector at the negative partial-transpose
    eigenvalue is maximally entangled (both its marginals maximally mixed
    within 1e-7).  With a degenerate bottom of the spectrum the most
    entangled vector of the two-dimensional eigenspace is tested instead.
    """
    res = herm_eig(partial_transpose(rho))
    w = res.eigenvalues
    if w[0] >= -1e-12:
        raise NotEntangled(f"no negative partial-transpose eigenvalue (min {w[0]:.3e})")
    if w[1] - w[0] > degeneracy_tol:
        psi = res.eigenvectors[:, 0]
    else:
        psi = _max_entangled_in_span(res.eigenvectors[:, 0], res.eigenvectors[:, 1])
    proj = pure_density(psi / np.linalg.norm(psi))
    half = np.eye(2) / 2.0
    da = float(np.linalg.norm(reduced_state(proj, 0) - half))
    db = float(np.linalg.norm(reduced_state(proj, 1) - half))
    return max(da, db) <= TIGHT_MARGINAL_TOL


@dataclass(frozen=True)
class BoundVerdict:
    """Per-state bound check: measured values, validity flags, slacks, and
    tightness flags."""

    concurrence: float
    negativity: float
    lower_curve: float
    upper_ok: bool
    lower_ok: bool
    slack_upper: float
    slack_lower: float
    upper_tight: bool
    lower_tight: bool


def check_bounds(rho: DensityMatrix) -> BoundVerdict:
    """Evaluate both bound relations on one state.

    Separable states satisfy everything trivially and are reported tight on
    both sides.  Tightness of the upper relation uses the eigenvector
    criterion; the lower relation is called tight at slack below 1e-7.
    """
    n = negativity(rho)
    c = concurrence(rho)
    low = negativity_lower_bound(c)
    slack_upper = c - n
    slack_lower = n - low
    if n <= SEPARABLE_TOL and c <= SEPARABLE_TOL:
        upper_tight = True
    else:
        try:
            upper_tight = is_negativity_tight(rho)
        except NotEntangled:
            upper_tight = c <= SEPARABLE_TOL
    return BoundVerdict(
        concurrence=float(c),
        negativity=float(n),
        lower_curve=float(low),
        upper_ok=slack_upper >= -SEPARABLE_TOL,
        lower_ok=slack_lower >= -SEPARABLE_TOL,
        slack_upper=float(slack_upper),
        slack_lower=float(slack_lower),
        upper_tight=bool(upper_tight),
        lower_tight=bool(slack_lower <= TIGHT_MARGINAL_TOL),
    )


def family_sigmas(spec) -> tuple[float, float, float, float]:
    """Closed-form spin-flip singular values of the boundary family.

    Returned in the printed order (sigma_4 may come out negative, its
    magnitude being the singular value).  Raises ComplexSigma when the
    product under the square root is negative and the closed form leaves
    the real axis.
    """
    l1, l2, l3, l4 = spec.lam1, spec.lam2, spec.lam3, spec.lam4
    a, b = complex(spec.a), complex(spec.b)
    ab = abs(a) * abs(b)
    prod = (l3 * abs(a) ** 2 + l4 * abs(b) ** 2) * (l3 * abs(b) ** 2 + l4 * abs(a) ** 2)
    if prod < -1e-15:
        raise ComplexSigma(f"inner product term {prod:.3e} is negative")
    root = float(np.sqrt(max(prod, 0.0)))
    s1 = (l1 + l2) / 2.0 + ab * (l3 - l4)
    s3 = (l1 + l2) / 2.0 - ab * (l3 - l4)
    s2 = root + (l1 - l2) / 2.0
    s4 = root - (l1 - l2) / 2.0
    return (float(s1), float(s2), float(s3), float(s4))


def family_concurrence(spec) -> float:
    """Concurrence of the boundary family from the closed-form values."""
    s1, s2, s3, s4 = family_sigmas(spec)
    return float(max(0.0, s1 - s2 - s3 - s4))
