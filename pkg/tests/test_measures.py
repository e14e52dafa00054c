"""Measure values against hand formulas and independent spectral oracles."""

import numpy as np
import pytest

from entbound import (
    BellDiagonalSpec,
    MeasureReport,
    OutOfRange,
    bell_diagonal,
    bell_state,
    binary_entropy,
    concurrence,
    concurrence_bell_diagonal,
    concurrence_cholesky,
    concurrence_pure,
    eof,
    eof_from_concurrence,
    herm_eig,
    make_density,
    mems_rank2,
    negativity,
    partial_transpose,
    pure_density,
    sample_random,
    werner,
)
from entbound.measures import SPIN_FLIP


def textbook_concurrence(rho):
    """Independent route: spectrum of the non-Hermitian flip product."""
    R = rho @ SPIN_FLIP @ rho.conj() @ SPIN_FLIP
    s = np.sqrt(np.clip(np.sort(np.linalg.eigvals(R).real)[::-1], 0.0, None))
    return max(0.0, s[0] - s[1] - s[2] - s[3])


def two_qubit_unitary(seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(2):
        G = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        Q, R = np.linalg.qr(G)
        out.append(Q * (np.diagonal(R) / np.abs(np.diagonal(R))))
    return np.kron(out[0], out[1])


def test_partial_transpose_of_product_state_stays_positive():
    rng = np.random.default_rng(1)
    ga = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    gb = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    ra = ga @ ga.conj().T
    rb = gb @ gb.conj().T
    ra /= np.trace(ra).real
    rb /= np.trace(rb).real
    rho = make_density(np.kron(ra, rb))
    pt = partial_transpose(rho)
    np.testing.assert_allclose(pt, np.kron(ra, rb.T), atol=1e-12)
    assert herm_eig(pt).eigenvalues[0] >= -1e-12


def test_partial_transpose_bell_spectrum():
    w = herm_eig(partial_transpose(pure_density(bell_state(0)))).eigenvalues
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_is_involutive():
    rho = sample_random(4, 8)
    assert np.array_equal(partial_transpose(partial_transpose(rho)), rho)


def test_negativity_hand_values():
    assert negativity(pure_density(bell_state(0))) == pytest.approx(1.0, abs=1e-12)
    assert negativity(make_density(np.eye(4) / 4.0)) == 0.0
    # Least partial-transpose eigenvalue of this mixture is (1 - 3p)/4.
    assert negativity(werner(0.5)) == pytest.approx(0.25, abs=1e-12)


def test_concurrence_hand_values():
    assert concurrence(pure_density(bell_state(0))) == pytest.approx(1.0, abs=1e-12)
    psi = np.array([np.sqrt(0.9), 0.0, 0.0, np.sqrt(0.1)])
    assert concurrence(pure_density(psi)) == pytest.approx(0.6, abs=1e-12)
    assert concurrence_pure(psi) == pytest.approx(0.6, abs=1e-15)
    assert concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-12)


def test_concurrence_pure_matches_mixed_route():
    rng = np.random.default_rng(2)
    for _ in range(20):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        assert concurrence(pure_density(v)) == pytest.approx(concurrence_pure(v), abs=1e-10)


def test_concurrence_agrees_with_textbook_spectrum():
    for i in range(50):
        rho = sample_random(1 + i % 4, 300 + i)
        assert concurrence(rho) == pytest.approx(textbook_concurrence(rho), abs=1e-7)


def test_concurrence_cholesky_values_and_equivalence():
    assert concurrence_cholesky(mems_rank2(0.5)) == pytest.approx(0.5, abs=1e-10)
    assert concurrence_cholesky(make_density(np.eye(4) / 4.0)) == 0.0
    for i in range(1000):
        rho = sample_random(4, 10_000 + i)
        assert abs(concurrence_cholesky(rho) - concurrence(rho)) <= 1e-9


def test_concurrence_bell_diagonal_formula():
    assert concurrence_bell_diagonal(BellDiagonalSpec((1, 0, 0, 0))) == 1.0
    assert concurrence_bell_diagonal(BellDiagonalSpec((0.7, 0.1, 0.1, 0.1))) == pytest.approx(0.4)
    assert concurrence_bell_diagonal(BellDiagonalSpec((0.25, 0.25, 0.25, 0.25))) == 0.0
    spec = BellDiagonalSpec((0.7, 0.1, 0.1, 0.1))
    assert concurrence(bell_diagonal(spec)) == pytest.approx(0.4, abs=1e-12)


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(OutOfRange):
        binary_entropy(1.2)


def test_eof_hand_values():
    assert eof(pure_density(bell_state(1))) == pytest.approx(1.0, abs=1e-12)
    assert eof(make_density(np.eye(4) / 4.0)) == 0.0
    want = binary_entropy(0.5 * (1.0 + np.sqrt(0.75)))
    assert eof(mems_rank2(0.5)) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.354579, abs=1e-6)
    with pytest.raises(OutOfRange):
        eof_from_concurrence(1.1)


def test_eof_monotone_in_concurrence():
    grid = np.linspace(0.0, 1.0, 21)
    vals = [eof_from_concurrence(c) for c in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_measures_invariant_under_local_unitaries():
    for i in range(5):
        rho = sample_random(1 + i % 4, 40 + i)
        U = two_qubit_unitary(70 + i)
        rot = make_density(U @ rho @ U.conj().T)
        assert negativity(rot) == pytest.approx(negativity(rho), abs=1e-9)
        assert concurrence(rot) == pytest.approx(concurrence(rho), abs=1e-9)
        assert concurrence_cholesky(rot) == pytest.approx(concurrence_cholesky(rho), abs=1e-9)
        assert eof(rot) == pytest.approx(eof(rho), abs=1e-9)


def test_entangled_partial_transpose_shape_of_spectrum():
    # One negative eigenvalue, and full rank, whenever the state is entangled.
    for i in range(200):
        rho = sample_random(1 + i % 4, 500 + i)
        w = herm_eig(partial_transpose(rho)).eigenvalues
        if negativity(rho) <= 1e-9:
            continue
        assert w[0] < 0.0
        assert w[1] > 1e-9
        assert np.all(np.abs(w) > 1e-12)


def test_measure_report_carries_optional_field():
    r = MeasureReport(negativity=0.2, concurrence=0.3, eof=0.1)
    assert r.rel_entropy is None
    r = MeasureReport(negativity=0.2, concurrence=0.3, eof=0.1, rel_entropy=0.05)
    assert r.rel_entropy == 0.05
