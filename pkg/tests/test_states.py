"""State constructors, validation, sampling, and serialization."""

import numpy as np
import pytest

from entbound import (
    BellDiagonalSpec,
    ExtremalFamilySpec,
    IndexOutOfRange,
    InvalidSpec,
    NotHermitian,
    NotPSD,
    NotUnitTrace,
    OutOfRange,
    bell_diagonal,
    bell_state,
    concurrence,
    density_from_json,
    density_to_json,
    extremal_family,
    herm_eig,
    load_density,
    make_density,
    mems_rank2,
    negativity,
    negativity_lower_bound,
    partial_transpose,
    pure_density,
    reduced_state,
    sample_random,
    save_density,
    werner,
)

HALF_EYE = np.eye(2) / 2.0


def test_make_density_accepts_maximally_mixed():
    rho = make_density(np.eye(4) / 4.0)
    np.testing.assert_allclose(rho, np.eye(4) / 4.0, atol=1e-15)


def test_make_density_rejects_wrong_trace():
    with pytest.raises(NotUnitTrace, match="deviates from 1 by"):
        make_density(np.diag([1.0, 1.0, 0.0, 0.0]))


def test_make_density_rejects_indefinite():
    with pytest.raises(NotPSD, match="smallest eigenvalue"):
        make_density(np.diag([1.5, -0.5, 0.0, 0.0]))


def test_make_density_rejects_non_hermitian():
    M = np.eye(4, dtype=complex) / 4.0
    M[0, 2] += 0.3j
    with pytest.raises(NotHermitian):
        make_density(M)


def test_make_density_rejects_wrong_shape():
    with pytest.raises(ValueError, match=r"got shape \(3, 3\)"):
        make_density(np.eye(3) / 3.0)


def test_bell_state_vectors():
    np.testing.assert_allclose(bell_state(0), np.array([1, 0, 0, 1]) / np.sqrt(2))
    np.testing.assert_allclose(bell_state(3), np.array([0, 1, -1, 0]) / np.sqrt(2))
    with pytest.raises(IndexOutOfRange):
        bell_state(4)


def test_bell_states_are_maximally_entangled():
    for k in range(4):
        rho = pure_density(bell_state(k))
        for side in (0, 1):
            np.testing.assert_allclose(reduced_state(rho, side), HALF_EYE, atol=1e-12)


def test_bell_states_are_orthonormal():
    V = np.column_stack([bell_state(k) for k in range(4)])
    np.testing.assert_allclose(V.conj().T @ V, np.eye(4), atol=1e-14)


def test_bell_diagonal_special_cases():
    phi = pure_density(bell_state(0))
    np.testing.assert_allclose(bell_diagonal(BellDiagonalSpec((1, 0, 0, 0))), phi, atol=1e-14)
    quarter = BellDiagonalSpec((0.25, 0.25, 0.25, 0.25))
    np.testing.assert_allclose(bell_diagonal(quarter), np.eye(4) / 4.0, atol=1e-14)


def test_bell_diagonal_spectrum_matches_weights():
    rng = np.random.default_rng(0)
    for _ in range(10):
        lam = np.sort(rng.dirichlet(np.ones(4)))[::-1]
        rho = bell_diagonal(BellDiagonalSpec(tuple(lam)))
        w = herm_eig(rho).eigenvalues[::-1]
        np.testing.assert_allclose(w, lam, atol=1e-12)


def test_bell_diagonal_spec_validation():
    with pytest.raises(InvalidSpec, match="descending"):
        BellDiagonalSpec((0.1, 0.7, 0.1, 0.1))
    with pytest.raises(InvalidSpec, match="sum to"):
        BellDiagonalSpec((0.5, 0.3, 0.1, 0.2))
    with pytest.raises(InvalidSpec, match="negative"):
        BellDiagonalSpec((0.7, 0.5, -0.1, -0.1))


def test_mems_rank2_hand_values():
    np.testing.assert_allclose(mems_rank2(1.0), pure_density(bell_state(0)), atol=1e-14)
    want = np.array(
        [
            [0.25, 0, 0, 0.25],
            [0, 0.5, 0, 0],
            [0, 0, 0, 0],
            [0.25, 0, 0, 0.25],
        ]
    )
    np.testing.assert_allclose(mems_rank2(0.5), want, atol=1e-14)
    np.testing.assert_allclose(mems_rank2(0.0), np.diag([0.0, 1.0, 0.0, 0.0]), atol=1e-14)
    with pytest.raises(OutOfRange):
        mems_rank2(1.5)


def test_mems_rank2_is_rank_two():
    w = herm_eig(mems_rank2(0.3)).eigenvalues
    assert np.sum(w > 1e-12) == 2


def test_werner_endpoints_and_weights():
    np.testing.assert_allclose(werner(0.0), np.eye(4) / 4.0, atol=1e-14)
    np.testing.assert_allclose(werner(1.0), pure_density(bell_state(0)), atol=1e-14)
    rho = werner(0.5)
    weights = [float(np.vdot(bell_state(k), rho @ bell_state(k)).real) for k in range(4)]
    np.testing.assert_allclose(weights, [0.625, 0.125, 0.125, 0.125], atol=1e-12)
    with pytest.raises(OutOfRange):
        werner(-0.1)


def test_extremal_family_entry_formulas():
    spec = ExtremalFamilySpec(0.5, 0.5, 0.0, 0.0, 1.0, 0.0)
    rho = extremal_family(spec)
    np.testing.assert_allclose(rho, np.diag([0.5, 0.0, 0.0, 0.5]), atol=1e-14)

    spec = ExtremalFamilySpec(0.4, 0.3, 0.4, -0.1, 1 / np.sqrt(2), 1 / np.sqrt(2))
    rho = extremal_family(spec)
    assert rho[0, 0] == pytest.approx(0.35)
    assert rho[3, 3] == pytest.approx(0.35)
    assert rho[0, 3] == pytest.approx(0.25)
    assert rho[1, 1] == pytest.approx(0.15)
    assert rho[2, 2] == pytest.approx(0.15)
    assert rho[1, 2] == pytest.approx(0.05)


def test_extremal_family_partial_transpose_spectrum():
    specs = [
        ExtremalFamilySpec(0.4, 0.3, 0.4, -0.1, 1 / np.sqrt(2), 1 / np.sqrt(2)),
        ExtremalFamilySpec(0.5, 0.5, 0.0, 0.0, 1.0, 0.0),
    ]
    for spec in specs:
        w = herm_eig(partial_transpose(extremal_family(spec))).eigenvalues
        lam = sorted([spec.lam1, spec.lam2, spec.lam3, spec.lam4])
        np.testing.assert_allclose(w, lam, atol=1e-10)


def test_extremal_family_spec_validation():
    with pytest.raises(InvalidSpec, match="sum to"):
        ExtremalFamilySpec(0.5, 0.5, 0.5, -0.1, 1.0, 0.0)
    with pytest.raises(InvalidSpec, match="lam3"):
        ExtremalFamilySpec(0.6, 0.5, 0.1, -0.2, 1.0, 0.0)
    with pytest.raises(InvalidSpec, match=r"\|a\|"):
        ExtremalFamilySpec(0.5, 0.5, 0.0, 0.0, 1.0, 1.0)


def test_extremal_family_rejects_infeasible_parameters():
    # Valid parameter record whose matrix is indefinite.
    with pytest.raises(NotPSD):
        extremal_family(ExtremalFamilySpec(0.15, 0.15, 0.75, -0.05, 1.0, 0.0))


def test_optimal_family_touches_lower_bound():
    from entbound import optimal_family_spec

    for c in (0.2, 0.5, 0.8):
        rho = extremal_family(optimal_family_spec(c))
        assert concurrence(rho) == pytest.approx(c, abs=1e-9)
        assert negativity(rho) == pytest.approx(negativity_lower_bound(c), abs=1e-9)


def test_sample_random_rank_one_is_pure():
    for seed in range(5):
        rho = sample_random(1, seed)
        assert float(np.trace(rho @ rho).real) == pytest.approx(1.0, abs=1e-10)


def test_sample_random_rank_profile():
    for rank in (1, 2, 3, 4):
        w = herm_eig(sample_random(rank, 42)).eigenvalues
        assert np.sum(w > 1e-10) == rank


def test_sample_random_is_deterministic():
    a = sample_random(3, 123)
    b = sample_random(3, 123)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_random(3, 124))


def test_sample_random_population_is_valid():
    for i in range(200):
        rho = sample_random(1 + i % 4, i)
        assert float(np.trace(rho).real) == pytest.approx(1.0, abs=1e-12)
        assert herm_eig(rho).eigenvalues[0] >= -1e-10


def test_sample_random_rejects_bad_arguments():
    with pytest.raises(OutOfRange):
        sample_random(5, 0)
    with pytest.raises(OutOfRange):
        sample_random(2, -1)


def test_reduced_state_of_product():
    rng = np.random.default_rng(5)
    for _ in range(5):
        ga = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        gb = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        ra = ga @ ga.conj().T
        rb = gb @ gb.conj().T
        ra /= np.trace(ra).real
        rb /= np.trace(rb).real
        rho = make_density(np.kron(ra, rb))
        np.testing.assert_allclose(reduced_state(rho, 0), ra, atol=1e-12)
        np.testing.assert_allclose(reduced_state(rho, 1), rb, atol=1e-12)


def test_json_round_trip_is_exact():
    rho = sample_random(4, 99)
    again = density_from_json(density_to_json(rho))
    assert np.array_equal(rho, again)


def test_json_rejects_malformed_payloads():
    with pytest.raises(ValueError, match="matrix"):
        density_from_json({"rows": []})
    with pytest.raises(ValueError, match="pairs"):
        density_from_json({"matrix": [[1.0] * 4] * 4})


def test_save_and_load_density(tmp_path):
    rho = sample_random(2, 7)
    path = str(tmp_path / "state.json")
    save_density(rho, path)
    assert np.array_equal(load_density(path), rho)
