"""Bound curves, tightness classification, and the boundary-family forms."""

import numpy as np
import pytest

from entbound import (
    BellDiagonalSpec,
    ComplexSigma,
    ExtremalFamilySpec,
    NotEntangled,
    OutOfRange,
    bell_diagonal,
    bell_state,
    check_bounds,
    concurrence,
    eof_from_concurrence,
    er_lower_curve,
    er_mems_closed_form,
    extremal_family,
    family_concurrence,
    family_sigmas,
    is_negativity_tight,
    make_density,
    mems_rank2,
    negativity,
    negativity_lower_bound,
    optimal_family_spec,
    pure_density,
    sample_random,
    werner,
)


def test_negativity_lower_bound_values():
    assert negativity_lower_bound(0.0) == 0.0
    assert negativity_lower_bound(1.0) == pytest.approx(1.0, abs=1e-15)
    assert negativity_lower_bound(0.5) == pytest.approx(np.sqrt(0.5) - 0.5, abs=1e-15)
    assert negativity_lower_bound(0.5) == pytest.approx(0.207107, abs=1e-6)
    with pytest.raises(OutOfRange):
        negativity_lower_bound(-0.2)


def test_negativity_lower_bound_root_consistency():
    for c in np.linspace(0.0, 1.0, 501):
        n = negativity_lower_bound(float(c))
        assert abs(n * n + 2.0 * n * (1.0 - c) - c * c) <= 1e-12


def test_negativity_lower_bound_below_diagonal():
    for c in np.linspace(0.01, 0.99, 99):
        assert negativity_lower_bound(float(c)) < c


def test_tightness_on_bell_diagonal_and_pure_states():
    assert is_negativity_tight(werner(0.8))
    assert is_negativity_tight(bell_diagonal(BellDiagonalSpec((0.6, 0.3, 0.05, 0.05))))
    assert is_negativity_tight(pure_density(bell_state(0)))
    psi = np.array([np.sqrt(0.8), 0.0, 0.0, np.sqrt(0.2)])
    assert is_negativity_tight(pure_density(psi))


def test_tightness_fails_on_the_boundary_family():
    assert not is_negativity_tight(mems_rank2(0.5))
    assert not is_negativity_tight(mems_rank2(0.2))


def test_tightness_requires_entanglement():
    with pytest.raises(NotEntangled, match="partial-transpose"):
        is_negativity_tight(make_density(np.eye(4) / 4.0))


def test_tightness_degenerate_eigenspace_search():
    # With a coarse degeneracy cut-off the least eigenvector is ambiguous
    # and the classifier must search the spanned plane.
    rho = pure_density(bell_state(0))
    assert is_negativity_tight(rho, degeneracy_tol=2.0)


def test_check_bounds_bell_state():
    v = check_bounds(pure_density(bell_state(0)))
    assert v.concurrence == pytest.approx(1.0, abs=1e-12)
    assert v.negativity == pytest.approx(1.0, abs=1e-12)
    assert v.lower_curve == pytest.approx(1.0, abs=1e-12)
    assert v.upper_ok and v.lower_ok and v.upper_tight and v.lower_tight


def test_check_bounds_mems():
    v = check_bounds(mems_rank2(0.5))
    assert v.lower_tight
    assert not v.upper_tight
    assert abs(v.slack_lower) <= 1e-9
    assert v.slack_upper == pytest.approx(0.5 - (np.sqrt(0.5) - 0.5), abs=1e-9)
    assert v.slack_upper == pytest.approx(v.concurrence - v.negativity, abs=1e-15)
    assert v.slack_lower == pytest.approx(v.negativity - v.lower_curve, abs=1e-15)


def test_check_bounds_werner():
    v = check_bounds(werner(0.8))
    assert v.upper_tight
    assert v.negativity == pytest.approx(0.7, abs=1e-9)
    assert v.concurrence == pytest.approx(0.7, abs=1e-9)


def test_check_bounds_separable_state():
    v = check_bounds(make_density(np.eye(4) / 4.0))
    assert v.upper_ok and v.lower_ok and v.upper_tight and v.lower_tight
    assert v.negativity == 0.0
    assert v.lower_curve == 0.0


def test_check_bounds_random_states():
    for i in range(400):
        v = check_bounds(sample_random(1 + i % 4, 4000 + i))
        assert v.upper_ok and v.lower_ok
        assert v.slack_upper >= -1e-9
        assert v.slack_lower >= -1e-9
        if v.upper_tight:
            assert v.slack_upper <= 1e-7


def test_family_sigmas_closed_form_against_direct_measure():
    specs = [
        optimal_family_spec(0.3),
        optimal_family_spec(0.7),
        ExtremalFamilySpec(0.4, 0.3, 0.4, -0.1, 1 / np.sqrt(2), 1 / np.sqrt(2)),
    ]
    for spec in specs:
        assert family_concurrence(spec) == pytest.approx(
            concurrence(extremal_family(spec)), abs=1e-9
        )


def test_family_sigmas_b_zero_case():
    spec = ExtremalFamilySpec(0.5, 0.5, 0.0, 0.0, 1.0, 0.0)
    s = family_sigmas(spec)
    assert s[0] == pytest.approx(0.5, abs=1e-15)
    assert s[2] == pytest.approx(0.5, abs=1e-15)
    assert s[1] == pytest.approx(0.0, abs=1e-15)
    assert s[3] == pytest.approx(0.0, abs=1e-15)
    assert family_concurrence(spec) == 0.0


def test_family_sigmas_rank_two_ppt_case():
    spec = ExtremalFamilySpec(0.6, 0.4, 0.0, 0.0, 1 / np.sqrt(2), 1 / np.sqrt(2))
    s = family_sigmas(spec)
    assert s[0] == pytest.approx(s[2], abs=1e-15)
    assert s[1] == pytest.approx(-s[3], abs=1e-15)
    assert family_concurrence(spec) == 0.0


def test_family_sigmas_complex_domain_error():
    with pytest.raises(ComplexSigma, match="negative"):
        family_sigmas(
            ExtremalFamilySpec(0.15, 0.15, 0.75, -0.05, np.sqrt(0.97), np.sqrt(0.03))
        )


def test_optimal_family_attains_lower_bound():
    for c in (0.1, 0.5, 0.9):
        spec = optimal_family_spec(c)
        assert family_concurrence(spec) == pytest.approx(c, abs=1e-9)
        assert negativity_lower_bound(c) == pytest.approx(2.0 * abs(spec.lam4), abs=1e-9)


def test_er_lower_curve_endpoints_and_waypoint():
    assert er_lower_curve(0.0) == 0.0
    assert er_lower_curve(1.0) == 1.0
    assert er_lower_curve(eof_from_concurrence(0.5)) == pytest.approx(
        er_mems_closed_form(0.5), abs=1e-9
    )
    assert er_lower_curve(0.354579) == pytest.approx(0.122556, abs=1e-5)
    with pytest.raises(OutOfRange):
        er_lower_curve(2.0)


def test_er_lower_curve_monotone():
    grid = np.linspace(0.0, 1.0, 41)
    vals = [er_lower_curve(float(x)) for x in grid]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert all(v <= x + 1e-12 for x, v in zip(grid, vals))
