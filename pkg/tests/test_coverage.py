import math

import numpy as np
import pytest

from hetmec.association import Policy, Tier
from hetmec.config import params_from_raw
from hetmec.coverage import (
    DlCoverageForm,
    _ul_coverage_with_density,
    dl_coverage,
    dl_coverage_interference_limited,
    psi,
    thinned_user_density,
    ul_coverage,
    ul_coverage_interference_limited,
)

DEFAULTS = params_from_raw({})
GAMMA_GRID_DB = np.linspace(-20.0, 10.0, 20)


def test_psi_reference_values():
    assert psi(1.0) == pytest.approx(math.pi / 4.0, rel=1e-12)
    assert psi(0.0) == 0.0
    # series evaluation: g * (1 - g/3 + g^2/5 - g^3/7 + ...) at g = 0.1
    g = 0.1
    series = g * sum((-g) ** k / (2 * k + 1) for k in range(30))
    assert psi(0.1) == pytest.approx(series, rel=1e-12)
    assert psi(0.1) == pytest.approx(0.0968534, abs=1e-7)


def test_psi_strictly_increasing():
    grid = np.linspace(0.0, 20.0, 200)
    values = psi(grid)
    assert np.all(np.diff(values) > 0.0)


def test_thinned_user_density_equals_bs_density():
    assert thinned_user_density(DEFAULTS) == pytest.approx(
        DEFAULTS.macro.density + DEFAULTS.small.density, rel=1e-15
    )


@pytest.mark.parametrize("policy", list(Policy))
@pytest.mark.parametrize("tier", list(Tier))
def test_ul_coverage_tends_to_one_at_tiny_threshold(policy, tier):
    cov = ul_coverage(DEFAULTS, policy, tier, 1e-12)
    assert cov.probability == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("form", list(DlCoverageForm))
@pytest.mark.parametrize("tier", list(Tier))
def test_dl_coverage_tends_to_one_at_tiny_threshold(tier, form):
    cov = dl_coverage(DEFAULTS, Policy.COUPLED, tier, 1e-12, form=form)
    assert cov.probability == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("policy", list(Policy))
@pytest.mark.parametrize("tier", list(Tier))
def test_ul_coverage_monotone_in_threshold(policy, tier):
    values = [
        ul_coverage(DEFAULTS, policy, tier, 10 ** (db / 10.0)).probability
        for db in GAMMA_GRID_DB
    ]
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))
    assert all(0.0 <= v <= 1.0 + 1e-9 for v in values)


@pytest.mark.parametrize("form", list(DlCoverageForm))
def test_dl_coverage_monotone_in_threshold(form):
    values = [
        dl_coverage(DEFAULTS, Policy.COUPLED, Tier.MACRO, 10 ** (db / 10.0), form=form).probability
        for db in GAMMA_GRID_DB
    ]
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("policy", list(Policy))
@pytest.mark.parametrize("tier", list(Tier))
@pytest.mark.parametrize("gamma_db", [-15.0, -10.0, 0.0, 5.0])
def test_ul_noise_free_closed_form(policy, tier, gamma_db):
    # With the noise term suppressed the integral has an exact closed form;
    # quadrature must reproduce it to 1e-8.
    gamma = 10 ** (gamma_db / 10.0)
    quiet = params_from_raw({"noise_dbm": -300.0})
    quad = ul_coverage(quiet, policy, tier, gamma, rel_tol=1e-10, abs_tol=1e-14)
    closed = ul_coverage_interference_limited(quiet, policy, tier, gamma)
    assert quad.probability == pytest.approx(closed, abs=1e-8)


def test_dl_interference_form_closed_form():
    gamma = 0.1
    quiet = params_from_raw({"noise_dbm": -300.0})
    for tier in Tier:
        quad = dl_coverage(
            quiet, Policy.COUPLED, tier, gamma, form=DlCoverageForm.INTERFERENCE,
            rel_tol=1e-10, abs_tol=1e-14,
        )
        assert quad.probability == pytest.approx(
            dl_coverage_interference_limited(quiet, gamma), abs=1e-8
        )
        assert quad.probability == pytest.approx(1.0 / (1.0 + psi(gamma)), abs=1e-8)


@pytest.mark.parametrize("form", list(DlCoverageForm))
@pytest.mark.parametrize("tier", list(Tier))
def test_dl_coverage_policy_independent(tier, form):
    # The decoupled downlink marginal normalizer coincides with the coupled
    # association probability, so both policies yield one value.
    gamma = 0.1
    coupled = dl_coverage(DEFAULTS, Policy.COUPLED, tier, gamma, form=form).probability
    decoupled = dl_coverage(DEFAULTS, Policy.DECOUPLED, tier, gamma, form=form).probability
    assert coupled == pytest.approx(decoupled, abs=1e-10)


def test_quadrature_self_consistency_across_tolerances():
    loose = dl_coverage(
        DEFAULTS, Policy.COUPLED, Tier.MACRO, 0.1, rel_tol=1e-6, abs_tol=1e-9
    ).probability
    tight = dl_coverage(
        DEFAULTS, Policy.COUPLED, Tier.MACRO, 0.1, rel_tol=1e-9, abs_tol=1e-13
    ).probability
    assert loose == pytest.approx(tight, abs=1e-5)
    assert 0.0 < tight < 1.0


def test_ul_coverage_monotone_in_interferer_density():
    gamma = 0.1
    values = [
        _ul_coverage_with_density(DEFAULTS, Policy.DECOUPLED, Tier.SMALL, gamma, lam).probability
        for lam in np.linspace(0.0, 5e-5, 8)
    ]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_coverage_result_error_contract():
    cov = ul_coverage(DEFAULTS, Policy.COUPLED, Tier.SMALL, 0.1, rel_tol=1e-8, abs_tol=1e-12)
    assert cov.abs_error_estimate <= max(1e-8 * cov.probability, 1e-12)
    assert 0.0 <= cov.probability <= 1.0 + 10.0 * cov.abs_error_estimate
    assert cov.evaluations >= 15


def test_rejects_nonpositive_threshold_and_empty_tier():
    with pytest.raises(ValueError):
        ul_coverage(DEFAULTS, Policy.COUPLED, Tier.SMALL, 0.0)
    empty = params_from_raw({"lambda_s_per_km2": 0.0})
    with pytest.raises(ValueError):
        ul_coverage(empty, Policy.COUPLED, Tier.SMALL, 0.1)
    with pytest.raises(ValueError):
        dl_coverage(empty, Policy.COUPLED, Tier.SMALL, 0.1)
