"""Analytic-versus-empirical comparison harness.

Every closed-form association quantity and every quadrature coverage value
is compared against its Monte Carlo counterpart.  Probabilities are judged
by the z-score of the binomial estimate; coverage additionally by an
absolute-delta cap, since its tolerance is stated in absolute terms.

Downlink coverage is compared in the INTERFERENCE form, which is the exact
analysis of the model the sampler implements; the SCALED_NOISE values are
reported in the header for reference.  The sampler mirrors the analytic
model's Poisson approximation of the active-uplink interferer field, so
agreement establishes implementation fidelity, not physical exactness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import association as assoc_mod
from . import coverage as cov_mod
from . import montecarlo as mc_mod
from .association import Link, Policy, Tier
from .config import ScenarioParams, raw_from_params
from .coverage import DlCoverageForm

MIN_TRIALS_FOR_POWER = 10_000
Z_LIMIT = 3.0
COVERAGE_DELTA_LIMIT = 0.02


@dataclass(frozen=True)
class ValidationRow:
    quantity: str
    analytic: float
    empirical: float
    std_error: float
    z_score: float

    @property
    def delta(self) -> float:
        return self.empirical - self.analytic


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]
    trials: int
    seed: int
    insufficient_power: bool
    notes: tuple[str, ...]

    @property
    def passed(self) -> bool:
        if self.insufficient_power:
            return False
        for row in self.rows:
            if abs(row.z_score) > Z_LIMIT:
                return False
            if row.quantity.startswith("coverage") and abs(row.delta) > COVERAGE_DELTA_LIMIT:
                return False
        return True


def _z(analytic: float, estimate: mc_mod.McEstimate) -> float:
    delta = estimate.mean - analytic
    if estimate.std_error == 0.0:
        return 0.0 if delta == 0.0 else math.inf
    return delta / estimate.std_error


def _row(name: str, analytic: float, estimate: mc_mod.McEstimate) -> ValidationRow:
    return ValidationRow(name, analytic, estimate.mean, estimate.std_error, _z(analytic, estimate))


def run_validation(
    params: ScenarioParams,
    trials: int,
    seed: int = 0,
    coverage_trials: int | None = None,
    load_trials: int | None = None,
) -> ValidationReport:
    """Run every analytic-vs-empirical comparison and collect the rows.

    `trials` drives the association tallies; coverage and per-cell load
    measurements default to budgets that keep the full run in tens of
    seconds at trials = 1e5.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    coverage_trials = coverage_trials if coverage_trials is not None else trials
    load_trials = load_trials if load_trials is not None else max(160, trials // 400)
    rows: list[ValidationRow] = []
    notes: list[str] = []
    has_small = params.small.density > 0.0

    report = assoc_mod.association_report(params)
    freq = mc_mod.empirical_association(params, trials, seed=seed)
    analytic_assoc = {
        "assoc_dec_small_small": report.a_ss_u,
        "assoc_dec_macro_macro": report.a_mm_u,
        "assoc_dec_small_macro": report.a_sm_u,
        "assoc_dec_macro_small": report.a_ms_u,
        "assoc_coupled_small": report.a_ss_d,
        "assoc_coupled_macro": report.a_mm_d,
    }
    for name, value in analytic_assoc.items():
        rows.append(_row(name, value, freq.estimates[name]))
    if freq.resampled > 0.001 * trials:
        notes.append(
            f"warning: {freq.resampled} empty-tier redraws in {trials} trials"
        )

    # Per-cell loads: one pass per association rule covers both tiers; the
    # downlink marginals of the decoupled policy obey the same max-power
    # rule as the coupled policy, so they reuse the same measurement.
    power_loads = mc_mod._mean_loads_by_rule(params, "power", load_trials, seed + 1)
    nearest_loads = mc_mod._mean_loads_by_rule(params, "nearest", load_trials, seed + 2)
    load_specs = [
        ("load_coupled_small", (Policy.COUPLED, Link.UL, Tier.SMALL), power_loads[Tier.SMALL]),
        ("load_coupled_macro", (Policy.COUPLED, Link.UL, Tier.MACRO), power_loads[Tier.MACRO]),
        ("load_dec_ul_small", (Policy.DECOUPLED, Link.UL, Tier.SMALL), nearest_loads[Tier.SMALL]),
        ("load_dec_ul_macro", (Policy.DECOUPLED, Link.UL, Tier.MACRO), nearest_loads[Tier.MACRO]),
        ("load_dec_dl_small", (Policy.DECOUPLED, Link.DL, Tier.SMALL), power_loads[Tier.SMALL]),
        ("load_dec_dl_macro", (Policy.DECOUPLED, Link.DL, Tier.MACRO), power_loads[Tier.MACRO]),
    ]
    for name, (policy, link, tier), estimate in load_specs:
        if tier is Tier.SMALL and not has_small:
            continue
        rows.append(_row(name, assoc_mod.mean_load(params, policy, link, tier), estimate))

    combo_seed = seed + 10
    for policy in (Policy.COUPLED, Policy.DECOUPLED):
        for link in (Link.UL, Link.DL):
            gamma = params.ul_sinr_threshold if link is Link.UL else params.dl_sinr_threshold
            for tier in (Tier.MACRO, Tier.SMALL):
                if tier is Tier.SMALL and not has_small:
                    continue
                if link is Link.UL:
                    analytic = cov_mod.ul_coverage(params, policy, tier, gamma).probability
                else:
                    analytic = cov_mod.dl_coverage(
                        params, policy, tier, gamma, form=DlCoverageForm.INTERFERENCE
                    ).probability
                    scaled = cov_mod.dl_coverage(
                        params, policy, tier, gamma, form=DlCoverageForm.SCALED_NOISE
                    ).probability
                    notes.append(
                        f"scaled_noise dl coverage {policy.value}/{tier.value}: {scaled:.6f}"
                    )
                estimate = mc_mod.empirical_coverage(
                    params, policy, link, tier, gamma, coverage_trials, seed=combo_seed
                )
                rows.append(
                    _row(f"coverage_{link.value}_{policy.value}_{tier.value}", analytic, estimate)
                )
                combo_seed += 1

    return ValidationReport(
        rows=tuple(rows),
        trials=trials,
        seed=seed,
        insufficient_power=trials < MIN_TRIALS_FOR_POWER,
        notes=tuple(notes),
    )


def validation_csv(report: ValidationReport, params: ScenarioParams) -> str:
    lines = [
        "# hetmec validation report",
        f"# trials = {report.trials}",
        f"# seed = {report.seed}",
        "# the sampler mirrors the analytic model's Poisson approximation of the",
        "# active-uplink interferer field; agreement validates the implementation,",
        "# not the physical exactness of that approximation",
        f"# pass = {report.passed}",
    ]
    if report.insufficient_power:
        lines.append(
            f"# insufficient power: trials < {MIN_TRIALS_FOR_POWER}; no verdict"
        )
    for key, value in raw_from_params(params).items():
        lines.append(f"# {key} = {value!r}" if isinstance(value, float) else f"# {key} = {value}")
    for note in report.notes:
        lines.append(f"# {note}")
    lines.append("quantity,analytic,empirical,std_error,z_score")
    for row in report.rows:
        lines.append(
            f"{row.quantity},{row.analytic!r},{row.empirical!r},"
            f"{row.std_error!r},{row.z_score!r}"
        )
    return "\n".join(lines) + "\n"


def write_validation_csv(report: ValidationReport, params: ScenarioParams, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(validation_csv(report, params))
