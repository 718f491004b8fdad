"""Clinical outcome resolution and the individual/community reward mixture.

Per-patient outcome tree (action 0 = no treatment, 1..A = antibiotic):

    not infected                          -> reward 0
    infected, treated with a:
        resistant with prob sigma_a       -> unresolved
        else success with prob clamp(omega_b * e_a)  -> +phi_b * B
        else                              -> unresolved
    infected, untreated:
        recovers with prob rho            -> reward 0
        else                              -> unresolved
    unresolved:
        harm with prob clamp(omega_f * q) -> -phi_f * F
        else                              -> reward 0

The step reward is the weighted mixture

    overall = (1 - lambda) * mean(normalized individual) + lambda * community

where community = -mean(sigma) over antibiotics and individual rewards are
normalized by a divisor derived from config bounds so they land in [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import ExperimentConfig, RewardCalculatorConfig
from .patients import PatientProfile

NO_TREATMENT = 0

RESULT_SUCCESS = "success"
RESULT_SPONTANEOUS = "spontaneous_recovery"
RESULT_UNRESOLVED = "unresolved_no_harm"
RESULT_HARM = "failure_harm"
RESULT_NOT_INFECTED = "not_infected"
RESULT_EXPECTED = "expected_value"


@dataclass(frozen=True)
class PatientOutcome:
    action: int
    infected: bool
    resistant_draw: Optional[bool]
    result: str
    raw_reward: float
    normalized_reward: float


@dataclass(frozen=True)
class StepRewardBreakdown:
    individual_mean: float
    community_mean: float
    overall: float
    outcomes: list[PatientOutcome]


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


class RewardModel:
    """Outcome sampler bound to one experiment's reward and cohort bounds."""

    def __init__(self, config: ExperimentConfig):
        rc = config.reward_calculator
        self.config: RewardCalculatorConfig = rc
        self.efficacy = np.array(
            [
                rc.efficacy_overrides.get(name, rc.base_efficacy)
                for name in config.antibiotic_names
            ],
            dtype=np.float64,
        )
        pg = config.patient_generator
        self.divisor = max(
            pg.phi_b.upper_bound() * rc.base_benefit,
            pg.phi_f.upper_bound() * rc.base_penalty,
            rc.normalization_cap,
        )

    def resolve_outcome(
        self,
        patient: PatientProfile,
        action: int,
        sigma: Sequence[float],
        rng: np.random.Generator,
    ) -> PatientOutcome:
        num_abx = len(self.efficacy)
        if not NO_TREATMENT <= action <= num_abx:
            raise ValueError(
                f"action {action} out of range [0, {num_abx}]"
            )
        if self.config.expected_value_mode:
            raw = self.expected_raw_reward(patient, action, sigma)
            return PatientOutcome(
                action=action,
                infected=patient.infected,
                resistant_draw=None,
                result=RESULT_EXPECTED,
                raw_reward=raw,
                normalized_reward=raw / self.divisor,
            )

        rc = self.config
        resistant: Optional[bool] = None
        if not patient.infected:
            result, raw = RESULT_NOT_INFECTED, 0.0
        else:
            unresolved = False
            result, raw = RESULT_UNRESOLVED, 0.0
            if action == NO_TREATMENT:
                if rng.random() < patient.rho:
                    result, raw = RESULT_SPONTANEOUS, 0.0
                else:
                    unresolved = True
            else:
                a = action - 1
                resistant = bool(rng.random() < sigma[a])
                if resistant:
                    unresolved = True
                elif rng.random() < _clamp01(patient.omega_b * self.efficacy[a]):
                    result = RESULT_SUCCESS
                    raw = patient.phi_b * rc.base_benefit
                else:
                    unresolved = True
            if unresolved:
                if rng.random() < _clamp01(patient.omega_f * rc.base_failure_harm):
                    result = RESULT_HARM
                    raw = -patient.phi_f * rc.base_penalty
                else:
                    result, raw = RESULT_UNRESOLVED, 0.0
        return PatientOutcome(
            action=action,
            infected=patient.infected,
            resistant_draw=resistant,
            result=result,
            raw_reward=raw,
            normalized_reward=raw / self.divisor,
        )

    def expected_raw_reward(
        self, patient: PatientProfile, action: int, sigma: Sequence[float]
    ) -> float:
        """Closed-form expectation of raw_reward, marginal over infection."""
        rc = self.config
        benefit = patient.phi_b * rc.base_benefit
        penalty = patient.phi_f * rc.base_penalty
        p_harm = _clamp01(patient.omega_f * rc.base_failure_harm)
        if action == NO_TREATMENT:
            p_unresolved = 1.0 - patient.rho
            p_success = 0.0
        else:
            a = action - 1
            p_success = (1.0 - sigma[a]) * _clamp01(patient.omega_b * self.efficacy[a])
            p_unresolved = 1.0 - p_success
        return patient.pi * (p_success * benefit - p_unresolved * p_harm * penalty)


def individual_mean(outcomes: Sequence[PatientOutcome]) -> float:
    if not outcomes:
        raise ValueError("cohort must contain at least one outcome")
    return float(np.mean([o.normalized_reward for o in outcomes]))


def community_reward(sigma: Sequence[float]) -> float:
    """Negative mean resistance level across antibiotics; 0 is the optimum."""
    sig = np.asarray(sigma, dtype=np.float64)
    return float(-sig.mean())


def combine(individual: float, community: float, lambda_weight: float) -> float:
    if not 0.0 <= lambda_weight <= 1.0:
        raise ValueError(f"lambda_weight must be in [0, 1], got {lambda_weight}")
    return (1.0 - lambda_weight) * individual + lambda_weight * community
