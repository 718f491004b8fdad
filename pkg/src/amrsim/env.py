"""Episodic prescribing environment.

Gym-style reset/step loop over fixed-length episodes. Each step the agent
assigns an action (no-treatment or one antibiotic) to every patient in the
cohort; outcomes are resolved against the current true resistance levels,
the balloons inflate and leak, and the reward is the configured
individual/community mixture.

The agent never sees the true state. Its observation is a flat vector of
the antibiogram snapshot (true sigma corrupted by per-antibiotic bias and
noise, refreshed only every antibiogram_refresh_interval steps) followed by
each patient's corrupted attributes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import rng as rngmod
from .balloon import BalloonState, reset_balloons, step_balloons
from .config import ExperimentConfig, validate_config
from .patients import ObservedPatient, PatientProfile, generate_cohort, observable_extras
from .reward import (
    RewardModel,
    StepRewardBreakdown,
    combine,
    community_reward,
    individual_mean,
)


class EpisodeFinishedError(RuntimeError):
    """step() was called after the episode was truncated."""


@dataclass(frozen=True)
class ObservationLayout:
    """Fixed flat layout: [sigma_hat x A] then per-patient blocks."""
    num_antibiotics: int
    num_patients: int
    extras: tuple[str, ...]

    @property
    def patient_block_size(self) -> int:
        return 1 + len(self.extras)

    @property
    def length(self) -> int:
        return self.num_antibiotics + self.num_patients * self.patient_block_size

    def sigma_block(self, obs: np.ndarray) -> np.ndarray:
        return obs[: self.num_antibiotics]

    def patient_block(self, obs: np.ndarray, slot: int) -> np.ndarray:
        start = self.num_antibiotics + slot * self.patient_block_size
        return obs[start : start + self.patient_block_size]


@dataclass(frozen=True)
class StepResult:
    observation: np.ndarray
    reward: float
    terminated: bool   # always False; there are no absorbing states
    truncated: bool
    info: dict[str, Any]


class PrescribingEnv:
    """Single-owner environment instance; drive from one thread at a time."""

    def __init__(self, config: ExperimentConfig, seed: rngmod.SeedLike | None = None):
        validate_config(config)
        self.config = config
        env_cfg = config.environment
        self.num_patients = env_cfg.num_patients_per_time_step
        self.max_time_steps = env_cfg.max_time_steps
        self.antibiotic_names = config.antibiotic_names
        self.num_antibiotics = len(self.antibiotic_names)
        self.balloon_params = [a.balloon for a in env_cfg.antibiotics]
        if env_cfg.cross_resistance is None:
            self.cross_resistance = None
        else:
            self.cross_resistance = np.asarray(env_cfg.cross_resistance, dtype=np.float64)
        self.refresh_interval = env_cfg.antibiogram_refresh_interval
        self.amr_bias = np.array([a.obs_bias for a in env_cfg.antibiotics])
        self.amr_noise_sd = np.array([a.obs_noise_sd for a in env_cfg.antibiotics])
        self.reward_model = RewardModel(config)
        self.layout = ObservationLayout(
            num_antibiotics=self.num_antibiotics,
            num_patients=self.num_patients,
            extras=observable_extras(config.patient_generator),
        )
        self._active = False
        if seed is not None:
            self.reset(seed)

    def action_space_descriptor(self) -> tuple[int, int]:
        """(number of patient slots, choices per slot including no-treatment)."""
        return self.num_patients, self.num_antibiotics + 1

    # ------------------------------------------------------------------

    def reset(self, seed: rngmod.SeedLike) -> tuple[np.ndarray, dict[str, Any]]:
        self._streams = rngmod.env_streams(seed)
        self.t = 0
        self._active = True
        self.balloons: BalloonState = reset_balloons(self.balloon_params)
        self._new_cohort()
        self._refresh_antibiogram()
        obs = self._assemble_observation()
        info = {
            "true_sigma": self.balloons.sigma.copy(),
            "step": self.t,
        }
        return obs, info

    def step(self, action: Sequence[int]) -> StepResult:
        if not self._active:
            raise EpisodeFinishedError(
                "episode already truncated; call reset() before stepping again"
            )
        actions = self._validate_action(action)

        # 1-2. resolve outcomes against the pre-update sigma, tally counts
        sigma_before = self.balloons.sigma
        outcomes = [
            self.reward_model.resolve_outcome(
                profile, int(a), sigma_before, self._streams["outcomes"]
            )
            for (profile, _), a in zip(self.cohort, actions)
        ]
        counts = np.zeros(self.num_antibiotics, dtype=np.int64)
        for a in actions:
            if a > 0:
                counts[a - 1] += 1

        # 3-5. balloon update, then the reward mixture from post-update sigma
        self.balloons = step_balloons(
            self.balloons, self.balloon_params, self.cross_resistance, counts
        )
        ind = individual_mean(outcomes)
        comm = community_reward(self.balloons.sigma)
        lam = self.config.reward_calculator.lambda_weight
        overall = combine(ind, comm, lam)
        breakdown = StepRewardBreakdown(
            individual_mean=ind, community_mean=comm, overall=overall, outcomes=outcomes
        )

        # 6-9. advance time, next cohort, antibiogram refresh, observation
        self.t += 1
        truncated = self.t >= self.max_time_steps
        if truncated:
            self._active = False
        self._new_cohort()
        if self.t % self.refresh_interval == 0:
            self._refresh_antibiogram()
        obs = self._assemble_observation()
        info = {
            "true_sigma": self.balloons.sigma.copy(),
            "breakdown": breakdown,
            "prescription_counts": counts,
            "step": self.t,
            "true_infected": [p.infected for p, _ in self._prev_cohort],
        }
        return StepResult(
            observation=obs,
            reward=overall,
            terminated=False,
            truncated=truncated,
            info=info,
        )

    # ------------------------------------------------------------------

    @property
    def observed_patients(self) -> list[ObservedPatient]:
        return [o for _, o in self.cohort]

    def _new_cohort(self) -> None:
        self._prev_cohort: list[tuple[PatientProfile, ObservedPatient]] = getattr(
            self, "cohort", []
        )
        self.cohort = generate_cohort(
            self.config.patient_generator,
            self.num_patients,
            self._streams["patients"],
            self._streams["patient_obs"],
        )

    def _refresh_antibiogram(self) -> None:
        # noise is drawn at refresh ticks only: a stale antibiogram is a
        # fixed document, not an independently noisy reading each step
        noise = self.amr_noise_sd * self._streams["amr_obs"].standard_normal(
            self.num_antibiotics
        )
        self.antibiogram = np.clip(self.balloons.sigma + self.amr_bias + noise, 0.0, 1.0)

    def _assemble_observation(self) -> np.ndarray:
        parts = [self.antibiogram]
        for _, observed in self.cohort:
            block = [observed.pi_hat] + [observed.extras[a] for a in self.layout.extras]
            parts.append(np.asarray(block, dtype=np.float64))
        return np.concatenate(parts)

    def _validate_action(self, action: Sequence[int]) -> list[int]:
        actions = list(action)
        if len(actions) != self.num_patients:
            raise ValueError(
                f"action vector has length {len(actions)}, "
                f"expected {self.num_patients}"
            )
        hi = self.num_antibiotics
        for slot, a in enumerate(actions):
            ai = int(a)
            if ai != a or not 0 <= ai <= hi:
                raise ValueError(
                    f"action {a!r} at slot {slot} is outside the valid range [0, {hi}]"
                )
        return [int(a) for a in actions]
