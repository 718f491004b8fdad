"""Named, independently seeded RNG streams.

Every stochastic consumer gets its own stream derived from (seed, tag) via
numpy SeedSequence, so toggling one noise source cannot perturb draws in
any other. Episode seeds mix (base seed, phase tag, episode index) the
same way, keeping train and eval episode streams disjoint by construction.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# environment sub-stream tags
STREAM_PATIENTS = 11
STREAM_OUTCOMES = 12
STREAM_AMR_OBS = 13
STREAM_PATIENT_OBS = 14

# experiment phase tags for episode seed derivation
PHASE_TAGS = {"train": 1, "eval": 2, "tune": 3, "agent": 4}

SeedLike = int | Sequence[int]


def _entropy(seed: SeedLike) -> list[int]:
    if isinstance(seed, (int, np.integer)):
        return [int(seed)]
    return [int(s) for s in seed]


def stream(seed: SeedLike, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed) + [tag]))


def env_streams(seed: SeedLike) -> dict[str, np.random.Generator]:
    return {
        "patients": stream(seed, STREAM_PATIENTS),
        "outcomes": stream(seed, STREAM_OUTCOMES),
        "amr_obs": stream(seed, STREAM_AMR_OBS),
        "patient_obs": stream(seed, STREAM_PATIENT_OBS),
    }


def episode_seed(base_seed: int, phase: str, index: int) -> list[int]:
    """Entropy list for one episode; feeds the environment's stream factory."""
    return [int(base_seed), PHASE_TAGS[phase], int(index)]
