"""amrsim: antibiotic-prescribing simulation with resistance dynamics.

A seedable episodic environment where an agent assigns antibiotics (or
none) to a cohort of synthetic patients each step, community resistance
responds through leaky-balloon dynamics, and reward mixes individual
clinical benefit with community resistance burden.
"""

from .balloon import BalloonState, observable_level, reset_balloons, step_balloons
from .config import (
    ConfigError,
    ExperimentConfig,
    OverrideDirective,
    apply_overrides,
    default_config,
    load_umbrella,
    scaffold_defaults,
    serialize_config,
)
from .env import EpisodeFinishedError, ObservationLayout, PrescribingEnv, StepResult
from .experiment import EvalSummary, RunRecord, evaluate, train, tune
from .patients import ObservedPatient, PatientProfile, generate_cohort
from .reward import (
    PatientOutcome,
    RewardModel,
    StepRewardBreakdown,
    combine,
    community_reward,
    individual_mean,
)

__version__ = "0.1.0"

__all__ = [
    "BalloonState",
    "ConfigError",
    "EpisodeFinishedError",
    "EvalSummary",
    "ExperimentConfig",
    "ObservationLayout",
    "ObservedPatient",
    "OverrideDirective",
    "PatientOutcome",
    "PatientProfile",
    "PrescribingEnv",
    "RewardModel",
    "RunRecord",
    "StepResult",
    "StepRewardBreakdown",
    "apply_overrides",
    "combine",
    "community_reward",
    "default_config",
    "evaluate",
    "generate_cohort",
    "individual_mean",
    "load_umbrella",
    "observable_level",
    "reset_balloons",
    "scaffold_defaults",
    "serialize_config",
    "step_balloons",
    "train",
    "tune",
]
