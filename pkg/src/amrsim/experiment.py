"""Training, evaluation, and random-search tuning entry points.

Each training run writes an append-only results folder:

    results/<run_name>_<timestamp>/
        resolved_config.yaml
        metrics.csv
        trajectories.jsonl        (if training.log_patient_trajectories)
        checkpoints/episode_NNNNN.json, checkpoints/final.json
        summary.json

run_id defaults to run_name plus a UTC timestamp; pass an explicit run_id
to pin it for byte-reproducible runs. Episode seeds are derived from
(training.seed, phase tag, episode index), so train and eval episode
streams never overlap.
"""

from __future__ import annotations

import copy
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

import numpy as np
import yaml

from .agents import Agent, TabularQAgent, build_agent, load_policy
from .config import (
    ConfigError,
    ExperimentConfig,
    serialize_config,
    set_by_path,
    validate_config,
)
from .env import PrescribingEnv
from .rng import episode_seed

RESULTS_ENV_VAR = "AMRSIM_RESULTS_ROOT"


def results_root(override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    return Path(os.environ.get(RESULTS_ENV_VAR, "results"))


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# Episode rollout
# ---------------------------------------------------------------------------

@dataclass
class EpisodeStats:
    episode_return: float
    individual_mean: float
    community_mean: float
    final_sigma: np.ndarray
    steps: Optional[list[dict]] = None


def run_episode(
    env: PrescribingEnv,
    agent: Agent,
    seed_entries: list[int],
    explore: bool,
    learn: bool,
    record_steps: bool = False,
) -> EpisodeStats:
    obs, _ = env.reset(seed_entries)
    total = 0.0
    ind_terms: list[float] = []
    comm_terms: list[float] = []
    steps: Optional[list[dict]] = [] if record_steps else None
    truncated = False
    while not truncated:
        action = agent.act(obs, explore=explore)
        result = env.step(action)
        if learn:
            agent.learn(obs, action, result.reward, result.observation, result.truncated)
        total += result.reward
        bd = result.info["breakdown"]
        ind_terms.append(bd.individual_mean)
        comm_terms.append(bd.community_mean)
        if steps is not None:
            steps.append(
                {
                    "step": result.info["step"],
                    "actions": [int(a) for a in action],
                    "reward": result.reward,
                    "individual": bd.individual_mean,
                    "community": bd.community_mean,
                    "true_sigma": [float(s) for s in result.info["true_sigma"]],
                    "prescription_counts": [
                        int(c) for c in result.info["prescription_counts"]
                    ],
                    "outcomes": [o.result for o in bd.outcomes],
                }
            )
        obs = result.observation
        truncated = result.truncated
    return EpisodeStats(
        episode_return=total,
        individual_mean=float(np.mean(ind_terms)),
        community_mean=float(np.mean(comm_terms)),
        final_sigma=env.balloons.sigma.copy(),
        steps=steps,
    )


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    run_id: str
    run_dir: Path
    config: ExperimentConfig
    metrics: list[dict[str, Any]]
    checkpoints: list[Path]
    final_eval_returns: list[float] = field(default_factory=list)

    @property
    def final_eval_mean(self) -> float:
        if not self.final_eval_returns:
            return math.nan
        return float(np.mean(self.final_eval_returns))


def _metrics_header(names: list[str]) -> str:
    sigma_cols = ",".join(f"final_sigma_{n}" for n in names)
    return f"episode,phase,eval_episode,episode_return,individual_mean,community_mean,{sigma_cols}"


def _metrics_line(row: dict[str, Any], names: list[str]) -> str:
    sigmas = ",".join(_fmt(s) for s in row["final_sigma"])
    return (
        f"{row['episode']},{row['phase']},{row['eval_episode']},"
        f"{_fmt(row['episode_return'])},{_fmt(row['individual_mean'])},"
        f"{_fmt(row['community_mean'])},{sigmas}"
    )


def train(
    config: ExperimentConfig,
    results_dir: str | Path | None = None,
    run_id: str | None = None,
    quiet: bool = True,
) -> RunRecord:
    validate_config(config)
    tr = config.training
    if run_id is None:
        run_id = f"{tr.run_name}_{_timestamp()}"
    root = results_root(results_dir)
    run_dir = root / run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    ckpt_dir = run_dir / "checkpoints"
    ckpt_dir.mkdir(exist_ok=True)
    (run_dir / "resolved_config.yaml").write_text(serialize_config(config), encoding="utf-8")

    env = PrescribingEnv(config)
    agent = build_agent(config.agent_algorithm, env.layout)
    names = config.antibiotic_names

    metrics: list[dict[str, Any]] = []
    checkpoints: list[Path] = []
    final_eval_returns: list[float] = []
    traj_path = run_dir / "trajectories.jsonl"
    traj_file = open(traj_path, "w", encoding="utf-8") if tr.log_patient_trajectories else None
    eval_counter = 0
    try:
        for ep in range(tr.total_num_training_episodes):
            if isinstance(agent, TabularQAgent):
                agent.set_epsilon_for_episode(ep)
            stats = run_episode(
                env,
                agent,
                episode_seed(tr.seed, "train", ep),
                explore=True,
                learn=True,
                record_steps=traj_file is not None,
            )
            metrics.append(
                {
                    "episode": ep,
                    "phase": "train",
                    "eval_episode": "",
                    "episode_return": stats.episode_return,
                    "individual_mean": stats.individual_mean,
                    "community_mean": stats.community_mean,
                    "final_sigma": stats.final_sigma,
                }
            )
            if traj_file is not None:
                for step in stats.steps or []:
                    record = {"episode": ep, **step}
                    traj_file.write(json.dumps(record, sort_keys=True) + "\n")
            if not quiet:
                print(f"episode {ep}: return {stats.episode_return:.4f}")

            if (ep + 1) % tr.eval_freq_every_n_episodes == 0:
                block_returns = []
                for j in range(tr.num_eval_episodes):
                    estats = run_episode(
                        env,
                        agent,
                        episode_seed(tr.seed, "eval", eval_counter),
                        explore=False,
                        learn=False,
                    )
                    eval_counter += 1
                    block_returns.append(estats.episode_return)
                    metrics.append(
                        {
                            "episode": ep,
                            "phase": "eval",
                            "eval_episode": j,
                            "episode_return": estats.episode_return,
                            "individual_mean": estats.individual_mean,
                            "community_mean": estats.community_mean,
                            "final_sigma": estats.final_sigma,
                        }
                    )
                final_eval_returns = block_returns

            if (ep + 1) % tr.save_freq_every_n_episodes == 0:
                ckpt = ckpt_dir / f"episode_{ep + 1:05d}.json"
                agent.save_policy(ckpt)
                checkpoints.append(ckpt)
    finally:
        if traj_file is not None:
            traj_file.close()

    final_ckpt = ckpt_dir / "final.json"
    agent.save_policy(final_ckpt)
    checkpoints.append(final_ckpt)

    lines = [_metrics_header(names)] + [_metrics_line(r, names) for r in metrics]
    (run_dir / "metrics.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    summary = {
        "run_id": run_id,
        "run_name": tr.run_name,
        "total_num_training_episodes": tr.total_num_training_episodes,
        "antibiotics": names,
        "final_eval_returns": final_eval_returns,
        "final_eval_mean_return": (
            float(np.mean(final_eval_returns)) if final_eval_returns else None
        ),
        "checkpoints": [str(p.relative_to(run_dir)) for p in checkpoints],
    }
    (run_dir / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return RunRecord(
        run_id=run_id,
        run_dir=run_dir,
        config=config,
        metrics=metrics,
        checkpoints=checkpoints,
        final_eval_returns=final_eval_returns,
    )


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass
class EvalSummary:
    mean_return: float
    std_return: float
    returns: list[float]


def evaluate(
    config: ExperimentConfig,
    policy_path: str | Path,
    num_episodes: int,
    base_seed: int | None = None,
) -> EvalSummary:
    validate_config(config)
    if num_episodes < 1:
        raise ConfigError("num_episodes must be >= 1")
    env = PrescribingEnv(config)
    agent = load_policy(policy_path, env.layout)
    seed = config.training.seed if base_seed is None else base_seed
    returns = []
    for i in range(num_episodes):
        stats = run_episode(
            env, agent, episode_seed(seed, "eval", i), explore=False, learn=False
        )
        returns.append(stats.episode_return)
    return EvalSummary(
        mean_return=float(np.mean(returns)),
        std_return=float(np.std(returns)),
        returns=returns,
    )


# ---------------------------------------------------------------------------
# Random-search tuning
# ---------------------------------------------------------------------------

@dataclass
class TuningParameter:
    path: str
    kind: str  # uniform | log_uniform | int | categorical
    low: float = 0.0
    high: float = 1.0
    choices: list[Any] = field(default_factory=list)

    def sample(self, rng: np.random.Generator) -> Any:
        if self.kind == "uniform":
            return float(rng.uniform(self.low, self.high))
        if self.kind == "log_uniform":
            return float(np.exp(rng.uniform(np.log(self.low), np.log(self.high))))
        if self.kind == "int":
            return int(rng.integers(int(self.low), int(self.high) + 1))
        if self.kind == "categorical":
            return self.choices[int(rng.integers(len(self.choices)))]
        raise ConfigError(f"unknown tuning parameter kind {self.kind!r}")


@dataclass
class TuningSpec:
    num_trials: int
    episodes_per_trial: int
    tuning_seed: int
    parameters: list[TuningParameter]


def load_tuning_spec(path: str | Path, base_config: ExperimentConfig) -> TuningSpec:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"tuning spec not found: {path}")
    doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: tuning spec must be a mapping")
    params = []
    for i, entry in enumerate(doc.get("parameters", [])):
        p = TuningParameter(
            path=entry["path"],
            kind=entry.get("kind", "uniform"),
            low=float(entry.get("low", 0.0)),
            high=float(entry.get("high", 1.0)),
            choices=entry.get("choices", []),
        )
        if p.kind in ("uniform", "log_uniform", "int") and not p.low < p.high:
            raise ConfigError(f"tuning parameter {p.path}: low must be < high")
        if p.kind == "log_uniform" and p.low <= 0:
            raise ConfigError(f"tuning parameter {p.path}: log range requires low > 0")
        if p.kind == "categorical" and not p.choices:
            raise ConfigError(f"tuning parameter {p.path}: empty choices")
        params.append(p)
    if not params:
        raise ConfigError(f"{path}: tuning spec declares no parameters")
    spec = TuningSpec(
        num_trials=int(doc.get("num_trials", 10)),
        episodes_per_trial=int(doc.get("episodes_per_trial", 10)),
        tuning_seed=int(doc.get("tuning_seed", 0)),
        parameters=params,
    )
    validate_tuning_spec(spec, base_config)
    return spec


def validate_tuning_spec(spec: TuningSpec, base_config: ExperimentConfig) -> None:
    if spec.num_trials < 1:
        raise ConfigError("tuning spec num_trials must be >= 1")
    if spec.episodes_per_trial < 1:
        raise ConfigError("tuning spec episodes_per_trial must be >= 1")
    probe = copy.deepcopy(base_config)
    for p in spec.parameters:
        # resolve each path against the schema before any trial runs
        set_by_path(probe, p.path, p.sample(np.random.default_rng(0)))


def _trial_config(
    base: ExperimentConfig, spec: TuningSpec, trial: int
) -> tuple[ExperimentConfig, dict[str, Any]]:
    rng = np.random.default_rng(np.random.SeedSequence([spec.tuning_seed, trial]))
    cfg = copy.deepcopy(base)
    sampled: dict[str, Any] = {}
    for p in spec.parameters:
        value = p.sample(rng)
        set_by_path(cfg, p.path, value)
        sampled[p.path] = value
    cfg.training.total_num_training_episodes = spec.episodes_per_trial
    # one eval block at the end of the trial budget scores the trial
    cfg.training.eval_freq_every_n_episodes = spec.episodes_per_trial
    cfg.training.save_freq_every_n_episodes = spec.episodes_per_trial
    validate_config(cfg)
    return cfg, sampled


def _run_trial(args: tuple[ExperimentConfig, Path, int]) -> float:
    cfg, tune_dir, trial = args
    record = train(cfg, results_dir=tune_dir, run_id=f"trial_{trial:03d}")
    return record.final_eval_mean


def tune(
    base_config: ExperimentConfig,
    spec: TuningSpec,
    results_dir: str | Path | None = None,
    run_id: str | None = None,
    parallel: int = 1,
) -> tuple[ExperimentConfig, list[dict[str, Any]]]:
    validate_config(base_config)
    validate_tuning_spec(spec, base_config)
    if run_id is None:
        run_id = f"tune_{base_config.training.run_name}_{_timestamp()}"
    tune_dir = results_root(results_dir) / run_id
    tune_dir.mkdir(parents=True, exist_ok=True)

    trials = [_trial_config(base_config, spec, t) for t in range(spec.num_trials)]
    jobs = [(cfg, tune_dir, t) for t, (cfg, _) in enumerate(trials)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            objectives = list(pool.map(_run_trial, jobs))
    else:
        objectives = [_run_trial(job) for job in jobs]

    leaderboard = [
        {"trial": t, "objective": objectives[t], **trials[t][1]}
        for t in range(spec.num_trials)
    ]
    leaderboard.sort(key=lambda row: (-row["objective"], row["trial"]))

    param_paths = [p.path for p in spec.parameters]
    header = "rank,trial,objective," + ",".join(param_paths)
    lines = [header]
    for rank, row in enumerate(leaderboard):
        vals = ",".join(str(row[p]) for p in param_paths)
        lines.append(f"{rank},{row['trial']},{_fmt(row['objective'])},{vals}")
    (tune_dir / "leaderboard.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    best_trial = leaderboard[0]["trial"]
    best_config = trials[best_trial][0]
    (tune_dir / "best_config.yaml").write_text(
        serialize_config(best_config), encoding="utf-8"
    )
    return best_config, leaderboard
