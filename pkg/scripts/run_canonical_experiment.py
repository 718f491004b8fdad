#!/usr/bin/env python3
"""Train a tabular Q agent on the canonical single-antibiotic scenario and
compare its greedy evaluation returns against the built-in baselines."""

import argparse
import dataclasses

import numpy as np

from amrsim.agents import build_agent
from amrsim.config import default_config
from amrsim.env import PrescribingEnv
from amrsim.experiment import run_episode, train
from amrsim.rng import episode_seed


def canonical_config(seed):
    cfg = default_config()
    cfg.environment.num_patients_per_time_step = 3
    cfg.environment.max_time_steps = 50
    cfg.environment.antibiotics[0].balloon.leak = 0.3
    cfg.patient_generator.pi.value = 0.7
    cfg.reward_calculator.lambda_weight = 0.5
    cfg.agent_algorithm.epsilon_decay_episodes = 250
    cfg.training.run_name = "canonical"
    cfg.training.total_num_training_episodes = 300
    cfg.training.eval_freq_every_n_episodes = 50
    cfg.training.save_freq_every_n_episodes = 100
    cfg.training.seed = seed
    return cfg


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--eval-episodes", type=int, default=30)
    parser.add_argument("--results-dir", default=None)
    args = parser.parse_args()

    cfg = canonical_config(args.seed)
    record = train(cfg, results_dir=args.results_dir)
    print(f"run folder: {record.run_dir}")

    env = PrescribingEnv(cfg)
    trained = build_agent(cfg.agent_algorithm, env.layout)
    from amrsim.agents import load_policy

    trained = load_policy(record.checkpoints[-1], env.layout)

    baselines = {"tabular_q": trained}
    for name in ("random", "never_treat", "greedy_heuristic"):
        baselines[name] = build_agent(
            dataclasses.replace(cfg.agent_algorithm, algorithm=name), env.layout
        )

    print(f"\ngreedy evaluation over {args.eval_episodes} shared seeds:")
    for name, agent in baselines.items():
        returns = [
            run_episode(env, agent, episode_seed(args.seed, "eval", i),
                        explore=False, learn=False).episode_return
            for i in range(args.eval_episodes)
        ]
        print(f"  {name:18s} mean {np.mean(returns):8.3f}  sd {np.std(returns):6.3f}")


if __name__ == "__main__":
    main()
