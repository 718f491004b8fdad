#!/usr/bin/env python3
"""Random-search example: tune the tabular agent's learning rate and
discount on a short budget, then print the leaderboard."""

import argparse

from amrsim.config import default_config
from amrsim.experiment import TuningParameter, TuningSpec, tune


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=8)
    parser.add_argument("--episodes-per-trial", type=int, default=20)
    parser.add_argument("--tuning-seed", type=int, default=11)
    parser.add_argument("--parallel", type=int, default=1)
    parser.add_argument("--results-dir", default=None)
    args = parser.parse_args()

    cfg = default_config()
    cfg.environment.max_time_steps = 25
    cfg.patient_generator.pi.value = 0.7
    cfg.training.run_name = "lr_search"

    spec = TuningSpec(
        num_trials=args.trials,
        episodes_per_trial=args.episodes_per_trial,
        tuning_seed=args.tuning_seed,
        parameters=[
            TuningParameter(path="agent_algorithm.learning_rate",
                            kind="log_uniform", low=0.01, high=0.5),
            TuningParameter(path="agent_algorithm.discount",
                            kind="uniform", low=0.8, high=0.99),
        ],
    )
    best, leaderboard = tune(
        cfg, spec, results_dir=args.results_dir, parallel=args.parallel
    )
    print("leaderboard (best first):")
    for row in leaderboard:
        print(
            f"  trial {row['trial']}: objective {row['objective']:8.3f}  "
            f"lr {row['agent_algorithm.learning_rate']:.4f}  "
            f"discount {row['agent_algorithm.discount']:.3f}"
        )
    print(f"\nbest learning rate: {best.agent_algorithm.learning_rate:.4f}")


if __name__ == "__main__":
    main()
