"""Command-line interface.

Subcommands: train, evaluate, tune, scaffold, serve. Overrides mirror the
config system: repeatable --s "slot=subconfig.yaml" replaces a whole
section, repeatable --p "dot.path=value" overrides one parameter.

Exit codes: 0 success, 1 config/validation error, 2 runtime failure.
Set AMRSIM_RESULTS_ROOT to relocate the results directory.
"""

from __future__ import annotations

import argparse
import sys

from .config import (
    ConfigError,
    OverrideDirective,
    apply_overrides,
    load_umbrella,
    scaffold_defaults,
)
from .experiment import evaluate, load_tuning_spec, train, tune


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="umbrella config file")
    parser.add_argument(
        "--s", dest="subconfigs", action="append", default=[], metavar="SLOT=FILE",
        help="replace a whole subconfig section (repeatable)",
    )
    parser.add_argument(
        "--p", dest="parameters", action="append", default=[], metavar="PATH=VALUE",
        help="override one config parameter by dot path (repeatable)",
    )
    parser.add_argument("--results-dir", default=None, help="results root directory")


def _resolve_config(args: argparse.Namespace):
    directives = [OverrideDirective.subconfig(s) for s in args.subconfigs]
    directives += [OverrideDirective.parameter(p) for p in args.parameters]
    config = load_umbrella(args.config)
    return apply_overrides(config, directives)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amrsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train an agent and write a results folder")
    _add_config_args(p_train)
    p_train.add_argument("--run-id", default=None, help="pin the run folder name")
    p_train.add_argument("--parallel", type=int, default=1)
    p_train.add_argument("--verbose", action="store_true")

    p_eval = sub.add_parser("evaluate", help="evaluate a saved policy")
    _add_config_args(p_eval)
    p_eval.add_argument("--policy", required=True, help="policy file to load")
    p_eval.add_argument("--num-episodes", type=int, default=10)
    p_eval.add_argument("--seed", type=int, default=None)

    p_tune = sub.add_parser("tune", help="seeded random-search hyperparameter tuning")
    _add_config_args(p_tune)
    p_tune.add_argument("--tuning-spec", required=True, help="tuning spec YAML file")
    p_tune.add_argument("--run-id", default=None, help="pin the tuning folder name")
    p_tune.add_argument("--parallel", type=int, default=1)

    p_scaffold = sub.add_parser("scaffold", help="write default config files")
    p_scaffold.add_argument("target", help="directory to create configs/ in")
    p_scaffold.add_argument("--force", action="store_true", help="overwrite existing files")

    p_serve = sub.add_parser("serve", help="run the interactive session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--results-dir", default=None)
    p_serve.add_argument("--ui", default=None, help="static UI asset directory to serve")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = _resolve_config(args)
            record = train(
                config,
                results_dir=args.results_dir,
                run_id=args.run_id,
                quiet=not args.verbose,
            )
            print(f"run complete: {record.run_dir}")
            if record.final_eval_returns:
                print(f"final eval mean return: {record.final_eval_mean:.4f}")
        elif args.command == "evaluate":
            config = _resolve_config(args)
            summary = evaluate(
                config, args.policy, args.num_episodes, base_seed=args.seed
            )
            print(f"mean return: {summary.mean_return:.4f}")
            print(f"std return:  {summary.std_return:.4f}")
            for i, r in enumerate(summary.returns):
                print(f"episode {i}: {r:.4f}")
        elif args.command == "tune":
            config = _resolve_config(args)
            spec = load_tuning_spec(args.tuning_spec, config)
            best, leaderboard = tune(
                config,
                spec,
                results_dir=args.results_dir,
                run_id=args.run_id,
                parallel=args.parallel,
            )
            print("leaderboard (best first):")
            for row in leaderboard:
                print(f"  trial {row['trial']}: objective {row['objective']:.4f}")
        elif args.command == "scaffold":
            created = scaffold_defaults(args.target, force=args.force)
            for path in created:
                print(f"created {path}")
        elif args.command == "serve":
            import uvicorn

            from .service import create_app

            app = create_app(results_dir=args.results_dir, static_dir=args.ui)
            uvicorn.run(app, host=args.host, port=args.port)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
