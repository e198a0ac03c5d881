"""Command-line entry point for the benchmark runner."""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config, validate_config
from .plots import emit_plots
from .runner import run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dpmatch-bench",
        description="Run graph-matching benchmark scenarios and write CSV results.",
    )
    p.add_argument("--config", help="key=value config file; defaults apply without it")
    p.add_argument("--scenario",
                   help="override the scenario (er, sbm, threshold-pipeline, file-pair)")
    p.add_argument("--out", help="override the output directory")
    p.add_argument("--seed", type=int, help="override the base seed")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for repetitions (default 1)")
    p.add_argument("--plot", action="store_true",
                   help="also render SVG summaries next to the CSV")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.scenario is not None:
        cfg.scenario = args.scenario
    if args.out is not None:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        validate_config(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    results_path = run_scenario(cfg, jobs=args.jobs)
    print(f"wrote {results_path}")
    if args.plot:
        import os

        for path in emit_plots(results_path, os.path.dirname(results_path)):
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
