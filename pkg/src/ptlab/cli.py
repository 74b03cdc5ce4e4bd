"""Command-line front end: run or validate one JSON config.

Exit codes: 0 success, 2 config error, 3 numerical failure (eigensolver
non-convergence or propagation overflow).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .config import ConfigError, load_config
from .scans import run_to_files
from .spectra import EigensolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _thread_count(flag_value: int | None) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env = os.environ.get("PTLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"ptlab: ignoring non-integer PTLAB_THREADS={env!r}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptlab",
        description="Spectra, effective couplings, and breaking thresholds "
        "for modulated non-Hermitian lattices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run a scenario and write CSV output")
    run_parser.add_argument("config", help="path to the JSON run config")
    run_parser.add_argument("--out", help="output CSV path (overrides config 'output')")
    run_parser.add_argument(
        "--threads", type=int, help="worker threads for grid scans (or PTLAB_THREADS)"
    )
    run_parser.add_argument(
        "--plot", action="store_true", help="also render figures next to the CSV"
    )
    validate_parser = sub.add_parser("validate", help="check a config without running it")
    validate_parser.add_argument("config", help="path to the JSON run config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except OSError as exc:
        print(f"ptlab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"ptlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        print(f"OK: scenario={config.scenario} n_sites={config.lattice.n_sites} "
              f"tones={len(config.modulation.tones)}")
        return EXIT_OK

    out = args.out or config.output
    if not out:
        print("ptlab: no output path: pass --out or set 'output' in the config",
              file=sys.stderr)
        return EXIT_CONFIG
    try:
        paths, overflow = run_to_files(
            config, out, threads=_thread_count(args.threads), plot=args.plot
        )
    except EigensolverError as exc:
        print(f"ptlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"ptlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in paths:
        print(path)
    if overflow:
        print("ptlab: propagation overflowed (broken phase); trace marked 'overflow'",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
