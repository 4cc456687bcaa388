"""Command line entry point.

    berrylab run CONFIG [--trace PATH] [--out PATH] [--workers K] [--timing]
    berrylab verify [--quick]

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 acceptance failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import expand_sweep, load_config
from .errors import ConfigError, NumericalError
from .runner import run_experiment, write_trace

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_ACCEPTANCE = 3

log = logging.getLogger("berrylab")


def _build_parser():
    parser = argparse.ArgumentParser(prog="berrylab", description="Berry phases of a dipole-driven two-level system")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment")
    run.add_argument("config")
    run.add_argument("--trace", help="write a per-sample CSV trace here")
    run.add_argument("--out", help="write JSON-lines summary here instead of stdout")
    run.add_argument("--workers", type=int, default=None, help="parallel sweep workers")
    run.add_argument("--timing", action="store_true", help="include wall-clock duration in each record")

    verify = sub.add_parser("verify", help="run the acceptance checks")
    verify.add_argument("--quick", action="store_true", help="fewer random draws per check")
    verify.add_argument("--samples", type=int, default=None, help=argparse.SUPPRESS)
    return parser


def _cmd_run(args):
    try:
        cfg = load_config(args.config)
        records = run_experiment(cfg, args.workers)
        if args.trace:
            write_trace(args.trace, [(i, c) for i, _, c in expand_sweep(cfg)])
    except ConfigError as exc:
        log.error("config error at %s", exc)
        return EXIT_CONFIG
    except (NumericalError, ValueError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    lines = "".join(r.to_json(args.timing) + "\n" for r in records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def _cmd_verify(args):
    from .verification import verify_suite

    results = verify_suite(quick=args.quick, samples=args.samples, stream=sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
