"""Command line entry point: ``simulate <experiment> [--config PATH] [--out PATH]``."""
import argparse
import sys

from .errors import InvalidInputError
from .experiments import (EXPERIMENTS, SCHEMAS, SYSTEMS, ExperimentConfig, run_experiment,
                          summary, to_csv, write_csv)

EXIT_OK, EXIT_ERROR, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _epilog():
    lines = ["CSV columns per experiment:"]
    for name in EXPERIMENTS:
        lines.append(f"  {name}: {', '.join(SCHEMAS[name])}")
    lines += ["", "Exit codes: 0 ok, 1 runtime error, 2 check failed, 64 usage error."]
    return "\n".join(lines)


def build_parser():
    parser = _Parser(prog="simulate",
                     description="Multiproduct-formula experiments; writes one CSV per run.",
                     epilog=_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="experiment", metavar="<experiment>")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"columns: {', '.join(SCHEMAS[name])}")
        p.add_argument("--config", help="JSON config file (defaults are used when omitted)")
        p.add_argument("--out", help="CSV output path (stdout when omitted)")
        p.add_argument("--system", choices=sorted(SYSTEMS), help="override the configured system")
        p.add_argument("--workers", type=int, help="thread pool size for sweep points")
    return parser


def _load_config(args):
    if args.config:
        cfg = ExperimentConfig.from_json(args.config, args.experiment)
    else:
        cfg = ExperimentConfig.from_dict({}, args.experiment)
    if args.system:
        cfg.system = args.system
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out:
        cfg.output_path = args.out
    cfg.validate()
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.experiment is None:
            raise UsageError("an experiment is required")
        cfg = _load_config(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"simulate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInputError as exc:
        print(f"simulate: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = run_experiment(cfg)
    except Exception as exc:  # noqa: BLE001 - report any numerical failure as a runtime error
        print(f"simulate: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if cfg.output_path:
        try:
            write_csv(result, cfg.output_path)
        except OSError as exc:
            print(f"simulate: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        print(summary(result))
    else:
        sys.stdout.write(to_csv(result))
        print(summary(result), file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
