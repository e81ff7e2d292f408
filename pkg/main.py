import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from chainopuc.config import COMMANDS, RunConfig
from chainopuc.config_loader import load_config
from chainopuc.exceptions import ChainOpucError, InputValidationError
from chainopuc.io.writers import to_jsonable
from chainopuc.logger_config import configure_logging
from chainopuc.runner import SpectralRunner

EXIT_INPUT = 2
EXIT_NUMERICAL = 3

COMMAND_HELP = {
    "pair2alpha": "Map a (c, m) or (c, d) pair to Verblunsky coefficients",
    "alpha2pair": "Recover the (c, m) pair of a Verblunsky sequence",
    "polys": "Coefficients of R_n or Q_n up to degree n, with Szego cross-checks",
    "zeros": "Zeros of W_1 .. W_n by interlacing bisection",
    "quadrature": "Nodes, weights and moments of the discrete measure psi_n",
    "cdf": "Sampled step function psi_n(theta)",
    "periodic": "Bands, gaps and pure points of a periodic Verblunsky sequence",
    "weight": "Sampled absolutely continuous weight of a periodic sequence",
    "transform": "Conjugate, unfold or rotate a sequence",
    "demo": "Closed-form period-2 family next to the generic periodic analysis",
    "check": "Run the invariant check suite",
}


def display_config(config: RunConfig):
    """Display resolved configuration.

    Args:
        config: RunConfig instance
    """
    print("\n" + "=" * 70)
    print("                 RESOLVED CONFIGURATION")
    print("=" * 70)
    print(f"\n## Command: {config.command}")
    print(f"  input: {config.input_source or '(none)'}")
    print(f"  n: {config.n}")
    print(f"  verbose: {config.verbose}")
    print(f"  output_dir: {config.output_dir or '(from config)'}")

    for title, section in (
        ("Chain sequences", config.chain),
        ("Bijection", config.bijection),
        ("Polynomials", config.polynomial),
        ("Zeros", config.zeros),
        ("Quadrature", config.quadrature),
        ("Periodic analysis", config.periodic),
        ("Output", config.output),
        ("Processing", config.processing),
    ):
        print(f"\n## {title}")
        for key, value in vars(section).items():
            print(f"  {key}: {value}")

    print("=" * 70 + "\n")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    # Configuration management flags
    common.add_argument(
        "--profile",
        type=str,
        default="default",
        help="Configuration profile to use (default, fast, strict)",
    )
    common.add_argument(
        "--config",
        dest="config_path",
        type=str,
        help="Path to configuration YAML file (default: config.yaml)",
    )
    common.add_argument(
        "--show-config",
        dest="show_config",
        action="store_true",
        help="Display resolved configuration and exit",
    )
    common.add_argument(
        "-v",
        "--verbose",
        dest="verbose",
        action="store_true",
        help="Enable verbose logging with detailed output",
    )

    # Input / output
    common.add_argument(
        "--input",
        dest="input_source",
        type=str,
        help='Sequence JSON: inline (\'{"c": [...], "m": [...]}\'), a file path, or "-" for stdin',
    )
    common.add_argument("--format", choices=["json", "csv", "both"], help="Output format (default: json)")
    common.add_argument("--output-dir", type=str, help="Directory for CSV/JSON files written with --format both")

    # Numerical settings
    common.add_argument("--n", type=int, help="Degree / level (default: 10)")
    common.add_argument("--tol", type=float, help="Zero bisection tolerance (default: 1e-13)")
    common.add_argument("--grid", type=int, help="Theta samples per unit of period for band scans (default: 4096)")
    common.add_argument("--samples", type=int, help="Theta samples in CSV outputs (default: 512)")
    common.add_argument("--k-max", dest="k_max", type=int, help="Number of moments reported (default: 5)")
    common.add_argument("--workers", type=int, help="Parallel workers for the check suite (1-16, default: 4)")
    common.add_argument("--seed", type=int, help="Seed for the check suite's random pairs")
    return common


def get_args(argv: Optional[List[str]] = None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="chainopuc - OPUC spectral toolkit built on real chain-sequence pairs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Coefficient bijection
  python main.py pair2alpha --input '{"c": [0, 0], "m": [0.25, 0.3333333333333333]}'
  python main.py alpha2pair --input '{"alpha": [[0.5, 0], [0.3333333333333333, 0]]}'
  python main.py pair2alpha --input pair.json | python main.py alpha2pair --input -

  # Zeros, quadrature and the step function
  python main.py zeros --n 2 --input '{"c": [0, 0], "d": [0.5, 0.25]}'
  python main.py quadrature --n 20 --k-max 8 --input pair.json
  python main.py cdf --n 20 --samples 2000 --format csv --input pair.json

  # Periodic coefficients
  python main.py periodic --input '{"alpha": [[0.3, 0.2], [-0.1, 0.4]]}'
  python main.py demo --c 1 --b1 0.3 --b2 0.5 --format both --output-dir out/

  # Transformations
  python main.py transform --op unfold --input pair.json
  python main.py transform --op rotate --beta 0 1 --input alpha.json

  # Invariant suite
  python main.py check --profile fast --workers 8
  python main.py check --show-config

Configuration priority (low to high):
  1. YAML config file (config.yaml)
  2. Environment variables (CHAINOPUC_*)
  3. CLI flags (highest priority)
        """,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    common = _common_parser()

    parsers = {name: subparsers.add_parser(name, parents=[common], help=COMMAND_HELP[name]) for name in COMMANDS}

    parsers["polys"].add_argument("--family", choices=["R", "Q"], default="R", help="Polynomial family")
    parsers["zeros"].add_argument(
        "--support-gap",
        dest="support_gap",
        action="store_true",
        help="Certify the forbidden interval of an alternating-sign pair",
    )
    parsers["transform"].add_argument(
        "--op", choices=["conjugate", "unfold", "rotate"], default="conjugate", help="Transformation to apply"
    )
    parsers["transform"].add_argument(
        "--beta",
        nargs=2,
        type=float,
        metavar=("RE", "IM"),
        help="Unimodular rotation for --op rotate (default: from an alternating constant c)",
    )
    parsers["demo"].add_argument("--c", type=float, default=1.0, help="c of the period-2 family (default: 1)")
    parsers["demo"].add_argument("--b1", type=float, default=0.3, help="b1, |b1| < 1 (default: 0.3)")
    parsers["demo"].add_argument("--b2", type=float, default=0.5, help="b2, |b2| < 1 (default: 0.5)")
    parsers["check"].add_argument("--pairs", type=int, help="Random pairs per check (default: 50)")
    parsers["check"].add_argument("--length", type=int, help="Length of each random pair (default: 40)")

    return parser.parse_args(argv)


def _cli_overrides(args) -> Dict[str, Dict[str, Any]]:
    """Section-keyed overrides for the flags that were given explicitly."""
    mapping = {
        "format": ("output", "format"),
        "samples": ("output", "samples"),
        "tol": ("zeros", "tol"),
        "grid": ("periodic", "grid_per_period"),
        "k_max": ("quadrature", "k_max"),
        "workers": ("processing", "max_workers"),
        "seed": ("processing", "seed"),
        "pairs": ("processing", "check_pairs"),
        "length": ("processing", "check_length"),
    }
    overrides: Dict[str, Dict[str, Any]] = {}
    for flag, (section, key) in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides.setdefault(section, {})[key] = value
    return overrides


def _run_options(args) -> Dict[str, Any]:
    options: Dict[str, Any] = {
        "command": args.command,
        "input_source": args.input_source,
        "verbose": args.verbose,
        "output_dir": args.output_dir,
        "family": getattr(args, "family", "R"),
        "op": getattr(args, "op", "conjugate"),
        "support_gap": getattr(args, "support_gap", False),
    }
    if args.n is not None:
        options["n"] = args.n
    if getattr(args, "beta", None) is not None:
        options["beta"] = tuple(args.beta)
    if args.command == "demo":
        options["example"] = (args.c, args.b1, args.b2)
    return options


def report_error(error: ChainOpucError) -> int:
    """Write the machine-readable error JSON to stderr and return the exit code."""
    payload = {"error": type(error).__name__, "message": error.message, "details": to_jsonable(error.details)}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return EXIT_INPUT if isinstance(error, InputValidationError) else EXIT_NUMERICAL


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main function that runs one chainopuc command.
    """
    args = get_args(argv)

    configure_logging(args.verbose, args.command)

    try:
        overrides = _cli_overrides(args)
        config = load_config(
            profile=args.profile,
            config_path=args.config_path,
            cli_overrides=overrides if overrides else None,
            **_run_options(args),
        )
    except ValueError as e:
        if isinstance(e, ChainOpucError):
            return report_error(e)
        return report_error(InputValidationError(f"Configuration error: {e}", {"profile": args.profile}))

    # Handle --show-config flag
    if args.show_config:
        display_config(config)
        return 0

    try:
        return SpectralRunner(config).run()
    except ChainOpucError as e:
        return report_error(e)


if __name__ == "__main__":
    sys.exit(main())
