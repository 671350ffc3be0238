"""Command-line interface for sftpressure"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from sftpressure import __version__

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

COMMANDS = (
    "pressure-curve",
    "duality",
    "variance",
    "partition",
    "phase-scan",
    "verify",
    "info",
    "table",
)
NEEDS_INPUT = {"pressure-curve", "duality", "variance", "partition", "phase-scan", "info"}
NEEDS_POTENTIAL = NEEDS_INPUT - {"info"}
NEEDS_RANGE = {"pressure-curve", "duality", "phase-scan"}


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs; built from the parsed flags

    Attributes:
        command: One of COMMANDS
        input_path: JSON system document
        potential: Name of ψ in the family φ₀ + tψ
        base: Name of φ₀ (zero when omitted)
        direction: Observable of the variance command (ψ when omitted)
        at: Parameter t of the analyzed potential φ₀ + tψ
        t_min, t_max, steps: Uniform grid of the sampled curve
        a_steps: Slope grid size of the conjugate (steps when omitted)
        tol: Green-Kubo truncation tolerance
        output_path: Artifact path; stdout when omitted
        format: Artifact format (command default when omitted)
        jobs: Worker threads for grid evaluation
        threshold: Relative corner threshold
        n_max: Largest word length of the partition sums
        seed: Seed of the verify suite
    """

    command: str
    input_path: Optional[Path] = None
    potential: Optional[str] = None
    base: Optional[str] = None
    direction: Optional[str] = None
    at: Optional[float] = None
    t_min: float = -5.0
    t_max: float = 5.0
    steps: int = 1001
    a_steps: Optional[int] = None
    tol: float = 1e-12
    output_path: Optional[Path] = None
    format: Optional[str] = None
    jobs: int = 1
    threshold: float = 1e-3
    n_max: int = 10**4
    seed: int = 0

    def validate(self) -> None:
        """Raise ValueError on flag combinations no command accepts"""
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command: {self.command}")
        if self.command in NEEDS_INPUT and self.input_path is None:
            raise ValueError(f"{self.command} requires --input")
        if self.command in NEEDS_POTENTIAL and not self.potential:
            raise ValueError(f"{self.command} requires --potential")
        if self.command in NEEDS_RANGE:
            if not self.t_min < self.t_max:
                raise ValueError(f"Need --t-min < --t-max, got {self.t_min} and {self.t_max}")
            if self.steps < 3:
                raise ValueError(f"--steps must be at least 3, got {self.steps}")
        if self.tol <= 0:
            raise ValueError(f"--tol must be positive, got {self.tol}")
        if self.jobs < 1:
            raise ValueError(f"--jobs must be at least 1, got {self.jobs}")
        if self.a_steps is not None and self.a_steps < 2:
            raise ValueError(f"--a-steps must be at least 2, got {self.a_steps}")
        if self.command == "partition" and self.n_max < 2:
            raise ValueError(f"--n-max must be at least 2, got {self.n_max}")


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser for sftpressure CLI

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="sftpressure",
        description="Pressure, equilibrium states and phase transitions "
        "of subshifts of finite type",
        epilog="For more information and examples, see README.md",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # Flags shared by every command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-v info, -vv debug)",
    )
    common.add_argument("-o", "--output", type=Path, help="Output file (default: stdout)")

    document = argparse.ArgumentParser(add_help=False)
    document.add_argument(
        "--input", required=True, type=Path, metavar="JSON", help="System document"
    )

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument(
        "--potential", required=True, metavar="NAME", help="Potential ψ of the family φ₀ + tψ"
    )
    family.add_argument("--base", metavar="NAME", help="Base potential φ₀ (default: zero)")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--t-min", type=float, default=-5.0, help="Grid start (default: -5)")
    grid.add_argument("--t-max", type=float, default=5.0, help="Grid end (default: 5)")
    grid.add_argument("--steps", type=int, default=1001, help="Grid points (default: 1001)")
    grid.add_argument(
        "--jobs", type=int, default=1, help="Threads for grid evaluation (default: 1)"
    )

    subparsers = parser.add_subparsers(
        dest="command",
        help="Analysis to run",
        required=True,
        metavar="COMMAND",
    )

    curve_parser = subparsers.add_parser(
        "pressure-curve",
        parents=[common, document, family, grid],
        help="Sample t ↦ P(φ₀ + tψ)",
        description="Sample the pressure of a one-parameter family to CSV",
        epilog="""
Examples:
  # Golden mean pressure on [-5, 5]
  sftpressure pressure-curve --input golden.json --potential phi_t \\
      --t-min -5 --t-max 5 --steps 1001 -o curve.csv
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    curve_parser.add_argument("--format", choices=["csv", "json"], default="csv")

    duality_parser = subparsers.add_parser(
        "duality",
        parents=[common, document, family, grid],
        help="Legendre conjugate, biconjugate and duality checks",
        description="Compute I(a) = max_t (a·t − P(t)) and P** on the curve's grid",
    )
    duality_parser.add_argument(
        "--a-steps", type=int, help="Slope grid points (default: --steps)"
    )
    duality_parser.add_argument(
        "--at", type=float, default=0.0, help="t of the subdifferential report (default: 0)"
    )
    duality_parser.add_argument("--format", choices=["csv", "json"], default="csv")

    variance_parser = subparsers.add_parser(
        "variance",
        parents=[common, document, family],
        help="Mean and asymptotic variance of an observable",
        description="Green-Kubo variance under the equilibrium state of φ₀ + tψ",
        epilog="""
Examples:
  sftpressure variance --input golden.json --potential phi_t --at 0 --direction g
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    variance_parser.add_argument("--at", type=float, default=0.0, help="t (default: 0)")
    variance_parser.add_argument(
        "--direction", metavar="NAME", help="Observable (default: --potential)"
    )
    variance_parser.add_argument(
        "--tol", type=float, default=1e-12, help="Series truncation tolerance (default: 1e-12)"
    )

    partition_parser = subparsers.add_parser(
        "partition",
        parents=[common, document, family],
        help="Pressure from partition sums over n-words",
        description="Write log Z_n / n for n = 1 … n_max beside the spectral pressure",
    )
    partition_parser.add_argument("--at", type=float, default=1.0, help="t (default: 1)")
    partition_parser.add_argument(
        "--n-max", type=int, default=10**4, help="Largest word length (default: 10000)"
    )
    partition_parser.add_argument("--format", choices=["csv", "json"], default="csv")

    scan_parser = subparsers.add_parser(
        "phase-scan",
        parents=[common, document, family, grid],
        help="Detect first-order phase transitions",
        description="Report corners of t ↦ P(φ₀ + tψ) as a JSON array",
    )
    scan_parser.add_argument(
        "--threshold", type=float, default=1e-3, help="Relative corner threshold (default: 1e-3)"
    )

    verify_parser = subparsers.add_parser(
        "verify",
        parents=[common],
        help="Run the invariant suite",
        description="Check the numerical invariants and print pass/fail per property",
    )
    verify_parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")

    info_parser = subparsers.add_parser(
        "info",
        parents=[common, document],
        help="Summarize a system",
        description="Print SCCs, primitivity, entropy and mixing time",
    )
    info_parser.add_argument("--format", choices=["text", "json"], default="text")

    subparsers.add_parser(
        "table",
        parents=[common],
        help="Golden mean constants against the published table",
        description="Print computed golden mean constants with discrepancy flags",
    )

    return parser


def config_from_args(parsed_args: argparse.Namespace) -> RunConfig:
    def get(name, default=None):
        return getattr(parsed_args, name, default)

    return RunConfig(
        command=parsed_args.command,
        input_path=get("input"),
        potential=get("potential"),
        base=get("base"),
        direction=get("direction"),
        at=get("at"),
        t_min=get("t_min", -5.0),
        t_max=get("t_max", 5.0),
        steps=get("steps", 1001),
        a_steps=get("a_steps"),
        tol=get("tol", 1e-12),
        output_path=get("output"),
        format=get("format"),
        jobs=get("jobs", 1),
        threshold=get("threshold", 1e-3),
        n_max=get("n_max", 10**4),
        seed=get("seed", 0),
    )


def _dispatch(config: RunConfig) -> int:
    # Import here to avoid circular imports
    from sftpressure import core
    from sftpressure.parser import load_document
    from sftpressure.utils import validate_input_exists
    from sftpressure.verify import InvariantSuite

    if config.command == "verify":
        results = []
        for result in InvariantSuite(seed=config.seed).run():
            print(result.line(), flush=True)
            results.append(result)
        failed = [r.name for r in results if not r.passed]
        if failed:
            print(f"Error: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
            return EXIT_VERIFY
        print(f"All {len(results)} checks passed")
        return EXIT_OK

    if config.command == "table":
        core.summary_table(config.output_path)
        return EXIT_OK

    assert config.input_path is not None
    validate_input_exists(config.input_path)
    doc = load_document(config.input_path)
    potential = config.potential or ""
    t_range = (config.t_min, config.t_max, config.steps)

    if config.command == "pressure-curve":
        core.pressure_curve(
            doc,
            potential,
            *t_range,
            output=config.output_path,
            base=config.base,
            jobs=config.jobs,
            fmt=config.format or "csv",
        )
    elif config.command == "duality":
        core.duality(
            doc,
            potential,
            *t_range,
            a_steps=config.a_steps,
            output=config.output_path,
            base=config.base,
            at=config.at or 0.0,
            jobs=config.jobs,
            fmt=config.format or "csv",
        )
    elif config.command == "variance":
        core.variance(
            doc,
            potential,
            direction=config.direction,
            at=config.at or 0.0,
            base=config.base,
            tol=config.tol,
            output=config.output_path,
        )
    elif config.command == "partition":
        core.partition(
            doc,
            potential,
            config.n_max,
            at=1.0 if config.at is None else config.at,
            base=config.base,
            output=config.output_path,
            fmt=config.format or "csv",
        )
    elif config.command == "phase-scan":
        core.phase_scan(
            doc,
            potential,
            *t_range,
            base=config.base,
            threshold=config.threshold,
            jobs=config.jobs,
            output=config.output_path,
        )
    elif config.command == "info":
        core.info(doc, config.output_path, fmt=config.format or "text")
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Run one command and map failures to exit codes

    Returns:
        0 on success, 2 for invalid input, 3 for numerical failure,
        4 when the invariant suite reports a failed check
    """
    from sftpressure.exceptions import NumericalError

    try:
        config.validate()
        return _dispatch(config)
    except NumericalError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main(args=None):
    """Main CLI entry point

    Args:
        args: Command-line arguments (default: sys.argv[1:])
    """
    parser = create_parser()
    parsed_args = parser.parse_args(args)

    level = {0: logging.WARNING, 1: logging.INFO}.get(parsed_args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run(config_from_args(parsed_args)))
