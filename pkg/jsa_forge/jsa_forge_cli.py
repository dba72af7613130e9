#!/usr/bin/env python3
"""
jsa-forge command-line interface.

Batch commands for joint spectral amplitudes of photon-pair sources:

- jsa              build a JSA on a grid (linear or full dispersion) and its purity
- purity           Schmidt purity of a JSA, optionally with the quadrature oracle
- map-check        compare the oscillator-mapped JSA with direct sampling
- optimize         optimize the pump ket at a fixed mixing angle
- gvd-sweep        purity against r with and without group-velocity dispersion
- fc-convert       frequency-conversion transfer function and its purity
- gaussian-purity  closed-form purity of a Gaussian x Gaussian JSA

Exit codes: 0 success, 1 unexpected error, 2 input validation failure,
3 numerical failure, 130 interrupted.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type

from .commands.base import BaseCommand
from .commands.fc_convert_command import FcConvertCommand
from .commands.gaussian_purity_command import GaussianPurityCommand
from .commands.gvd_sweep_command import GvdSweepCommand
from .commands.jsa_command import JsaCommand
from .commands.map_check_command import MapCheckCommand
from .commands.optimize_command import OptimizeCommand
from .commands.purity_command import PurityCommand
from .core import LOG_LEVEL, OUTPUT_DIR, VERSION, get_logger, setup_logging

# (command class, one-line help) in --help order
BUILTIN_COMMANDS: Tuple[Tuple[Type[BaseCommand], str], ...] = (
    (JsaCommand, "Build a joint spectral amplitude and compute its purity"),
    (PurityCommand, "Schmidt purity of a JSA from flags or a file"),
    (MapCheckCommand, "Verify the oscillator mapping against the grid JSA"),
    (OptimizeCommand, "Optimize the pump ket for separability"),
    (GvdSweepCommand, "Sweep purity over r with a dispersion model"),
    (FcConvertCommand, "Frequency-conversion transfer function"),
    (GaussianPurityCommand, "Closed-form Gaussian purity and separability"),
)

EPILOG = """
Examples:
  # Sinc phase matching with a Gaussian pump
  %(prog)s jsa --pmf sinc --pump gaussian --r 1 --s -1

  # Separable Gaussian case (rs = -1)
  %(prog)s gaussian-purity --r 2 --s -0.5 --check

  # Oscillator mapping check
  %(prog)s map-check --pmf gaussian --r 1 --s -1 --n-trunc 20

  # Pump optimization at theta = pi/32
  %(prog)s optimize --pmf sinc --theta 1/32pi --restarts 80 --seed 7
  %(prog)s optimize --fast --survey

  # Purity against r with the packaged KTP model
  %(prog)s gvd-sweep --r-min 2 --r-max 30 --r-points 15

Global flags go before the command. Angles accept radians or fractions such
as 3/32pi. JSA_FORGE_THREADS caps the number of worker threads.
"""


class CommandRegistry:
    """Name to command-class lookup for the CLI."""

    def __init__(self) -> None:
        self._commands: Dict[str, Type[BaseCommand]] = {}
        self._help: Dict[str, str] = {}
        for command_class, help_text in BUILTIN_COMMANDS:
            self.register(command_class.name, command_class, help_text)

    def register(
        self, name: str, command_class: Any, help_text: Optional[str] = None
    ) -> None:
        """Add a command under ``name``.

        Raises:
            ValueError: If the name is empty or taken, or the class lacks
                ``execute`` / ``add_parser_arguments``.
        """
        if not isinstance(name, str) or not name:
            raise ValueError("Command name must be a non-empty string")
        if name in self._commands:
            raise ValueError(f"Command '{name}' is already registered")
        missing = [
            method
            for method in ("execute", "add_parser_arguments")
            if not callable(getattr(command_class, method, None))
        ]
        if missing:
            raise ValueError(
                f"{getattr(command_class, '__name__', command_class)!r} does not "
                f"implement the BaseCommand interface (missing {', '.join(missing)})"
            )
        self._commands[name] = command_class
        if help_text:
            self._help[name] = help_text

    def get_command_class(self, name: str) -> Type[BaseCommand]:
        """Class registered under ``name``.

        Raises:
            ValueError: For unknown names; the message lists the known ones.
        """
        try:
            return self._commands[name]
        except KeyError:
            known = ", ".join(self.get_available_commands())
            raise ValueError(f"Unknown command '{name}' (choose from: {known})") from None

    def get_help(self, name: str) -> Optional[str]:
        return self._help.get(name)

    def get_available_commands(self) -> List[str]:
        return sorted(self._commands)

    def create_command(
        self,
        name: str,
        output_dir: Optional[Path] = None,
        logger: Optional[Any] = None,
    ) -> BaseCommand:
        """Instantiate a registered command.

        Raises:
            ValueError: If the name is unknown or the constructor fails.
        """
        command_class = self.get_command_class(name)
        try:
            return command_class(output_dir, logger)
        except Exception as e:
            raise ValueError(f"Cannot instantiate command '{name}': {e}") from e


class JsaForgeCLI:
    """jsa-forge command-line interface."""

    def __init__(self) -> None:
        self.logger = get_logger(__name__)
        self.command_registry = CommandRegistry()
        self.start_time = time.time()
        self._last_command: Optional[BaseCommand] = None

    def create_parser(self) -> argparse.ArgumentParser:
        """Top-level parser with one subparser per registered command."""
        parser = argparse.ArgumentParser(
            prog="jsa-forge",
            description="Joint spectral amplitude toolkit",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog=EPILOG,
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
        parser.add_argument(
            "--log-level",
            choices=["DEBUG", "INFO", "WARNING", "ERROR"],
            default=LOG_LEVEL,
            help=f"Log verbosity (default: {LOG_LEVEL})",
        )
        parser.add_argument(
            "--json", action="store_true", help="Print the result record as JSON"
        )
        parser.add_argument(
            "--quiet", "-q", action="store_true", help="Print nothing unless the run fails"
        )
        parser.add_argument(
            "--timing", action="store_true", help="Report wall-clock time of the run"
        )
        parser.add_argument(
            "--output-dir",
            type=Path,
            default=OUTPUT_DIR,
            help=f"Directory for result files (default: {OUTPUT_DIR})",
        )

        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        registry = self.command_registry
        for name in registry.get_available_commands():
            sub = subparsers.add_parser(
                name,
                help=registry.get_help(name),
                formatter_class=argparse.ArgumentDefaultsHelpFormatter,
            )
            try:
                registry.get_command_class(name)().add_parser_arguments(sub)
            except Exception as e:
                self.logger.warning(f"⚠️  Skipping flags of '{name}': {e}")
        return parser

    def execute_command(self, args: Any) -> Dict[str, Any]:
        """Run the selected command and return its CommandResult dict."""
        if not args.command:
            return {
                "success": False,
                "exit_code": 2,
                "error": "No command given; run with --help for the list.",
            }

        try:
            command = self.command_registry.create_command(
                args.command, args.output_dir, self.logger
            )
        except ValueError as e:
            return {"success": False, "exit_code": 2, "error": str(e)}
        self._last_command = command

        try:
            result = command.execute(args)
        except Exception as e:
            self.logger.error(f"'{args.command}' raised: {e}", exc_info=True)
            return {"success": False, "error": f"Unhandled error in '{args.command}': {e}"}

        if not isinstance(result, dict):
            return {
                "success": False,
                "error": f"'{args.command}' returned {type(result).__name__}, not a dict",
            }
        if args.timing:
            result["execution_time"] = round(time.time() - self.start_time, 3)
        return result

    def format_output(self, result: Dict[str, Any], args: Any) -> str:
        """Text (or JSON) shown to the user for ``result``."""
        if args.json:
            return json.dumps(result, indent=2, default=str)

        timing = ""
        if "execution_time" in result:
            timing = f"⏱️  Execution time: {result['execution_time']}s"

        formatter = getattr(self._last_command, "format_text_output", None)
        if formatter is not None:
            try:
                text = str(formatter(result))
                return f"{text}\n{timing}" if timing else text
            except Exception as e:
                self.logger.error(f"Cannot format '{args.command}' output: {e}", exc_info=True)

        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"
        parts = []
        if result.get("message"):
            parts.append(f"✅ {result['message']}")
        if result.get("data"):
            parts.append(json.dumps(result["data"], indent=2, default=str))
        if timing:
            parts.append(timing)
        return "\n".join(parts) or "✅ Done"

    def run(self, argv: Optional[List[str]] = None) -> None:
        """Parse ``argv``, run the command, print and exit with its code."""
        args = self.create_parser().parse_args(argv)
        setup_logging(args.log_level)
        if not args.quiet:
            self.logger.info(f"jsa-forge v{VERSION}, writing to {args.output_dir}")

        result = self.execute_command(args)
        succeeded = bool(result.get("success", False))
        if succeeded and args.quiet:
            sys.exit(0)
        print(self.format_output(result, args))
        sys.exit(0 if succeeded else int(result.get("exit_code") or 1))


def main() -> None:
    """Console entry point."""
    try:
        JsaForgeCLI().run()
    except KeyboardInterrupt:
        print("\n⚠️  Operation cancelled by user")
        sys.exit(130)
    except Exception as e:
        get_logger(__name__).error(f"Unexpected error: {e}", exc_info=True)
        print(f"❌ Unexpected error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
