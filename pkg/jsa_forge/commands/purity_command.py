#!/usr/bin/env python3
"""
Purity command - Schmidt purity of a JSA built from flags or read from a file.
"""

from typing import Any, Dict

from ..core import load_joint_amplitude
from ..physics.spectral_core import build_jsa, purity_integral, purity_schmidt
from .base import BaseCommand, CommandResult


class PurityCommand(BaseCommand):
    """Command to compute the purity of a JSA, optionally with the quadrature oracle."""

    name = "purity"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add purity-specific arguments to parser."""
        parser.add_argument(
            "--input",
            default=None,
            help="JSA file written by 'jsa' (binary or CSV); overrides the spectral flags",
        )
        self.add_spectral_arguments(parser)
        self.add_rs_arguments(parser)
        parser.add_argument(
            "--points", type=int, default=None, help="Grid points per axis"
        )
        parser.add_argument(
            "--oracle",
            action="store_true",
            help="Also compute the purity by direct quadrature of the reduced state",
        )
        self.add_output_arguments(parser, "purity.json")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the purity command."""
        try:
            self.logger.info("🔍 Computing Schmidt purity")
            if args.input:
                jsa = load_joint_amplitude(args.input).normalized()
                source = str(args.input)
            else:
                pmf, pump = self.spectral_functions(args)
                gx, gy = self.grids_for(args, pmf, pump, args.r, args.s)
                jsa = build_jsa(pmf, pump, args.r, args.s, gx, gy)
                source = jsa.label

            schmidt = purity_schmidt(jsa)
            record: Dict[str, Any] = {
                "command": self.name,
                "source": source,
                "purity": schmidt.purity,
                "schmidt": schmidt.to_dict(),
                "boundary_flag": jsa.boundary_flag,
            }
            if args.oracle:
                oracle = purity_integral(jsa)
                record["purity_oracle"] = oracle
                record["oracle_delta"] = abs(oracle - schmidt.purity)
                self.logger.info(f"🔁 Quadrature oracle {oracle:.8f}")

            path = self.output_path(args, "purity.json")
            run = self.run_config(args, output=path)
            self.write_json(path, record, run)
            record["json_file"] = str(path)

            return CommandResult(
                success=True, data=record, message=f"Purity {schmidt.purity:.6f}"
            ).to_dict()

        except Exception as e:
            return self.failure("Purity computation", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format purity result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        lines = [
            "🔍 SCHMIDT PURITY",
            f"Source: {data.get('source')}",
            f"Purity: {data.get('purity', 0.0):.8f}",
        ]
        if "purity_oracle" in data:
            lines.append(
                f"Quadrature oracle: {data['purity_oracle']:.8f} "
                f"(delta {data['oracle_delta']:.2e})"
            )
        if data.get("boundary_flag"):
            lines.append("\n⚠️  JSA touches the grid boundary")
        return "\n".join(lines)
