#!/usr/bin/env python3
"""
FC-convert command - frequency-conversion transfer function from JSA parameters.

Builds phi(r x - s y) gamma*(x - y), writes it as a matrix and compares its
purity with the SPDC JSA built from the conjugated pump.
"""

from typing import Any, Dict

from ..physics.spectral_core import build_jsa, purity_schmidt, to_frequency_conversion
from .base import BaseCommand, CommandResult


class FcConvertCommand(BaseCommand):
    """Command to build a frequency-conversion transfer function."""

    name = "fc-convert"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add fc-convert arguments to parser."""
        self.add_spectral_arguments(parser)
        self.add_rs_arguments(parser)
        parser.add_argument(
            "--points", type=int, default=None, help="Grid points per axis"
        )
        parser.add_argument(
            "--format",
            choices=["binary", "csv"],
            default="binary",
            help="Matrix file format (default: binary)",
        )
        self.add_output_arguments(parser, "fc_transfer")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the fc-convert command."""
        try:
            self.logger.info("🔄 Building frequency-conversion transfer function")
            pmf, pump = self.spectral_functions(args)
            gx, gy = self.grids_for(args, pmf, pump, args.r, args.s)
            transfer = to_frequency_conversion(pmf, pump, args.r, args.s, gx, gy)
            spdc = build_jsa(pmf, pump.conjugate(), args.r, args.s, gx, gy)

            purity_fc = purity_schmidt(transfer).purity
            purity_spdc = purity_schmidt(spdc).purity
            base = self.output_path(args, "fc_transfer")
            run = self.run_config(args, output=base)
            matrix_path = self.write_matrix(transfer, base, args.format, run)
            record = {
                "command": self.name,
                "purity_fc": purity_fc,
                "purity_spdc_conjugate_pump": purity_spdc,
                "purity_delta": abs(purity_fc - purity_spdc),
                "pump_is_real": pump.is_real,
                "matrix_file": str(matrix_path),
            }
            json_path = base.with_suffix(".json")
            self.write_json(json_path, record, run)
            record["json_file"] = str(json_path)

            return CommandResult(
                success=True,
                data=record,
                message=f"Transfer-function purity {purity_fc:.6f}",
            ).to_dict()

        except Exception as e:
            return self.failure("Frequency conversion", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format fc-convert result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        return "\n".join(
            [
                "🔄 FREQUENCY CONVERSION",
                f"Transfer-function purity: {data.get('purity_fc', 0.0):.8f}",
                "SPDC purity (conjugated pump): "
                f"{data.get('purity_spdc_conjugate_pump', 0.0):.8f}",
                f"Delta: {data.get('purity_delta', 0.0):.2e}",
                f"\n📄 Matrix: {data.get('matrix_file')}",
            ]
        )
