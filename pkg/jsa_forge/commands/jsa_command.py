#!/usr/bin/env python3
"""
JSA command - build a joint spectral amplitude and report its purity.

Writes the sampled JSA matrix (binary or CSV) next to a JSON record with
the Schmidt purity and the leading Schmidt coefficients.
"""

from typing import Any, Dict

from ..physics.dispersion import build_jsa_gvd, rs_from_physics
from ..physics.spectral_core import build_jsa, purity_schmidt
from .base import BaseCommand, CommandResult


class JsaCommand(BaseCommand):
    """Command to build a JSA on a grid and compute its Schmidt purity."""

    name = "jsa"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add jsa-specific arguments to parser."""
        self.add_spectral_arguments(parser)
        self.add_rs_arguments(parser)
        parser.add_argument(
            "--points",
            type=int,
            default=None,
            help="Grid points per axis (default: automatic)",
        )
        parser.add_argument(
            "--format",
            choices=["binary", "csv"],
            default="binary",
            help="Matrix file format (default: binary)",
        )
        parser.add_argument(
            "--gvd",
            action="store_true",
            help="Use the full dispersion model instead of the linear (r, s) JSA",
        )
        self.add_dispersion_arguments(parser)
        self.add_output_arguments(parser, "jsa")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the jsa command."""
        try:
            self.logger.info("🧮 Building joint spectral amplitude")
            base = self.output_path(args, "jsa")
            run = self.run_config(args, output=base)

            if args.gvd:
                model, geom = self.dispersion_setup(args)
                _, pump = self.spectral_functions(args)
                mismatch = rs_from_physics(model, geom)
                self.logger.info(
                    f"🔬 GVD model {model.source!r}: "
                    f"r={mismatch.r:.4f}, s={mismatch.s:.4f}"
                )
                jsa = build_jsa_gvd(
                    model, geom, args.pmf_profile, pump, chi3=args.chi3
                )
                r, s = mismatch.r, mismatch.s
            else:
                pmf, pump = self.spectral_functions(args)
                r, s = args.r, args.s
                gx, gy = self.grids_for(args, pmf, pump, r, s)
                jsa = build_jsa(pmf, pump, r, s, gx, gy)

            schmidt = purity_schmidt(jsa)
            matrix_path = self.write_matrix(jsa, base, args.format, run)
            record = {
                "command": self.name,
                "r": r,
                "s": s,
                "purity": schmidt.purity,
                "schmidt_number": schmidt.schmidt_number,
                "schmidt": schmidt.to_dict(),
                "boundary_flag": jsa.boundary_flag,
                "grid": {"x": jsa.x_grid.to_dict(), "y": jsa.y_grid.to_dict()},
                "matrix_file": str(matrix_path),
            }
            json_path = base.with_suffix(".json")
            self.write_json(json_path, record, run)
            record["json_file"] = str(json_path)

            return CommandResult(
                success=True,
                data=record,
                message=f"Purity {schmidt.purity:.6f}",
            ).to_dict()

        except Exception as e:
            return self.failure("JSA construction", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format jsa result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        lines = [
            "🧮 JOINT SPECTRAL AMPLITUDE",
            f"r = {data.get('r'):.6g}, s = {data.get('s'):.6g}",
            f"Purity: {data.get('purity', 0.0):.6f}",
            f"Schmidt number: {data.get('schmidt_number', 0.0):.4f}",
        ]
        coefficients = data.get("schmidt", {}).get("leading_coefficients", [])
        if coefficients:
            shown = ", ".join(f"{c:.4f}" for c in coefficients[:5])
            lines.append(f"Leading Schmidt coefficients: {shown}")
        if data.get("boundary_flag"):
            lines.append("\n⚠️  JSA touches the grid boundary; widen the grid")
        lines.append(f"\n📄 Matrix: {data.get('matrix_file')}")
        lines.append(f"📄 Record: {data.get('json_file')}")
        return "\n".join(lines)
