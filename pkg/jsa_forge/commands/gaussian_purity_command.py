#!/usr/bin/env python3
"""
Gaussian-purity command - closed-form purity of a Gaussian x Gaussian JSA.
"""

from typing import Any, Dict

from ..core import SpectralFn
from ..physics.gaussian_analytics import (
    asymptotic_gaussian_purity,
    gaussian_correlation_matrix,
    gaussian_purity,
    separability_condition,
)
from ..physics.spectral_core import build_jsa, pmf_angle, purity_schmidt
from .base import BaseCommand, CommandResult


class GaussianPurityCommand(BaseCommand):
    """Command to evaluate the exact Gaussian purity and separability condition."""

    name = "gaussian-purity"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add gaussian-purity arguments to parser."""
        self.add_rs_arguments(parser)
        parser.add_argument(
            "--check",
            action="store_true",
            help="Also sample the JSA on a grid and compare the numerical purity",
        )
        self.add_output_arguments(parser, "gaussian_purity.json")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the gaussian-purity command."""
        try:
            r, s = args.r, args.s
            self.logger.info(f"📏 Gaussian purity for r={r}, s={s}")
            exact = gaussian_purity(r, s)
            record: Dict[str, Any] = {
                "command": self.name,
                "r": r,
                "s": s,
                "purity": exact,
                "separable": separability_condition(r, s),
                "correlation_matrix": gaussian_correlation_matrix(r, s).to_dict(),
            }
            if r != 0:
                record["pmf_angle"] = pmf_angle(r, s)
            if s == 0 and r != 0:
                record["asymptotic_purity"] = asymptotic_gaussian_purity(r)
            if args.check:
                gauss = SpectralFn.gaussian()
                numeric = purity_schmidt(build_jsa(gauss, gauss, r, s)).purity
                record["purity_grid"] = numeric
                record["grid_delta"] = abs(numeric - exact)

            path = self.output_path(args, "gaussian_purity.json")
            self.write_json(path, record, self.run_config(args, output=path))
            record["json_file"] = str(path)

            return CommandResult(
                success=True, data=record, message=f"Purity {exact:.8f}"
            ).to_dict()

        except Exception as e:
            return self.failure("Gaussian purity", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format gaussian-purity result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        mark = "✅ separable (rs = -1)" if data.get("separable") else "entangled"
        lines = [
            "📏 GAUSSIAN PURITY",
            f"r = {data.get('r')}, s = {data.get('s')}",
            f"Purity: {data.get('purity', 0.0):.8f}  {mark}",
        ]
        if "asymptotic_purity" in data:
            lines.append(f"Large-r estimate: {data['asymptotic_purity']:.8f}")
        if "purity_grid" in data:
            lines.append(
                f"Grid purity: {data['purity_grid']:.8f} (delta {data['grid_delta']:.2e})"
            )
        return "\n".join(lines)
