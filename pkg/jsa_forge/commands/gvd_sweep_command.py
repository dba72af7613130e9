#!/usr/bin/env python3
"""
GVD-sweep command - purity against r with and without group-velocity dispersion.

r is swept by changing the pulse time scale tau at fixed crystal length and
central wavelengths. Each row holds the purity of the fully dispersed JSA and
of its linearized counterpart on the same grid.
"""

from typing import Any, Dict

import numpy as np

from ..core import DomainError, SpectralFn, save_csv_rows
from ..core.config import DISPERSION_SETTINGS
from ..physics.dispersion import purity_vs_r_sweep, rs_from_physics, sweep_taus_for_r
from .base import BaseCommand, CommandResult

SWEEP_FIELDS = ["r", "purity_gvd", "purity_linear", "s", "tau_s"]


class GvdSweepCommand(BaseCommand):
    """Command to sweep purity over r for a dispersion model."""

    name = "gvd-sweep"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add gvd-sweep arguments to parser."""
        self.add_dispersion_arguments(parser)
        parser.add_argument(
            "--r-min",
            type=float,
            default=DISPERSION_SETTINGS.get("r_min", 2.0),
            help="Smallest r of the sweep",
        )
        parser.add_argument(
            "--r-max",
            type=float,
            default=DISPERSION_SETTINGS.get("r_max", 30.0),
            help="Largest r of the sweep",
        )
        parser.add_argument(
            "--r-points",
            type=int,
            default=DISPERSION_SETTINGS.get("points", 15),
            help="Number of sweep points",
        )
        parser.add_argument(
            "--pump-width",
            type=float,
            default=1.0,
            help="Gaussian pump width in units of 1/tau (default: 1.0)",
        )
        self.add_output_arguments(parser, "gvd_sweep.csv")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the gvd-sweep command."""
        try:
            model, geom = self.dispersion_setup(args)
            reference = rs_from_physics(model, geom)
            self.logger.info(
                f"🔬 Model {model.source!r}: r={reference.r:.4f}, s={reference.s:.4f} "
                f"at tau={geom.tau_s:.3e} s"
            )
            if args.r_points < 2 or not 0 < args.r_min < args.r_max:
                raise DomainError("need 0 < --r-min < --r-max and at least 2 points")
            r_values = np.linspace(args.r_min, args.r_max, args.r_points)
            if reference.r < 0:
                r_values = -r_values
            taus = sweep_taus_for_r(model, geom, r_values)
            pump = SpectralFn.gaussian(args.pump_width)
            rows = purity_vs_r_sweep(
                model, geom, taus, args.pmf_profile, pump, chi3=args.chi3
            )

            path = self.output_path(args, "gvd_sweep.csv")
            run = self.run_config(args, output=path)
            save_csv_rows(
                [row.to_dict() for row in rows],
                path,
                SWEEP_FIELDS,
                comments=[self.config_comment(run), f"source {model.source}"],
            )
            self.write_json(
                path.with_suffix(".json"),
                {
                    "command": self.name,
                    "model": model.to_dict(),
                    "geometry": geom.to_dict(),
                    "rows": [row.to_dict() for row in rows],
                },
                run,
            )
            peak = max(rows, key=lambda row: row.purity_gvd)
            data = {
                "rows": [row.to_dict() for row in rows],
                "peak_r": peak.r,
                "peak_purity_gvd": peak.purity_gvd,
                "csv_file": str(path),
            }
            return CommandResult(
                success=True,
                data=data,
                message=f"GVD purity peaks at {peak.purity_gvd:.6f} (r={peak.r:.3f})",
            ).to_dict()

        except Exception as e:
            return self.failure("GVD sweep", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format gvd-sweep result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        lines = ["📈 PURITY VS r", f"{'r':>10} {'P_gvd':>12} {'P_linear':>12}"]
        for row in data.get("rows", []):
            lines.append(
                f"{row['r']:>10.4f} {row['purity_gvd']:>12.8f} {row['purity_linear']:>12.8f}"
            )
        lines.append(
            f"\n🏔️  Peak GVD purity {data.get('peak_purity_gvd', 0.0):.6f} "
            f"at r = {data.get('peak_r', 0.0):.4f}"
        )
        lines.append(f"📄 Table: {data.get('csv_file')}")
        return "\n".join(lines)
