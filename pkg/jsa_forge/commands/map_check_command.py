#!/usr/bin/env python3
"""
Map-check command - compare the oscillator-mapped JSA with the grid JSA.

Projects the phase-matching and pump functions onto the number basis,
pushes them through the squeeze and beam-splitter mapping for (r, s), reads
the JSA back on the grid and reports the L2 distance and both purities.
"""

from typing import Any, Dict

from ..core import DEFAULT_TRUNCATION
from ..physics.fock_space import (
    map_params,
    project_to_fock,
    synthesize_jsa_from_fock,
    synthesize_two_mode,
    two_mode_purity,
)
from ..physics.spectral_core import build_jsa, jsa_l2_distance, purity_schmidt
from .base import BaseCommand, CommandResult


class MapCheckCommand(BaseCommand):
    """Command to verify the oscillator mapping against direct sampling."""

    name = "map-check"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add map-check arguments to parser."""
        self.add_spectral_arguments(parser)
        self.add_rs_arguments(parser)
        parser.add_argument(
            "--n-trunc",
            type=int,
            default=DEFAULT_TRUNCATION,
            help=f"Number-basis truncation (default: {DEFAULT_TRUNCATION})",
        )
        parser.add_argument(
            "--points", type=int, default=None, help="Grid points per axis"
        )
        self.add_output_arguments(parser, "map_check.json")

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the map-check command."""
        try:
            self.logger.info("🔗 Checking oscillator mapping")
            bmap = map_params(args.r, args.s)
            self.logger.info(
                f"📐 theta={bmap.theta:.6f}, kappa={bmap.kappa:.6f}, "
                f"sigma={bmap.sigma:.6f}, nu={bmap.nu:.6f}"
            )
            pmf, pump = self.spectral_functions(args)
            phi = project_to_fock(pmf, args.n_trunc)
            gamma = project_to_fock(pump, args.n_trunc)

            gx, gy = self.grids_for(args, pmf, pump, args.r, args.s)
            direct = build_jsa(pmf, pump, args.r, args.s, gx, gy)
            mapped = synthesize_jsa_from_fock(phi, gamma, bmap, gx, gy)
            amplitudes, _ = synthesize_two_mode(phi, gamma, bmap)

            purity_grid = purity_schmidt(direct).purity
            purity_fock = two_mode_purity(amplitudes)
            record = {
                "command": self.name,
                "map": bmap.to_dict(),
                "l2_error": jsa_l2_distance(mapped, direct),
                "purity_grid": purity_grid,
                "purity_fock": purity_fock,
                "purity_delta": abs(purity_fock - purity_grid),
                "tail_weight": {"pmf": phi.tail_weight, "pump": gamma.tail_weight},
            }
            path = self.output_path(args, "map_check.json")
            self.write_json(path, record, self.run_config(args, output=path))
            record["json_file"] = str(path)

            return CommandResult(
                success=True,
                data=record,
                message=f"L2 error {record['l2_error']:.3e}",
            ).to_dict()

        except Exception as e:
            return self.failure("Mapping check", e)

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format map-check result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        bmap = data.get("map", {})
        return "\n".join(
            [
                "🔗 OSCILLATOR MAPPING CHECK",
                f"theta = {bmap.get('theta', 0.0):.6f}, nu = {bmap.get('nu', 0.0):.6f}",
                f"L2 error: {data.get('l2_error', 0.0):.3e}",
                f"Purity (grid): {data.get('purity_grid', 0.0):.8f}",
                f"Purity (Fock): {data.get('purity_fock', 0.0):.8f}",
                f"Delta: {data.get('purity_delta', 0.0):.2e}",
            ]
        )
