#!/usr/bin/env python3
"""
Optimize command - search for the pump ket that makes the JSA most separable.

The default phase-matching function is sinc(x/alpha)/sqrt(alpha pi) with
alpha = 0.71, the width that maximizes its overlap with the vacuum Gaussian.
"""

import argparse
from typing import Any, Dict, List

from ..core import (
    DEFAULT_TRUNCATION,
    OptimizerConfig,
    parse_theta,
    save_csv_rows,
)
from ..core.config import OPTIMIZER_DEFAULTS
from ..physics.fock_space import project_to_fock
from ..physics.pump_optimizer import optimize_pump, survey_squeezed_optimality
from ..physics.spectral_core import spectral_fn_from_name
from .base import SPECTRAL_CHOICES, BaseCommand, CommandResult

DEFAULT_SINC_ALPHA = 0.71
SURVEY_FIELDS = [
    "pmf",
    "theta",
    "best_purity",
    "squeezed_mu",
    "squeezed_phase",
    "fidelity",
    "counterexample_candidate",
]


def _theta(text: str) -> float:
    try:
        return parse_theta(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


class OptimizeCommand(BaseCommand):
    """Command to optimize the pump ket at a fixed mixing angle."""

    name = "optimize"

    def add_parser_arguments(self, parser: Any) -> None:
        """Add optimize-specific arguments to parser."""
        parser.add_argument(
            "--pmf",
            choices=SPECTRAL_CHOICES,
            default="sinc",
            help="Phase-matching function (default: sinc)",
        )
        parser.add_argument(
            "--alpha",
            type=float,
            default=DEFAULT_SINC_ALPHA,
            help=f"sinc width parameter (default: {DEFAULT_SINC_ALPHA})",
        )
        parser.add_argument(
            "--pmf-width", type=float, default=1.0, help="PMF width (default: 1.0)"
        )
        parser.add_argument(
            "--order", type=int, default=0, help="Hermite order (default: 0)"
        )
        parser.add_argument(
            "--theta",
            type=_theta,
            default=parse_theta("1/32pi"),
            help="Mixing angle in radians or as 'k/32pi' (default: 1/32pi)",
        )
        parser.add_argument(
            "--n-trunc",
            type=int,
            default=DEFAULT_TRUNCATION,
            help=f"Number-basis truncation (default: {DEFAULT_TRUNCATION})",
        )
        parser.add_argument(
            "--restarts",
            type=int,
            default=None,
            help=f"Random restarts (default: {OPTIMIZER_DEFAULTS.get('restarts', 80)})",
        )
        parser.add_argument(
            "--seed",
            type=int,
            default=OPTIMIZER_DEFAULTS.get("seed", 0),
            help="Root seed for the restart starting points",
        )
        parser.add_argument(
            "--lambda",
            dest="penalty",
            type=float,
            default=None,
            help=f"Displacement penalty (default: {OPTIMIZER_DEFAULTS.get('penalty', 10.0)})",
        )
        parser.add_argument(
            "--max-iters", type=int, default=None, help="Iterations per restart"
        )
        parser.add_argument(
            "--fast",
            action="store_true",
            help="Warm-started run with the reduced restart count",
        )
        parser.add_argument(
            "--survey",
            action="store_true",
            help="Optimize at theta = k/32 pi for k = 1..8 and write a CSV table",
        )
        self.add_output_arguments(parser, "results.json")

    def _config(self, args: Any, theta: float) -> OptimizerConfig:
        restarts = args.restarts
        if restarts is None and args.fast:
            restarts = OPTIMIZER_DEFAULTS.get("fast_restarts", 20)
        return OptimizerConfig.from_settings(
            theta,
            n_trunc=args.n_trunc,
            restarts=restarts,
            seed=args.seed,
            penalty=args.penalty,
            max_iters=args.max_iters,
            warm_start=True if args.fast else None,
        )

    def execute(self, args: Any) -> Dict[str, Any]:
        """Execute the optimize command."""
        try:
            pmf = spectral_fn_from_name(
                args.pmf, alpha=args.alpha, width=args.pmf_width, order=args.order
            )
            phi = project_to_fock(pmf, args.n_trunc)
            if args.survey:
                return self._survey(args, phi)

            cfg = self._config(args, args.theta)
            self.logger.info(
                f"🎯 Optimizing pump for {pmf.label} at theta={cfg.theta:.6f}"
            )
            result = optimize_pump(phi, cfg)
            record = {"command": self.name, "pmf": pmf.label, **result.to_dict()}
            path = self.output_path(args, "results.json")
            self.write_json(path, record, self.run_config(args, output=path))

            fit = result.squeezed_fit
            data = {
                "pmf": pmf.label,
                "theta": cfg.theta,
                "best_purity": result.best_purity,
                "best_index": result.best_index,
                "squeezed_fit": fit.to_dict(),
                "converged_restarts": sum(r.converged for r in result.restart_trace),
                "restarts": cfg.restarts,
                "json_file": str(path),
            }
            return CommandResult(
                success=True,
                data=data,
                message=f"Best purity {result.best_purity:.8f}, fidelity {fit.fidelity:.6f}",
            ).to_dict()

        except Exception as e:
            return self.failure("Pump optimization", e)

    def _survey(self, args: Any, phi: Any) -> Dict[str, Any]:
        thetas = [parse_theta(f"{k}/32pi") for k in range(1, 9)]
        cfg = self._config(args, thetas[0])
        self.logger.info(f"📊 Surveying {len(thetas)} mixing angles for {args.pmf}")
        rows: List[Dict[str, Any]] = survey_squeezed_optimality({args.pmf: phi}, thetas, cfg)
        path = self.output_path(args, "results.json").with_suffix(".csv")
        run = self.run_config(args, output=path)
        save_csv_rows(rows, path, SURVEY_FIELDS, comments=[self.config_comment(run)])
        self.logger.info(f"💾 Wrote {path}")
        candidates = sum(bool(r["counterexample_candidate"]) for r in rows)
        return CommandResult(
            success=True,
            data={"rows": rows, "candidates": candidates, "csv_file": str(path)},
            message=f"{len(rows)} angles surveyed, {candidates} below the fidelity target",
        ).to_dict()

    def format_text_output(self, result: Dict[str, Any]) -> str:
        """Format optimize result for text output."""
        if not result.get("success", False):
            return f"❌ {result.get('error', 'Unknown error')}"

        data = result.get("data", {})
        if "rows" in data:
            lines = ["📊 SQUEEZED-OPTIMALITY SURVEY"]
            for row in data["rows"]:
                flag = "⚠️ " if row["counterexample_candidate"] else "✅"
                lines.append(
                    f"{flag} theta={row['theta']:.5f}  purity={row['best_purity']:.8f}  "
                    f"fidelity={row['fidelity']:.6f}"
                )
            lines.append(f"\n📄 Table: {data.get('csv_file')}")
            return "\n".join(lines)

        fit = data.get("squeezed_fit", {})
        return "\n".join(
            [
                "🎯 PUMP OPTIMIZATION",
                f"PMF: {data.get('pmf')}, theta = {data.get('theta', 0.0):.6f}",
                f"Best purity: {data.get('best_purity', 0.0):.8f} "
                f"(restart {data.get('best_index')})",
                f"Converged restarts: {data.get('converged_restarts')}/{data.get('restarts')}",
                f"Squeezed fit: mu={fit.get('mu', 0.0):.5f}, "
                f"phase={fit.get('phase', 0.0):.5f}, fidelity={fit.get('fidelity', 0.0):.6f}",
                f"\n📄 Results: {data.get('json_file')}",
            ]
        )
