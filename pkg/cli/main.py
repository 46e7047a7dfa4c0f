"""
Command-line entry: ``python main.py <subcommand> [options]``.

Exit codes: 0 success, 1 internal error, 2 configuration error, 3 data or
model-file error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import os
from typing import Optional, Sequence

from cli import commands
from errors import GreenHopError
from logging_config import get_logger, setup_logging
from pipeline import PRESETS

logger = get_logger(__name__)


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or flat key = value config file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="Start from a named preset instead of --config")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="Config override; may be repeated, wins over the file")


def _output_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="Write the TSV report here (and a .txt human-readable copy)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greenhop", description="Green-PointHop point cloud classification")
    parser.add_argument("--log-level", default=os.getenv("GREENHOP_LOG_LEVEL", "INFO"),
                        help="DEBUG, INFO, WARNING or ERROR (env GREENHOP_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True, help="Available commands")

    p = sub.add_parser("train", help="Train a model from a manifest")
    p.add_argument("--dataset", required=True, help="Training manifest")
    p.add_argument("--model", default="model.gph", help="Where to write the model file")
    p.add_argument("--record", action="store_true", help="Store the report in the run database")
    _config_args(p)
    _output_arg(p)
    p.set_defaults(handler=commands.cmd_train)

    p = sub.add_parser("eval", help="Evaluate a saved model on a manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--record", action="store_true")
    _output_arg(p)
    p.set_defaults(handler=commands.cmd_eval)

    p = sub.add_parser("predict", help="Per-sample predictions with scores")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", help="Manifest with ground truth (adds truth/correct columns)")
    p.add_argument("inputs", nargs="*", default=[], help="Point files to classify")
    _output_arg(p)
    p.set_defaults(handler=commands.cmd_predict)

    p = sub.add_parser("ablate", help="Sweep ablation grids")
    p.add_argument("--dataset", required=True, help="Training manifest")
    p.add_argument("--test-dataset", required=True, help="Test manifest")
    p.add_argument("--grid", default=str(commands.DEFAULT_GRID), help="Ablation grid YAML")
    p.add_argument("--grids", nargs="+", choices=["regions", "k_neighbors", "aggregators", "points"],
                   help="Subset of grids to run (default: all)")
    p.add_argument("--record", action="store_true")
    _config_args(p)
    _output_arg(p)
    p.set_defaults(handler=commands.cmd_ablate)

    p = sub.add_parser("flops", help="FLOP and parameter estimate")
    p.add_argument("--model", help="Use a saved model's config, classes and selection")
    p.add_argument("--points", type=int, default=None, help="Points per cloud (default: num_points)")
    p.add_argument("--classes", type=int, default=40)
    _config_args(p)
    _output_arg(p)
    p.set_defaults(handler=commands.cmd_flops)

    p = sub.add_parser("convert", help="Convert an external dump to manifest + point files")
    p.add_argument("--format", choices=["folders", "csv-normals"], default="folders")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--split", choices=["train", "test"], default="train")
    p.set_defaults(handler=commands.cmd_convert)

    p = sub.add_parser("synth", help="Write the synthetic shape dataset")
    p.add_argument("--dst", required=True)
    p.add_argument("--shapes", help="Comma-separated subset of sphere,box,cylinder,two_lobe")
    p.add_argument("--per-class-train", type=int, default=100)
    p.add_argument("--per-class-test", type=int, default=40)
    p.add_argument("--points", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary", action="store_true", help="Write XYZB files instead of text")
    p.set_defaults(handler=commands.cmd_synth)

    p = sub.add_parser("serve", help="HTTP inference service")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=commands.cmd_serve)

    p = sub.add_parser("runs", help="List stored run reports")
    p.add_argument("--kind", choices=["train", "eval", "ablate"])
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--id", type=int, help="Show one run in full")
    p.set_defaults(handler=commands.cmd_runs)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except GreenHopError as e:
        logger.error(f"❌ {e}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"❌ Internal error in '{args.command}': {e}")
        return GreenHopError.exit_code
