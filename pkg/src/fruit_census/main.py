"""Command-line entry point.

Subcommands:
    simulate   write a synthetic dataset
    track      detect and track a dataset, write tracks.jsonl
    yield      estimate yield from tracks.jsonl
    eval       compare tracks and yield with ground truth
    overlay    reproject tracks into every frame
    run-all    simulate (or load) -> track -> yield -> eval, all artifacts under --out

Exit codes: 0 success, 2 configuration error, 3 dataset error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

from fruit_census import __version__
from fruit_census.config import get_settings
from fruit_census.exceptions import ConfigError, DatasetError
from fruit_census.graph import create_pipeline_graph
from fruit_census.graph.nodes.export import (
    FRAME_SAMPLES_FILE,
    METRICS_FILE,
    TRACKS_FILE,
    YIELD_REPORT_FILE,
)
from fruit_census.models.run_config import RunConfig, load_run_config
from fruit_census.models.simulation import SEED_MAX
from fruit_census.services.artifacts import write_json_atomic
from fruit_census.services.dataset import load_dataset, read_tracks
from fruit_census.services.estimation import estimate_yield
from fruit_census.services.evaluation import (
    compute_metrics,
    export_overlay,
    frame_sample_report,
    match_to_ground_truth,
)
from fruit_census.services.simulator import export, simulate

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from fruit_census.graph.state import PipelineState
    from fruit_census.models.evaluation import FrameSampleReport, Metrics

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


def _configure_logging() -> None:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def _seed(value: str) -> int:
    """Argparse type for a 64-bit unsigned seed."""
    try:
        seed = int(value, 0)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from e
    if not 0 <= seed <= SEED_MAX:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2**64 - 1], got {seed}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="fruit-census",
        description="Track stationary fruit in 3D from RGB-D detections and estimate yield.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--out", type=Path, help="output directory")
        return p

    p = add("simulate", "write a synthetic dataset")
    p.add_argument("--seed", type=_seed)

    p = add("track", "detect and track a dataset")
    p.add_argument("--dataset", type=Path, required=True)

    p = add("yield", "estimate yield from <out>/tracks.jsonl")
    p.add_argument("--weight-model", choices=["paper", "fitted"])

    p = add("eval", "evaluate <out>/tracks.jsonl against a dataset's ground truth")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--weight-model", choices=["paper", "fitted"])

    p = add("overlay", "reproject <out>/tracks.jsonl into every frame")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--raster", action="store_true", help="also write one PNG per frame")

    p = add("run-all", "simulate (or load), track, estimate, and evaluate")
    p.add_argument("--seed", type=_seed)
    p.add_argument("--dataset", type=Path, help="load this dataset instead of simulating")
    p.add_argument("--weight-model", choices=["paper", "fitted"])

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Load the run configuration and apply command-line overrides.

    Precedence for the weight model: --weight-model, then the config file,
    then the FRUIT_CENSUS_DEFAULT_WEIGHT_MODEL setting.

    Raises:
        ConfigError: If the configuration file is unreadable or invalid.
    """
    config = load_run_config(args.config) if args.config else RunConfig()

    updates: dict[str, Any] = {}
    seed = getattr(args, "seed", None)
    if seed is not None:
        updates["seed"] = seed

    weight_model = getattr(args, "weight_model", None)
    if weight_model is None and "weight_model" not in config.yield_.model_fields_set:
        weight_model = get_settings().default_weight_model
    if weight_model is not None and weight_model != config.yield_.weight_model:
        updates["yield_"] = config.yield_.model_copy(update={"weight_model": weight_model})

    return config.model_copy(update=updates) if updates else config


def _out_dir(args: argparse.Namespace, default_leaf: str = "") -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(get_settings().output_dir) / default_leaf


def run_pipeline(
    config: RunConfig,
    out_dir: Path | None,
    dataset_dir: Path | None = None,
    with_estimate: bool = True,
    with_evaluation: bool = True,
) -> PipelineState:
    """Run the pipeline graph and return its final state.

    Args:
        config: Run configuration.
        out_dir: Artifact directory; None writes nothing.
        dataset_dir: Dataset to load; simulated from config when None.
        with_estimate: Include the yield estimate.
        with_evaluation: Include ground-truth evaluation.

    Returns:
        Final pipeline state.
    """
    graph = create_pipeline_graph(with_estimate=with_estimate, with_evaluation=with_evaluation)
    initial_state: dict[str, Any] = {
        "config": config,
        "dataset_dir": str(dataset_dir) if dataset_dir is not None else None,
        "out_dir": str(out_dir) if out_dir is not None else None,
        "frame_detections": [],
        "artifacts": [],
        "errors": [],
    }
    logger.debug("Invoking pipeline graph")
    final_state: PipelineState = graph.invoke(
        initial_state, config={"max_concurrency": get_settings().max_workers}
    )
    for error in final_state.get("errors", []):
        logger.warning("pipeline: %s", error)
    return final_state


def _print_metrics(metrics: Metrics, samples: FrameSampleReport | None) -> None:
    for line in metrics.summary_lines():
        print(line)
    if samples is not None:
        ratio = "n/a" if samples.ratio is None else f"{samples.ratio:.1f}%"
        print(
            f"frame samples:     {samples.total_positive} / {samples.total_visible} ({ratio})"
        )


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate a dataset and write it to --out."""
    config = resolve_config(args)
    out = _out_dir(args, "dataset")
    dataset = simulate(config)
    export(dataset, out)
    print(
        f"simulated {len(dataset.poses)} frames, {len(dataset.detections)} boxes, "
        f"{len(dataset.ground_truth.fruits) if dataset.ground_truth else 0} fruit -> {out}"
    )
    return EXIT_OK


def cmd_track(args: argparse.Namespace) -> int:
    """Track a dataset and write tracks.jsonl to --out."""
    config = resolve_config(args)
    out = _out_dir(args)
    state = run_pipeline(
        config, out, dataset_dir=args.dataset, with_estimate=False, with_evaluation=False
    )
    print(
        f"{len(state.get('reliable_tracks', []))} reliable of "
        f"{len(state.get('tracks', []))} tracks -> {out / TRACKS_FILE}"
    )
    return EXIT_OK


def cmd_yield(args: argparse.Namespace) -> int:
    """Estimate yield from <out>/tracks.jsonl."""
    config = resolve_config(args)
    out = _out_dir(args)
    tracks = read_tracks(out / TRACKS_FILE)
    report = estimate_yield(tracks, config.yield_)
    write_json_atomic(out / YIELD_REPORT_FILE, report)
    average = "n/a" if report.average_weight_g is None else f"{report.average_weight_g:.2f} g"
    print(f"count {report.count}, total {report.total_weight_g:.2f} g, average {average}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate <out>/tracks.jsonl against the dataset's ground truth."""
    config = resolve_config(args)
    out = _out_dir(args)
    dataset = load_dataset(args.dataset)
    if dataset.ground_truth is None:
        raise DatasetError("dataset has no ground truth", args.dataset)
    tracks = read_tracks(out / TRACKS_FILE)

    report = estimate_yield(tracks, config.yield_)
    match = match_to_ground_truth(
        tracks,
        dataset.ground_truth.fruits,
        radius=config.evaluation.match_radius,
        duplicate_radius=config.evaluation.duplicate_radius,
    )
    metrics = compute_metrics(
        report,
        dataset.ground_truth,
        match,
        target_class=config.yield_.target_class,
        flight_time=dataset.manifest.frame_count / dataset.manifest.frame_rate,
    )
    samples = frame_sample_report(dataset, tracks, config.evaluation)
    write_json_atomic(out / METRICS_FILE, metrics)
    write_json_atomic(out / FRAME_SAMPLES_FILE, samples)
    _print_metrics(metrics, samples)
    return EXIT_OK


def cmd_overlay(args: argparse.Namespace) -> int:
    """Reproject <out>/tracks.jsonl into every frame of the dataset."""
    config = resolve_config(args)
    out = _out_dir(args)
    dataset = load_dataset(args.dataset)
    tracks = read_tracks(out / TRACKS_FILE)
    records = export_overlay(
        dataset, tracks, out, raster=args.raster or config.evaluation.overlay_raster
    )
    print(f"{len(records)} overlay records -> {out}")
    return EXIT_OK


def cmd_run_all(args: argparse.Namespace) -> int:
    """Run the whole pipeline, writing every artifact under --out."""
    config = resolve_config(args)
    out = _out_dir(args, f"seed-{config.seed}")
    state = run_pipeline(config, out, dataset_dir=args.dataset)

    print(f"reliable tracks:   {len(state.get('reliable_tracks', []))}")
    if "metrics" in state:
        _print_metrics(state["metrics"], state.get("frame_samples"))
    elif "yield_report" in state:
        report = state["yield_report"]
        print(f"count {report.count}, total {report.total_weight_g:.2f} g")
    print(f"artifacts:         {out}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "track": cmd_track,
    "yield": cmd_yield,
    "eval": cmd_eval,
    "overlay": cmd_overlay,
    "run-all": cmd_run_all,
}


def cli(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one subcommand, and map failures to exit codes.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        Process exit code.
    """
    args = build_parser().parse_args(argv)
    _configure_logging()

    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DatasetError as e:
        logger.error("Dataset error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:
        logger.exception("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(cli())
