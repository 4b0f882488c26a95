#!/usr/bin/env python3
"""Command-line entry points: track, eval, synth and render."""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .config import RenderConfig, SynthConfig, TrackerConfig, load_config_file
from .errors import CByteError
from .evaluation import DEFAULT_IOU_GATE, MetricsReport, evaluate, synth_sequence, write_synthetic
from .frames import frame_path, list_frames, load_frame
from .module_registry import configure_logging, module_registry
from .mot_format import read_mot_file, snapshots_to_records
from .render import render_sequence
from .run_manifest import build_manifest, write_run_outputs
from .tracker import CByteTracker

module_registry.register_module(
    name="cli",
    description="Command-line commands",
    logger_name="cbyte.cli",
    debug_flag="--debug-cli",
    category="io",
)

log = module_registry.get_module_info("cli")["logger"]


def sequence_name(frames_dir: Path) -> str:
    """`MOT17-02/img1` and `seq/frames` are named after their parent directory."""
    frames_dir = frames_dir.resolve()
    if frames_dir.name in ("img1", "frames") and frames_dir.parent.name:
        return frames_dir.parent.name
    return frames_dir.name


def cmd_track(args: argparse.Namespace) -> int:
    """Run the tracker over a frame directory and a detection file."""
    config = load_config_file(args.config, TrackerConfig) if args.config else TrackerConfig.create_default()
    overrides = {}
    if args.no_cmc:
        overrides["enable_cmc"] = False
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        config = TrackerConfig.model_validate({**config.model_dump(), **overrides})

    frames_dir = Path(args.frames)
    frames = list_frames(frames_dir)
    detections = read_mot_file(args.dets)
    # Every detection frame needs an image before tracking starts
    for frame in detections:
        frame_path(frames, frame)

    log.info("Tracking %d frames from %s (cmc=%s, seed=%d)", len(frames), frames_dir, config.enable_cmc, config.seed)
    tracker = CByteTracker(config)
    timings = []
    for frame, path in frames.items():
        tracker.step(load_frame(path, frame), [r.to_detection() for r in detections.get(frame, [])])
        timings.append(tracker.last_timings)

    manifest = build_manifest(
        sequence_name(frames_dir),
        config,
        {"frames": frames_dir, "detections": args.dets, "config": args.config or ""},
        timings,
    )
    out = write_run_outputs(args.out, snapshots_to_records(tracker.flush()), manifest)
    print(
        f"Tracked {manifest.frame_count} frames: "
        f"median step {manifest.total.median_ms:.2f} ms, median cmc {manifest.stages['cmc'].median_ms:.2f} ms"
    )
    print(f"Results written to {out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    """Score one or more (ground truth, results) pairs."""
    if len(args.gt) != len(args.results):
        raise CByteError(f"got {len(args.gt)} --gt files but {len(args.results)} --results files")

    def score(pair) -> MetricsReport:
        gt_file, results_file = pair
        return evaluate(read_mot_file(gt_file), read_mot_file(results_file), args.iou_gate)

    pairs = list(zip(args.gt, args.results))
    with ThreadPoolExecutor(max_workers=min(len(pairs), 8)) as pool:
        reports = list(pool.map(score, pairs))

    for (gt_file, results_file), report in zip(pairs, reports):
        print(report.format_table(title=f"{results_file} vs {gt_file}"))
        for line in report.key_value_lines():
            print(line)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    """Generate a synthetic sequence directory."""
    config = load_config_file(args.config, SynthConfig)
    out = write_synthetic(synth_sequence(config), args.out)
    print(f"Synthetic sequence ({config.frames} frames) written to {out}")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    """Draw tracking results over frames."""
    config = load_config_file(args.config, RenderConfig) if args.config else RenderConfig()
    written = render_sequence(list_frames(args.frames), read_mot_file(args.results), args.out, config)
    print(f"Rendered {written} frames into {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser, including one debug flag per registered module."""
    parser = argparse.ArgumentParser(
        prog="cbyte",
        description="Camera-motion-compensated multi-object tracker",
        epilog="""
Examples:
  %(prog)s synth --config synth.cfg --out seq
  %(prog)s track --frames seq/frames --dets seq/det.txt --out seq/results.txt
  %(prog)s eval --gt seq/gt.txt --results seq/results.txt
  %(prog)s render --frames seq/frames --results seq/results.txt --out seq/overlay

Environment Variables:
  CBYTE_LOG    - error, warn, info or debug (default: warn)
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    for category in module_registry.get_categories():
        group = parser.add_argument_group(f"{category} debug logging")
        for _, info in sorted(module_registry.get_modules_by_category(category).items()):
            group.add_argument(
                info["debug_flag"], action="store_true", help=f"Debug logging for {info['description'].lower()}"
            )

    commands = parser.add_subparsers(dest="command", required=True)

    track = commands.add_parser("track", help="Track detections through a frame sequence")
    track.add_argument("--frames", required=True, metavar="DIR", help="Directory of numbered frame images")
    track.add_argument("--dets", required=True, metavar="FILE", help="Detections in MOT format")
    track.add_argument("--out", required=True, metavar="FILE", help="Results file (MOT format)")
    track.add_argument("--config", metavar="FILE", help="Tracker config file (key = value)")
    track.add_argument("--no-cmc", action="store_true", help="Disable camera motion compensation")
    track.add_argument("--seed", type=int, help="RANSAC seed (overrides the config)")
    track.set_defaults(handler=cmd_track)

    ev = commands.add_parser("eval", help="Compute MOTA / IDF1 metrics")
    ev.add_argument("--gt", required=True, action="append", metavar="FILE", help="Ground truth (repeatable)")
    ev.add_argument("--results", required=True, action="append", metavar="FILE", help="Results (repeatable)")
    ev.add_argument(
        "--iou-gate", type=float, default=DEFAULT_IOU_GATE, help=f"IoU match threshold (default: {DEFAULT_IOU_GATE})"
    )
    ev.set_defaults(handler=cmd_eval)

    synth = commands.add_parser("synth", help="Generate a synthetic sequence")
    synth.add_argument("--config", required=True, metavar="FILE", help="Synthetic sequence config file")
    synth.add_argument("--out", required=True, metavar="DIR", help="Output directory (must not exist or be empty)")
    synth.set_defaults(handler=cmd_synth)

    render = commands.add_parser("render", help="Draw tracks over frames")
    render.add_argument("--frames", required=True, metavar="DIR", help="Directory of numbered frame images")
    render.add_argument("--results", required=True, metavar="FILE", help="Results in MOT format")
    render.add_argument("--out", required=True, metavar="DIR", help="Output directory (must not exist or be empty)")
    render.add_argument("--config", metavar="FILE", help="Render config file")
    render.set_defaults(handler=cmd_render)
    return parser


def enabled_debug_modules(args: argparse.Namespace) -> List[str]:
    enabled = []
    for flag, name in module_registry.get_debug_flags().items():
        if getattr(args, flag.lstrip("-").replace("-", "_"), False):
            enabled.append(name)
    return enabled


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and run one command."""
    args = build_parser().parse_args(argv)
    configure_logging()
    module_registry.set_debug(enabled_debug_modules(args))

    try:
        return args.handler(args)
    except KeyboardInterrupt:
        print("Interrupted", file=sys.stderr)
        return 130
    except (CByteError, OSError, ValueError) as e:
        log.debug("Command %s failed", args.command, exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
