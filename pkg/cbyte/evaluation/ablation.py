"""Run the tracker over synthetic sequences with and without camera motion compensation."""

from dataclasses import dataclass
from typing import Dict, List, Optional

from ..config import CmcParams, SynthConfig, TrackerConfig
from ..module_registry import module_registry
from ..mot_format import FrameRecords, parse_mot, snapshots_to_records, write_mot
from ..run_manifest import StageSummary, summarize
from ..tracker import STAGES, CByteTracker, StageTimings
from .metrics import MetricsReport, evaluate
from .synth import SyntheticSequence, synth_sequence

module_registry.register_module(
    name="ablation",
    description="CMC on/off ablation runs",
    logger_name="cbyte.ablation",
    debug_flag="--debug-ablation",
    category="evaluation",
)

log = module_registry.get_module_info("ablation")["logger"]


def jump_sequence_config(frames: int = 300, objects: int = 10, seed: int = 0) -> SynthConfig:
    """640x480 sequence whose camera jumps 40 px and 2 degrees every 30 frames."""
    return SynthConfig(
        frames=frames,
        width=640,
        height=480,
        objects=objects,
        camera_jump_interval=30,
        camera_jump_x=40.0,
        camera_jump_deg=2.0,
        det_noise_px=1.0,
        det_low_score_fraction=0.05,
        seed=seed,
    )


def jump_tracker_config(seed: int = 0) -> TrackerConfig:
    """Default tracker with a fourth pyramid level, enough for LK to follow 50 px jumps."""
    return TrackerConfig(seed=seed, cmc=CmcParams(lk_pyramid_levels=4))


@dataclass
class TrackingRun:
    """Results text, parsed records and per-frame timings of one tracker run."""

    results_text: str
    records: FrameRecords
    timings: List[StageTimings]

    def stage_summary(self) -> Dict[str, StageSummary]:
        summary = {stage: summarize([getattr(t, stage) for t in self.timings]) for stage in STAGES}
        summary["total"] = summarize([t.total for t in self.timings])
        return summary


def run_tracker(seq: SyntheticSequence, config: TrackerConfig) -> TrackingRun:
    tracker = CByteTracker(config)
    timings = []
    for frame in seq.frames():
        tracker.step(frame, seq.detections_for(frame.frame_index))
        timings.append(tracker.last_timings)
    text = write_mot(snapshots_to_records(tracker.flush()))
    return TrackingRun(text, parse_mot(text), timings)


def run_ablation(
    synth: Optional[SynthConfig] = None, config: Optional[TrackerConfig] = None
) -> Dict[str, MetricsReport]:
    """
    Track the same sequence with CMC enabled and disabled.

    Returns:
        {"cmc": report, "no_cmc": report}
    """
    seq = synth_sequence(synth or jump_sequence_config())
    config = config or jump_tracker_config()
    reports = {}
    for name, enabled in (("cmc", True), ("no_cmc", False)):
        run = run_tracker(seq, config.model_copy(update={"enable_cmc": enabled}))
        reports[name] = evaluate(seq.gt, run.records)
        log.info(
            "%s: MOTA=%.3f IDF1=%.3f IDSW=%d, median step %.2f ms",
            name,
            reports[name].mota,
            reports[name].idf1,
            reports[name].idsw,
            run.stage_summary()["total"].median_ms,
        )
    return reports
