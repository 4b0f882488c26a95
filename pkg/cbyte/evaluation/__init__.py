"""Metrics and synthetic sequences for evaluating trackers."""

from .ablation import TrackingRun, jump_sequence_config, jump_tracker_config, run_ablation, run_tracker
from .metrics import (
    DEFAULT_IOU_GATE,
    ClearMetrics,
    IdentityMetrics,
    MetricsReport,
    clear_metrics,
    evaluate,
    id_metrics,
)
from .synth import SyntheticSequence, synth_sequence, write_synthetic

__all__ = [
    "DEFAULT_IOU_GATE",
    "ClearMetrics",
    "IdentityMetrics",
    "MetricsReport",
    "SyntheticSequence",
    "TrackingRun",
    "clear_metrics",
    "evaluate",
    "id_metrics",
    "jump_sequence_config",
    "jump_tracker_config",
    "run_ablation",
    "run_tracker",
    "synth_sequence",
    "write_synthetic",
]
