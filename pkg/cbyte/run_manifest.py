"""Run manifest: config snapshot, inputs and per-stage latency written next to tracking results."""

from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .config import TrackerConfig, flatten_config
from .fileio import atomic_write_texts
from .mot_format import MotRecord, write_mot
from .tracker import STAGES, StageTimings

MANIFEST_SUFFIX = ".manifest.json"


class StageSummary(BaseModel):
    """Median and mean wall-clock milliseconds for one stage over all frames."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    median_ms: float = Field(ge=0)
    mean_ms: float = Field(ge=0)


class RunManifest(BaseModel):
    """Everything needed to reproduce and compare one tracking run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    version: str = __version__
    sequence: str
    config: Dict[str, Any]
    inputs: Dict[str, str]
    frame_count: int = Field(ge=0)
    stages: Dict[str, StageSummary]
    total: StageSummary


def summarize(samples_ms: Sequence[float]) -> StageSummary:
    if len(samples_ms) == 0:
        return StageSummary(median_ms=0.0, mean_ms=0.0)
    samples = np.maximum(np.asarray(samples_ms, dtype=np.float64), 0.0)
    return StageSummary(median_ms=float(np.median(samples)), mean_ms=float(np.mean(samples)))


def build_manifest(
    sequence: str,
    config: TrackerConfig,
    inputs: Dict[str, Union[str, Path]],
    timings: Sequence[StageTimings],
) -> RunManifest:
    """Summarize per-frame stage timings into a manifest."""
    return RunManifest(
        sequence=sequence,
        config=flatten_config(config),
        inputs={name: str(path) for name, path in inputs.items()},
        frame_count=len(timings),
        stages={stage: summarize([getattr(t, stage) for t in timings]) for stage in STAGES},
        total=summarize([t.total for t in timings]),
    )


def manifest_path(results_path: Union[str, Path]) -> Path:
    """`results.txt` -> `results.txt.manifest.json`."""
    results_path = Path(results_path)
    return results_path.with_name(results_path.name + MANIFEST_SUFFIX)


def write_run_outputs(results_path: Union[str, Path], records: Iterable[MotRecord], manifest: RunManifest) -> Path:
    """Write the results file and its manifest together; on failure neither is left behind."""
    results_path = Path(results_path)
    atomic_write_texts(
        {
            results_path: write_mot(records),
            manifest_path(results_path): manifest.model_dump_json(indent=2) + "\n",
        }
    )
    return results_path
