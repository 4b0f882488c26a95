"""
Camera-compensated two-stage (BYTE-style) tracker.

Per frame: predict, estimate camera motion, correct predictions, associate
high-score detections with every live track, associate low-score detections
with the remaining tracked tracks, update lifecycle, spawn new tracks and
refresh keypoints for the next frame.
"""

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import cmc
from .association import cost_matrix, linear_assignment, split_detections
from .config import TrackerConfig
from .core_types import AffineTransform, Detection, GrayFrame
from .errors import FrameOrderError
from .kalman import KalmanFilter
from .module_registry import module_registry
from .track_state import Track, TrackSnapshot, TrackStatus

module_registry.register_module(
    name="tracker",
    description="Per-frame tracking loop and track history",
    logger_name="cbyte.tracker",
    debug_flag="--debug-tracker",
    category="core",
)

log = module_registry.get_module_info("tracker")["logger"]

STAGES = ("predict", "cmc", "associate", "bookkeeping")


@dataclass
class StageTimings:
    """Wall-clock milliseconds spent in each stage of one step."""

    predict: float = 0.0
    cmc: float = 0.0
    associate: float = 0.0
    bookkeeping: float = 0.0

    @property
    def total(self) -> float:
        return self.predict + self.cmc + self.associate + self.bookkeeping

    def as_dict(self) -> Dict[str, float]:
        return {stage: getattr(self, stage) for stage in STAGES}


class CByteTracker:
    """
    Single-stream tracker; `step` calls must be serialized per video.

    Args:
        config: Tracker configuration; defaults are used when omitted
    """

    def __init__(self, config: Optional[TrackerConfig] = None):
        """Initialize an empty tracker."""
        self.config = config or TrackerConfig.create_default()
        self.kalman = KalmanFilter(self.config.kalman)
        self._rng = np.random.default_rng(self.config.seed)
        self._tracks: List[Track] = []
        self._history: List[TrackSnapshot] = []
        self._next_id = 1
        self._last_frame_index: Optional[int] = None
        self._prev_frame: Optional[GrayFrame] = None
        self._keypoints = np.zeros((0, 2), dtype=np.float32)
        self.last_transform = AffineTransform.identity()
        self.last_motion: Optional[cmc.MotionEstimate] = None
        self.last_timings = StageTimings()

    @property
    def tracks(self) -> List[Track]:
        """Live (non-removed) tracks."""
        return list(self._tracks)

    def _new_track(self, detection: Detection, frame_index: int) -> Track:
        confirmed = self.config.min_hits_to_confirm <= 1
        track = Track(
            track_id=self._next_id,
            state=self.kalman.initiate(detection.box),
            score=detection.score,
            start_frame=frame_index,
            status=TrackStatus.TRACKED if confirmed else TrackStatus.TENTATIVE,
            class_id=detection.class_id,
        )
        self._next_id += 1
        log.debug("Frame %d: spawned track %d (%s)", frame_index, track.track_id, track.status)
        return track

    def _match(self, track: Track, detection: Detection) -> None:
        track.state = self.kalman.update(track.state, detection.box)
        track.score = detection.score
        track.frames_since_update = 0
        track.hit_count += 1
        if track.status is TrackStatus.TENTATIVE:
            if track.hit_count >= self.config.min_hits_to_confirm:
                track.transition_to(TrackStatus.TRACKED, "confirmed")
        elif track.status is TrackStatus.LOST:
            track.transition_to(TrackStatus.TRACKED, "re-associated")

    def _miss(self, track: Track) -> None:
        track.frames_since_update += 1
        if track.status is TrackStatus.TENTATIVE:
            track.transition_to(TrackStatus.REMOVED, "unconfirmed miss")
        elif track.status is TrackStatus.TRACKED:
            track.transition_to(TrackStatus.LOST, "unmatched")
        if track.status is TrackStatus.LOST and track.frames_since_update > self.config.max_lost_age:
            track.transition_to(TrackStatus.REMOVED, f"lost for {track.frames_since_update} frames")

    def step(self, frame: GrayFrame, detections: Sequence[Detection]) -> List[TrackSnapshot]:
        """
        Process one frame and return snapshots of confirmed tracks matched in it.

        Raises:
            FrameOrderError: if frame_index does not strictly increase
        """
        if self._last_frame_index is not None and frame.frame_index <= self._last_frame_index:
            raise FrameOrderError(
                f"frame {frame.frame_index} presented after frame {self._last_frame_index}"
            )
        timings = StageTimings()
        cfg = self.config

        # Zero-area boxes cannot seed or update a filter
        usable = [d for d in detections if d.box.area > 0]
        if len(usable) < len(detections):
            log.debug("Frame %d: dropped %d zero-area detections", frame.frame_index, len(detections) - len(usable))
        detections = usable

        # Motion prediction
        started = time.perf_counter()
        live = self._tracks
        for track in live:
            track.state = self.kalman.predict(track.state)
        timings.predict = (time.perf_counter() - started) * 1000.0

        # Camera motion estimate and correction of every prediction
        transform = AffineTransform.identity()
        if cfg.enable_cmc:
            started = time.perf_counter()
            motion = cmc.estimate(self._prev_frame, frame, self._keypoints, cfg.cmc, self._rng)
            transform = motion.transform
            self.last_motion = motion
            self._keypoints = motion.keypoints
            for track in live:
                track.state = self.kalman.apply_affine(track.state, transform)
            timings.cmc = (time.perf_counter() - started) * 1000.0
        self.last_transform = transform

        # Primary association: high-score detections against all live tracks
        started = time.perf_counter()
        high, low = split_detections(detections, cfg.tau_high, cfg.tau_low)
        predicted = [track.state.to_bbox() for track in live]
        primary = linear_assignment(
            cost_matrix(predicted, [d.box for d in high]), cfg.primary_max_cost
        )
        matches = [(live[r], high[c]) for r, c in primary.pairs]

        # Secondary association: low-score detections against remaining tracked tracks
        remaining = [r for r in primary.unmatched_rows if live[r].status is TrackStatus.TRACKED]
        secondary = linear_assignment(
            cost_matrix([predicted[r] for r in remaining], [d.box for d in low]), cfg.secondary_max_cost
        )
        matches.extend((live[remaining[r]], low[c]) for r, c in secondary.pairs)
        timings.associate = (time.perf_counter() - started) * 1000.0

        # Lifecycle updates and births
        started = time.perf_counter()
        matched_ids = set()
        for track, detection in matches:
            self._match(track, detection)
            matched_ids.add(track.track_id)
        for track in live:
            if track.track_id not in matched_ids:
                self._miss(track)

        born = [self._new_track(high[c], frame.frame_index) for c in primary.unmatched_cols]
        self._tracks = [t for t in live if t.is_live] + born

        output = [
            t.snapshot(frame.frame_index)
            for t in self._tracks
            if t.status is TrackStatus.TRACKED and t.frames_since_update == 0
        ]
        output.sort(key=lambda s: s.track_id)
        self._history.extend(output)
        timings.bookkeeping = (time.perf_counter() - started) * 1000.0

        self._prev_frame = frame if cfg.enable_cmc else None
        self._last_frame_index = frame.frame_index
        self.last_timings = timings

        log.debug(
            "Frame %d: %d high / %d low dets, %d primary + %d secondary matches, %d born, %d live, %.2f ms",
            frame.frame_index,
            len(high),
            len(low),
            len(primary.pairs),
            len(secondary.pairs),
            len(born),
            len(self._tracks),
            timings.total,
        )
        return output

    def flush(self) -> List[TrackSnapshot]:
        """Return every snapshot emitted so far, in emission order."""
        return list(self._history)
