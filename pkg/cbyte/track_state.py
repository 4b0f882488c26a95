"""Track lifecycle with validated state transitions."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .core_types import BBox
from .kalman import KalmanState
from .module_registry import module_registry

module_registry.register_module(
    name="track_state",
    description="Track lifecycle transitions (tentative, tracked, lost, removed)",
    logger_name="cbyte.track_state",
    debug_flag="--debug-state",
    category="core",
)

log = module_registry.get_module_info("track_state")["logger"]


class TrackStatus(Enum):
    """Enumeration of track lifecycle states."""

    TENTATIVE = "tentative"  # Born, not yet confirmed
    TRACKED = "tracked"  # Confirmed and matched this frame
    LOST = "lost"  # Confirmed, unmatched for >= 1 frame
    REMOVED = "removed"  # Terminal

    def __str__(self) -> str:
        """Return the string value."""
        return self.value


VALID_TRANSITIONS = {
    TrackStatus.TENTATIVE: {
        TrackStatus.TRACKED,  # Enough consecutive hits
        TrackStatus.REMOVED,  # Missed before confirmation
    },
    TrackStatus.TRACKED: {
        TrackStatus.LOST,  # Unmatched this frame
    },
    TrackStatus.LOST: {
        TrackStatus.TRACKED,  # Recovered by a high-score detection
        TrackStatus.REMOVED,  # Lost for longer than max_lost_age
    },
    TrackStatus.REMOVED: set(),
}


@dataclass(frozen=True)
class TrackSnapshot:
    """Immutable record of one confirmed track in one frame."""

    frame_index: int
    track_id: int
    box: BBox
    score: float


class Track:
    """A single object's identity, motion state and lifecycle bookkeeping."""

    def __init__(
        self,
        track_id: int,
        state: KalmanState,
        score: float,
        start_frame: int,
        status: TrackStatus = TrackStatus.TENTATIVE,
        class_id: int = 0,
    ):
        """Create a freshly spawned track with one hit."""
        self.track_id = track_id
        self.state = state
        self.score = score
        self.start_frame = start_frame
        self.class_id = class_id
        self.frames_since_update = 0
        self.hit_count = 1
        self._status = status
        self._previous_status: Optional[TrackStatus] = None

    @property
    def status(self) -> TrackStatus:
        return self._status

    @property
    def previous_status(self) -> Optional[TrackStatus]:
        return self._previous_status

    @property
    def is_live(self) -> bool:
        return self._status is not TrackStatus.REMOVED

    def can_transition_to(self, new_status: TrackStatus) -> bool:
        """Check if a transition to `new_status` is valid (same state is a no-op)."""
        if new_status == self._status:
            return True
        return new_status in VALID_TRANSITIONS[self._status]

    def transition_to(self, new_status: TrackStatus, reason: str = "") -> bool:
        """
        Attempt a lifecycle transition.

        Returns:
            True if the transition was applied (or was a no-op), False if invalid
        """
        if new_status == self._status:
            return True

        if not self.can_transition_to(new_status):
            log.warning(
                "Invalid transition for track %d: %s -> %s%s",
                self.track_id,
                self._status,
                new_status,
                f" ({reason})" if reason else "",
            )
            return False

        self._previous_status = self._status
        self._status = new_status
        log.debug(
            "Track %d: %s -> %s%s",
            self.track_id,
            self._previous_status,
            new_status,
            f" ({reason})" if reason else "",
        )
        return True

    def snapshot(self, frame_index: int) -> TrackSnapshot:
        return TrackSnapshot(frame_index, self.track_id, self.state.to_bbox(), self.score)

    def __repr__(self) -> str:
        return f"Track(id={self.track_id}, status={self._status}, age={self.frames_since_update})"
