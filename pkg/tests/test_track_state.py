"""Tests for the track lifecycle state machine."""

import logging

from cbyte.core_types import BBox
from cbyte.kalman import KalmanFilter
from cbyte.track_state import VALID_TRANSITIONS, Track, TrackStatus


class TestTrackStatus:
    """Test the TrackStatus enum."""

    def test_state_string_values(self):
        """Test that state enums have correct string values."""
        assert str(TrackStatus.TENTATIVE) == "tentative"
        assert str(TrackStatus.TRACKED) == "tracked"
        assert str(TrackStatus.LOST) == "lost"
        assert str(TrackStatus.REMOVED) == "removed"

    def test_removed_is_terminal(self):
        """Test nothing leaves REMOVED."""
        assert VALID_TRANSITIONS[TrackStatus.REMOVED] == set()


class TestTrack:
    """Test the Track lifecycle."""

    def setup_method(self):
        """Set up test method fixtures."""
        self.track = Track(7, KalmanFilter().initiate(BBox(0, 0, 10, 20)), score=0.8, start_frame=3)

    def test_initial_state(self):
        """Test that a new track is tentative with one hit."""
        assert self.track.status == TrackStatus.TENTATIVE
        assert self.track.previous_status is None
        assert self.track.hit_count == 1
        assert self.track.frames_since_update == 0
        assert self.track.is_live

    def test_valid_transition_sequence(self):
        """Test a confirm, lose, recover, lose, remove sequence."""
        transitions = [
            (TrackStatus.TRACKED, "confirmed"),
            (TrackStatus.LOST, "unmatched"),
            (TrackStatus.TRACKED, "re-associated"),
            (TrackStatus.LOST, "unmatched"),
            (TrackStatus.REMOVED, "expired"),
        ]
        for status, reason in transitions:
            assert self.track.transition_to(status, reason)
            assert self.track.status == status
        assert not self.track.is_live

    def test_invalid_transition(self, caplog):
        """Test that invalid transitions are rejected and logged."""
        with caplog.at_level(logging.WARNING, logger="cbyte.track_state"):
            assert not self.track.transition_to(TrackStatus.LOST, "invalid")
        assert self.track.status == TrackStatus.TENTATIVE
        assert "Invalid transition for track 7" in caplog.text

    def test_same_state_transition(self):
        """Test that same-state transitions are allowed no-ops."""
        assert self.track.transition_to(TrackStatus.TENTATIVE, "duplicate")
        assert self.track.previous_status is None

    def test_previous_status_recorded(self):
        """Test a transition remembers the status it left."""
        self.track.transition_to(TrackStatus.TRACKED)
        assert self.track.previous_status == TrackStatus.TENTATIVE
        assert not self.track.can_transition_to(TrackStatus.TENTATIVE)

    def test_removed_cannot_revive(self):
        """Test a removed track stays removed."""
        self.track.transition_to(TrackStatus.REMOVED)
        assert not self.track.can_transition_to(TrackStatus.TRACKED)
        assert not self.track.transition_to(TrackStatus.TRACKED)

    def test_snapshot(self):
        """Test a snapshot captures id, frame, box and score."""
        snap = self.track.snapshot(12)
        assert snap.frame_index == 12
        assert snap.track_id == 7
        assert snap.box == BBox(0, 0, 10, 20)
        assert snap.score == 0.8
