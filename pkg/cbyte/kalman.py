"""
Constant-velocity Kalman filter over box center, size and their velocities.

The state is (cx, cy, w, h, vx, vy, vw, vh). Process and measurement noise
scale with the box height.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .config import KalmanParams
from .core_types import AffineTransform, BBox
from .errors import KalmanDegeneracyError
from .module_registry import module_registry

module_registry.register_module(
    name="kalman",
    description="Constant-velocity box filter and affine state correction",
    logger_name="cbyte.kalman",
    debug_flag="--debug-kalman",
    category="core",
)

log = module_registry.get_module_info("kalman")["logger"]

STATE_DIM = 8
MEASUREMENT_DIM = 4


@dataclass(frozen=True, eq=False)
class KalmanState:
    """Mean (8,) and covariance (8, 8) of one track's box state."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        """Copy into read-only float64 arrays."""
        mean = np.array(self.mean, dtype=np.float64).reshape(STATE_DIM)
        covariance = np.array(self.covariance, dtype=np.float64).reshape(STATE_DIM, STATE_DIM)
        mean.setflags(write=False)
        covariance.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)

    def measurement(self) -> np.ndarray:
        """Return the measured part (cx, cy, w, h)."""
        return self.mean[:MEASUREMENT_DIM].copy()

    def to_bbox(self) -> BBox:
        """Return the state's box in top-left form, clamping negative sizes to zero."""
        cx, cy, w, h = self.mean[:MEASUREMENT_DIM]
        return BBox.from_center(cx, cy, w, h)


def bbox_to_measurement(box: BBox) -> np.ndarray:
    cx, cy = box.center
    return np.array([cx, cy, box.width, box.height], dtype=np.float64)


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


class KalmanFilter:
    """
    Box filter with pure operations: every method returns a new KalmanState.

    Args:
        params: Noise weights; defaults follow the usual 1/20 position and
            1/160 velocity weights
    """

    def __init__(self, params: Optional[KalmanParams] = None):
        """Build the transition and measurement matrices."""
        self.params = params or KalmanParams()
        self._std_weight_position = self.params.std_weight_position
        self._std_weight_velocity = self.params.std_weight_velocity

        self._motion_mat = np.eye(STATE_DIM)
        for i in range(MEASUREMENT_DIM):
            self._motion_mat[i, MEASUREMENT_DIM + i] = 1.0
        self._update_mat = np.eye(MEASUREMENT_DIM, STATE_DIM)

    def initiate(self, measurement: BBox) -> KalmanState:
        """Create a state at the measurement's center form with zero velocity."""
        if measurement.width <= 0 or measurement.height <= 0:
            raise ValueError(f"cannot initiate a track from a zero-area box {measurement}")
        mean_pos = bbox_to_measurement(measurement)
        mean = np.r_[mean_pos, np.zeros(MEASUREMENT_DIM)]

        h = measurement.height
        std = [2 * self._std_weight_position * h] * MEASUREMENT_DIM + [
            10 * self._std_weight_velocity * h
        ] * MEASUREMENT_DIM
        return KalmanState(mean, np.diag(np.square(std)))

    def _process_noise(self, height: float) -> np.ndarray:
        height = max(abs(height), self.params.min_box_size)
        std = [self._std_weight_position * height] * MEASUREMENT_DIM + [
            self._std_weight_velocity * height
        ] * MEASUREMENT_DIM
        return np.diag(np.square(std))

    def predict(self, state: KalmanState) -> KalmanState:
        """Advance one frame: x' = F x, P' = F P F^T + Q."""
        mean = self._motion_mat @ state.mean
        covariance = self._motion_mat @ state.covariance @ self._motion_mat.T
        covariance = covariance + self._process_noise(state.mean[3])
        return KalmanState(mean, _symmetrize(covariance))

    def project(self, state: KalmanState):
        """Project into measurement space: (mean, innovation covariance, measurement noise)."""
        height = max(abs(state.mean[3]), self.params.min_box_size)
        std = [self._std_weight_position * height] * MEASUREMENT_DIM
        innovation_cov = np.diag(np.square(std))
        mean = self._update_mat @ state.mean
        covariance = self._update_mat @ state.covariance @ self._update_mat.T
        return mean, covariance + innovation_cov, innovation_cov

    def update(self, state: KalmanState, measurement: BBox) -> KalmanState:
        """
        Correct the state with a measured box.

        Raises:
            KalmanDegeneracyError: if the innovation covariance is not positive definite
        """
        if measurement.width <= 0 or measurement.height <= 0:
            raise ValueError(f"cannot update with a zero-area box {measurement}")
        projected_mean, projected_cov, noise_cov = self.project(state)

        try:
            chol_factor, lower = scipy.linalg.cho_factor(projected_cov, lower=True, check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise KalmanDegeneracyError(f"innovation covariance is not invertible: {e}") from e

        kalman_gain = scipy.linalg.cho_solve(
            (chol_factor, lower), (state.covariance @ self._update_mat.T).T, check_finite=False
        ).T
        innovation = bbox_to_measurement(measurement) - projected_mean

        new_mean = state.mean + kalman_gain @ innovation
        # Joseph form
        factor = np.eye(STATE_DIM) - kalman_gain @ self._update_mat
        new_covariance = factor @ state.covariance @ factor.T + kalman_gain @ noise_cov @ kalman_gain.T

        min_size = self.params.min_box_size
        if new_mean[2] < min_size or new_mean[3] < min_size:
            new_mean = new_mean.copy()
            new_mean[2] = max(new_mean[2], min_size)
            new_mean[3] = max(new_mean[3], min_size)
        return KalmanState(new_mean, _symmetrize(new_covariance))

    def apply_affine(self, state: KalmanState, transform: AffineTransform) -> KalmanState:
        """
        Correct a predicted state for camera motion.

        R rotates each pair (cx, cy), (w, h), (vx, vy), (vw, vh); d shifts (cx, cy) only.
        The covariance is carried through M P M^T with M = block-diag(R, R, R, R).
        """
        if transform.is_identity:
            return state
        block = np.kron(np.eye(MEASUREMENT_DIM), transform.rotation)
        mean = block @ state.mean
        mean[:2] += transform.displacement
        covariance = block @ state.covariance @ block.T
        return KalmanState(mean, _symmetrize(covariance))
