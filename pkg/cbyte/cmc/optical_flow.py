"""Pyramidal Lucas-Kanade flow for sparse keypoints."""

from dataclasses import dataclass

import cv2
import numpy as np

from ..config import CmcParams
from ..core_types import GrayFrame, Keypoints
from ..errors import FrameMismatchError


@dataclass(frozen=True, eq=False)
class FlowResult:
    """Tracked positions in the current frame and a parallel validity mask."""

    points: Keypoints
    valid: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    @property
    def num_valid(self) -> int:
        return int(np.count_nonzero(self.valid))


def lucas_kanade(prev: GrayFrame, curr: GrayFrame, points: Keypoints, params: CmcParams) -> FlowResult:
    """
    Track `points` from `prev` into `curr`.

    A point is invalid when its structure matrix has minimum eigenvalue below
    `lk_min_eigenvalue`, when iteration fails, or when it lands outside the frame.

    Raises:
        FrameMismatchError: if the frames differ in size
    """
    if prev.shape != curr.shape:
        raise FrameMismatchError(f"frame sizes differ: {prev.width}x{prev.height} vs {curr.width}x{curr.height}")

    points = np.ascontiguousarray(points, dtype=np.float32).reshape(-1, 2)
    if len(points) == 0:
        return FlowResult(np.zeros((0, 2), dtype=np.float32), np.zeros(0, dtype=bool))

    tracked, status, _ = cv2.calcOpticalFlowPyrLK(
        prev.pixels_u8,
        curr.pixels_u8,
        points.reshape(-1, 1, 2),
        None,
        winSize=(params.lk_window, params.lk_window),
        maxLevel=params.lk_pyramid_levels - 1,
        criteria=(cv2.TERM_CRITERIA_COUNT | cv2.TERM_CRITERIA_EPS, params.lk_max_iters, params.lk_epsilon),
        flags=cv2.OPTFLOW_LK_GET_MIN_EIGENVALS,
        minEigThreshold=params.lk_min_eigenvalue,
    )
    tracked = tracked.reshape(-1, 2)
    valid = status.reshape(-1).astype(bool)
    valid &= np.all(np.isfinite(tracked), axis=1)
    valid &= (
        (tracked[:, 0] >= 0)
        & (tracked[:, 0] < curr.width)
        & (tracked[:, 1] >= 0)
        & (tracked[:, 1] < curr.height)
    )
    return FlowResult(tracked, valid)
