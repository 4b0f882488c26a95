"""Frame-to-frame camera motion estimation: keypoints, flow, RANSAC."""

from typing import NamedTuple, Optional

import numpy as np

from ..config import CmcParams
from ..core_types import AffineTransform, GrayFrame, Keypoints
from ..module_registry import module_registry
from .keypoints import generate_keypoints
from .optical_flow import lucas_kanade
from .ransac import ransac_affine

module_registry.register_module(
    name="cmc",
    description="Camera motion compensation (Laplacian keypoints, LK flow, RANSAC)",
    logger_name="cbyte.cmc",
    debug_flag="--debug-cmc",
    category="core",
)

log = module_registry.get_module_info("cmc")["logger"]


class MotionEstimate(NamedTuple):
    """Estimated camera motion between two frames plus the keypoints for the next pair."""

    transform: AffineTransform
    keypoints: Keypoints
    tracked: int = 0
    inliers: int = 0
    fallback: bool = True


def estimate(
    prev: Optional[GrayFrame],
    curr: GrayFrame,
    p_prev: Keypoints,
    params: CmcParams,
    rng: np.random.Generator,
) -> MotionEstimate:
    """
    Estimate the affine motion mapping `prev` onto `curr`.

    Any failure (no previous frame, no keypoints, too few tracked points,
    RANSAC rejection) yields the identity transform. The returned keypoints
    are always regenerated from `curr`.
    """
    next_keypoints = generate_keypoints(curr, params)
    p_prev = np.asarray(p_prev, dtype=np.float32).reshape(-1, 2)

    if prev is None or len(p_prev) == 0:
        log.debug("Frame %d: no previous keypoints, identity motion", curr.frame_index)
        return MotionEstimate(AffineTransform.identity(), next_keypoints)

    flow = lucas_kanade(prev, curr, p_prev, params)
    fit = ransac_affine(p_prev, flow.points, flow.valid, params, rng)
    if fit is None:
        log.warning(
            "Frame %d: camera motion estimate failed (%d/%d points tracked), using identity",
            curr.frame_index,
            flow.num_valid,
            len(p_prev),
        )
        return MotionEstimate(AffineTransform.identity(), next_keypoints, tracked=flow.num_valid)

    log.debug(
        "Frame %d: %d/%d tracked, %d inliers after %d trials, d=(%.2f, %.2f), angle=%.3f deg",
        curr.frame_index,
        flow.num_valid,
        len(p_prev),
        fit.num_inliers,
        fit.iterations,
        fit.transform.displacement[0],
        fit.transform.displacement[1],
        fit.transform.angle_deg,
    )
    return MotionEstimate(fit.transform, next_keypoints, flow.num_valid, fit.num_inliers, False)
