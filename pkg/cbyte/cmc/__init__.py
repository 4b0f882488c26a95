"""Camera motion compensation between consecutive frames."""

from .estimator import MotionEstimate, estimate
from .keypoints import generate_keypoints, laplacian_response, select_keypoints
from .optical_flow import FlowResult, lucas_kanade
from .ransac import RansacFit, fit_affine_lstsq, ransac_affine

__all__ = [
    "FlowResult",
    "MotionEstimate",
    "RansacFit",
    "estimate",
    "fit_affine_lstsq",
    "generate_keypoints",
    "laplacian_response",
    "lucas_kanade",
    "ransac_affine",
    "select_keypoints",
]
