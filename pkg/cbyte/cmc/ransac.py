"""RANSAC estimation of a full 6-DOF affine transform from point correspondences."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import CmcParams
from ..core_types import AffineTransform

MIN_SAMPLE = 3


@dataclass(frozen=True, eq=False)
class RansacFit:
    """Accepted model with the best trial's inlier mask over the input correspondences."""

    transform: AffineTransform
    inliers: np.ndarray
    iterations: int

    @property
    def num_inliers(self) -> int:
        return int(np.count_nonzero(self.inliers))


def fit_affine_lstsq(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Least-squares 2x3 affine mapping src -> dst (exact for three non-collinear points)."""
    design = np.hstack([src, np.ones((len(src), 1))])
    solution, *_ = np.linalg.lstsq(design, dst, rcond=None)
    return solution.T


def _solve_minimal(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Exact 2x3 affine through three non-collinear correspondences."""
    design = np.hstack([src, np.ones((MIN_SAMPLE, 1))])
    return np.linalg.solve(design, dst).T


def _triangle_area(points: np.ndarray) -> float:
    (x0, y0), (x1, y1), (x2, y2) = points
    return 0.5 * abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))


def _required_iterations(inlier_ratio: float, confidence: float, cap: int) -> int:
    """Trials needed to draw one all-inlier minimal sample with the given confidence."""
    p_good = inlier_ratio**MIN_SAMPLE
    if p_good >= 1.0:
        return 1
    if p_good <= 0.0:
        return cap
    needed = math.log(1.0 - confidence) / math.log(1.0 - p_good)
    return min(cap, max(1, int(math.ceil(needed))))


def ransac_affine(
    p_prev: np.ndarray,
    p_curr: np.ndarray,
    valid: np.ndarray,
    params: CmcParams,
    rng: np.random.Generator,
) -> Optional[RansacFit]:
    """
    Robustly fit p_curr ~ R p_prev + d.

    Minimal samples of three correspondences are drawn from the valid ones;
    collinear samples and reflections (det R <= 0) are rejected. The model
    with the most inliers (reprojection error <= ransac_inlier_px) is refit
    by least squares on those inliers. Iteration stops early once the
    running inlier ratio gives `ransac_confidence` of having sampled an
    all-inlier triple.

    Returns:
        The fit, or None when fewer than three valid correspondences exist,
        the best trial has fewer than `ransac_min_inliers` inliers, or the
        refit is a reflection
    """
    p_prev = np.asarray(p_prev, dtype=np.float64).reshape(-1, 2)
    p_curr = np.asarray(p_curr, dtype=np.float64).reshape(-1, 2)
    valid = np.asarray(valid, dtype=bool).reshape(-1)
    candidates = np.flatnonzero(valid)
    src = p_prev[candidates]
    dst = p_curr[candidates]
    count = len(candidates)
    if count < MIN_SAMPLE:
        return None

    best_mask: Optional[np.ndarray] = None
    best_count = 0
    needed = params.ransac_max_iters
    iteration = 0
    while iteration < needed:
        iteration += 1
        sample = rng.choice(count, size=MIN_SAMPLE, replace=False)
        area = _triangle_area(src[sample])
        if area == 0.0 or area < params.ransac_min_triangle_area:
            continue
        model = _solve_minimal(src[sample], dst[sample])
        if np.linalg.det(model[:, :2]) <= 0:
            continue

        residual = np.linalg.norm(src @ model[:, :2].T + model[:, 2] - dst, axis=1)
        mask = residual <= params.ransac_inlier_px
        inlier_count = int(np.count_nonzero(mask))
        if inlier_count > best_count:
            best_count = inlier_count
            best_mask = mask
            needed = _required_iterations(inlier_count / count, params.ransac_confidence, params.ransac_max_iters)

    if best_mask is None or best_count < params.ransac_min_inliers:
        return None

    refit = fit_affine_lstsq(src[best_mask], dst[best_mask])
    if np.linalg.det(refit[:, :2]) <= 0:
        return None

    inliers = np.zeros(len(valid), dtype=bool)
    inliers[candidates[best_mask]] = True
    return RansacFit(AffineTransform.from_matrix(refit), inliers, iteration)
