"""Laplacian keypoint generation with spatially stratified sampling."""

import cv2
import numpy as np

from ..config import CmcParams
from ..core_types import GrayFrame, Keypoints


def laplacian_response(frame: GrayFrame) -> np.ndarray:
    """
    Discrete 4-neighbor Laplacian of the frame, replicate borders.

    Kernel is [[0, 1, 0], [1, -4, 1], [0, 1, 0]]; output has the frame's shape.
    """
    return cv2.Laplacian(frame.intensities, cv2.CV_64F, ksize=1, borderType=cv2.BORDER_REPLICATE)


def select_keypoints(response: np.ndarray, params: CmcParams) -> Keypoints:
    """
    Pick up to `num_keypoints` active pixels (|response| > theta_th).

    When more pixels are active than requested, the image is cut into a
    grid of buckets and buckets are visited round-robin in row-major order,
    each yielding its strongest remaining pixel. Ties inside a bucket fall
    back to row-major pixel order, so output is deterministic.

    Returns:
        (N, 2) float32 array of (x, y) pixel positions
    """
    magnitude = np.abs(response)
    ys, xs = np.nonzero(magnitude > params.theta_th)
    if len(xs) <= params.num_keypoints:
        return np.stack([xs, ys], axis=1).astype(np.float32).reshape(-1, 2)

    height, width = response.shape
    grid = params.keypoint_grid
    bucket_x = np.minimum(xs * grid // width, grid - 1)
    bucket_y = np.minimum(ys * grid // height, grid - 1)
    bucket = bucket_y * grid + bucket_x
    strength = magnitude[ys, xs]

    # nonzero() is already row-major, so a stable sort keeps that as the final tie-break
    order = np.lexsort((-strength, bucket))
    sorted_bucket = bucket[order]
    first_in_bucket = np.searchsorted(sorted_bucket, sorted_bucket, side="left")
    rank = np.arange(len(order)) - first_in_bucket

    # Only the first `depth` rounds can contribute; sort just those
    depth = int(np.searchsorted(np.cumsum(np.bincount(rank)), params.num_keypoints)) + 1
    shallow = np.flatnonzero(rank < depth)
    round_robin = shallow[np.lexsort((sorted_bucket[shallow], rank[shallow]))[: params.num_keypoints]]
    picked = order[round_robin]
    return np.stack([xs[picked], ys[picked]], axis=1).astype(np.float32)


def generate_keypoints(frame: GrayFrame, params: CmcParams) -> Keypoints:
    """Laplacian response followed by stratified selection."""
    return select_keypoints(laplacian_response(frame), params)
