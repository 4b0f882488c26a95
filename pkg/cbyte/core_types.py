"""Geometry primitives, detections and frames shared by every tracker module."""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import cv2
import numpy as np

from .errors import FrameMismatchError

# (N, 2) float32 rows of subpixel (x, y) pixel positions
Keypoints = np.ndarray


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box stored as top-left corner plus size, in pixels."""

    left: float
    top: float
    width: float
    height: float

    def __post_init__(self):
        """Reject negative sizes."""
        if self.width < 0 or self.height < 0:
            raise ValueError(f"box size must be non-negative, got {self.width}x{self.height}")

    @property
    def center(self) -> Tuple[float, float]:
        """Return the box center (left + width/2, top + height/2)."""
        return (self.left + self.width / 2, self.top + self.height / 2)

    @property
    def area(self) -> float:
        """Return width * height."""
        return self.width * self.height

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    @classmethod
    def from_center(cls, cx: float, cy: float, width: float, height: float) -> "BBox":
        """Build a box from center form; negative sizes are clamped to zero."""
        width = max(float(width), 0.0)
        height = max(float(height), 0.0)
        return cls(float(cx) - width / 2, float(cy) - height / 2, width, height)


@dataclass(frozen=True)
class Detection:
    """Detector output: a box, a confidence score in [0, 1] and a class id."""

    box: BBox
    score: float
    class_id: int = 0

    def __post_init__(self):
        """Reject scores outside [0, 1]."""
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"detection score must be in [0, 1], got {self.score}")


@dataclass(frozen=True, eq=False)
class GrayFrame:
    """Grayscale frame with intensities normalized to [0, 1], stored row-major (height, width)."""

    width: int
    height: int
    intensities: np.ndarray
    frame_index: int

    def __post_init__(self):
        """Validate dimensions and the intensity range, then store the pixels as (height, width)."""
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"frame dimensions must be positive, got {self.width}x{self.height}")
        if self.frame_index < 0:
            raise ValueError(f"frame_index must be >= 0, got {self.frame_index}")
        pixels = np.asarray(self.intensities, dtype=np.float64)
        if pixels.size != self.width * self.height:
            raise FrameMismatchError(
                f"expected {self.width * self.height} intensities, got {pixels.size}"
            )
        pixels = pixels.reshape(self.height, self.width)
        if pixels.size and (pixels.min() < 0.0 or pixels.max() > 1.0):
            raise ValueError("intensities must lie in [0, 1]")
        object.__setattr__(self, "intensities", pixels)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    @classmethod
    def from_uint8(cls, pixels: np.ndarray, frame_index: int) -> "GrayFrame":
        """Build a frame from an 8-bit image, dividing by 255."""
        pixels = np.asarray(pixels)
        if pixels.ndim != 2:
            raise ValueError(f"expected a 2-D grayscale image, got shape {pixels.shape}")
        height, width = pixels.shape
        frame = cls(width, height, pixels.astype(np.float64) / 255.0, frame_index)
        if pixels.dtype == np.uint8:
            object.__setattr__(frame, "pixels_u8", np.ascontiguousarray(pixels))
        return frame

    @cached_property
    def pixels_u8(self) -> np.ndarray:
        """The frame quantized back to 8 bits, computed once."""
        return cv2.convertScaleAbs(self.intensities, alpha=255.0)


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """Camera motion x' = R x + d, split from a 2x3 matrix [R | d]."""

    rotation: np.ndarray
    displacement: np.ndarray

    def __post_init__(self):
        """Coerce to float64 arrays of the right shape and freeze them."""
        rotation = np.array(self.rotation, dtype=np.float64).reshape(2, 2)
        displacement = np.array(self.displacement, dtype=np.float64).reshape(2)
        rotation.setflags(write=False)
        displacement.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "displacement", displacement)

    @classmethod
    def identity(cls) -> "AffineTransform":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def translation(cls, dx: float, dy: float) -> "AffineTransform":
        return cls(np.eye(2), np.array([dx, dy]))

    @classmethod
    def rotation_deg(cls, degrees: float, center: Tuple[float, float] = (0.0, 0.0)) -> "AffineTransform":
        """Rotation by `degrees` about `center`."""
        theta = math.radians(degrees)
        c, s = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        pivot = np.asarray(center, dtype=np.float64)
        return cls(rot, pivot - rot @ pivot)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "AffineTransform":
        """Split a 2x3 matrix by column into R (first two columns) and d (last column)."""
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.shape != (2, 3):
            raise ValueError(f"expected a 2x3 matrix, got shape {matrix.shape}")
        return cls(matrix[:, :2], matrix[:, 2])

    @property
    def matrix(self) -> np.ndarray:
        """Return the full 2x3 matrix [R | d]."""
        return np.hstack([self.rotation, self.displacement.reshape(2, 1)])

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.rotation))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.rotation, np.eye(2)) and not self.displacement.any())

    @property
    def angle_deg(self) -> float:
        """Rotation angle implied by the first column of R."""
        return math.degrees(math.atan2(self.rotation[1, 0], self.rotation[0, 0]))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map a point (2,) or points (N, 2) through the transform."""
        points = np.asarray(points, dtype=np.float64)
        return points @ self.rotation.T + self.displacement

    def allclose(self, other: "AffineTransform", atol: float = 1e-9) -> bool:
        return bool(
            np.allclose(self.rotation, other.rotation, atol=atol)
            and np.allclose(self.displacement, other.displacement, atol=atol)
        )


def compose(a2: AffineTransform, a1: AffineTransform) -> AffineTransform:
    """Return the transform that applies a1 first, then a2: R = R2 R1, d = R2 d1 + d2."""
    return AffineTransform(a2.rotation @ a1.rotation, a2.rotation @ a1.displacement + a2.displacement)


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes; 0 when the union has zero area."""
    inter_w = min(a.right, b.right) - max(a.left, b.left)
    inter_h = min(a.bottom, b.bottom) - max(a.top, b.top)
    if inter_w <= 0 or inter_h <= 0:
        return 0.0
    inter = inter_w * inter_h
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def boxes_to_array(boxes: Sequence[BBox]) -> np.ndarray:
    """Pack boxes into an (N, 4) tlwh array."""
    if not boxes:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([(b.left, b.top, b.width, b.height) for b in boxes], dtype=np.float64)


def iou_matrix(boxes_a: Sequence[BBox], boxes_b: Sequence[BBox]) -> np.ndarray:
    """Pairwise IoU between two box lists, shape (len(a), len(b))."""
    a = boxes_to_array(boxes_a)
    b = boxes_to_array(boxes_b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)), dtype=np.float64)

    a_x2 = a[:, 0] + a[:, 2]
    a_y2 = a[:, 1] + a[:, 3]
    b_x2 = b[:, 0] + b[:, 2]
    b_y2 = b[:, 1] + b[:, 3]

    inter_w = np.minimum(a_x2[:, None], b_x2[None, :]) - np.maximum(a[:, 0][:, None], b[:, 0][None, :])
    inter_h = np.minimum(a_y2[:, None], b_y2[None, :]) - np.maximum(a[:, 1][:, None], b[:, 1][None, :])
    inter = np.clip(inter_w, 0.0, None) * np.clip(inter_h, 0.0, None)
    union = (a[:, 2] * a[:, 3])[:, None] + (b[:, 2] * b[:, 3])[None, :] - inter

    out = np.zeros_like(inter)
    np.divide(inter, union, out=out, where=union > 0)
    return out
