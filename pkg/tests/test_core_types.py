"""Tests for boxes, detections, frames, affine transforms and IoU."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cbyte.core_types import (
    AffineTransform,
    BBox,
    Detection,
    GrayFrame,
    compose,
    iou,
    iou_matrix,
)
from cbyte.errors import FrameMismatchError

coords = st.floats(min_value=-500, max_value=500, allow_nan=False)
sizes = st.floats(min_value=0, max_value=300, allow_nan=False)
boxes = st.builds(BBox, coords, coords, sizes, sizes)


class TestBBox:
    """Test BBox geometry."""

    def test_center_and_area(self):
        """Test center is the box midpoint and area is width times height."""
        box = BBox(10, 20, 30, 40)
        assert box.center == (25, 40)
        assert box.area == 1200
        assert box.right == 40
        assert box.bottom == 60

    def test_negative_size_rejected(self):
        """Test negative width or height raises."""
        with pytest.raises(ValueError):
            BBox(0, 0, -1, 5)

    def test_from_center_clamps(self):
        """Test center form with negative size collapses to a zero-size box."""
        box = BBox.from_center(5, 5, -2, 4)
        assert box.width == 0
        assert box.height == 4
        assert box.center == (5, 5)


class TestDetection:
    """Test Detection validation."""

    @pytest.mark.parametrize("score", [-0.01, 1.01])
    def test_score_out_of_range(self, score):
        """Test scores outside [0, 1] are rejected."""
        with pytest.raises(ValueError):
            Detection(BBox(0, 0, 1, 1), score)

    def test_default_class(self):
        """Test class id defaults to 0."""
        assert Detection(BBox(0, 0, 1, 1), 1.0).class_id == 0


class TestGrayFrame:
    """Test GrayFrame validation."""

    def test_reshapes_flat_intensities(self):
        """Test flat intensities are stored row-major as (height, width)."""
        frame = GrayFrame(3, 2, np.linspace(0, 1, 6), 0)
        assert frame.shape == (2, 3)
        assert frame.intensities[1, 0] == pytest.approx(0.6)

    def test_wrong_length(self):
        """Test a pixel count mismatch raises FrameMismatchError."""
        with pytest.raises(FrameMismatchError):
            GrayFrame(3, 2, np.zeros(5), 0)

    def test_out_of_range_intensity(self):
        """Test intensities outside [0, 1] are rejected."""
        with pytest.raises(ValueError):
            GrayFrame(2, 1, np.array([0.5, 1.5]), 0)

    def test_from_uint8_round_trips_pixels(self):
        """Test 8-bit pixels are normalized and quantize back exactly."""
        pixels = np.arange(12, dtype=np.uint8).reshape(3, 4) * 20
        frame = GrayFrame.from_uint8(pixels, 7)
        assert frame.frame_index == 7
        assert frame.intensities.max() == pytest.approx(220 / 255)
        np.testing.assert_array_equal(frame.pixels_u8, pixels)

    def test_from_uint8_keeps_source_pixels(self):
        """Test an 8-bit source is reused rather than requantized."""
        pixels = np.full((4, 5), 77, dtype=np.uint8)
        frame = GrayFrame.from_uint8(pixels, 0)
        assert np.shares_memory(frame.pixels_u8, pixels)

    def test_float_frame_quantizes_to_nearest(self):
        """Test float intensities round to the nearest 8-bit level."""
        intensities = np.array([0.0, 0.1, 0.5, 0.999, 1.0])
        frame = GrayFrame(5, 1, intensities, 0)
        assert frame.pixels_u8.dtype == np.uint8
        np.testing.assert_array_equal(frame.pixels_u8, np.round(intensities * 255).astype(np.uint8).reshape(1, 5))


class TestAffineTransform:
    """Test AffineTransform construction and algebra."""

    def test_from_matrix_splits_by_column(self):
        """Test R is the first two columns and d the last."""
        t = AffineTransform.from_matrix(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
        np.testing.assert_array_equal(t.rotation, [[1, 2], [4, 5]])
        np.testing.assert_array_equal(t.displacement, [3, 6])
        np.testing.assert_array_equal(t.matrix, [[1, 2, 3], [4, 5, 6]])

    def test_from_matrix_wrong_shape(self):
        """Test non 2x3 input raises."""
        with pytest.raises(ValueError):
            AffineTransform.from_matrix(np.eye(3))

    def test_identity(self):
        """Test identity properties."""
        t = AffineTransform.identity()
        assert t.is_identity
        assert t.determinant == 1.0
        np.testing.assert_array_equal(t.apply(np.array([3.0, 4.0])), [3.0, 4.0])

    def test_arrays_are_read_only(self):
        """Test transform arrays cannot be mutated in place."""
        t = AffineTransform.translation(1, 2)
        with pytest.raises(ValueError):
            t.displacement[0] = 5

    def test_rotation_about_center(self):
        """Test the pivot is a fixed point and the angle is recovered."""
        t = AffineTransform.rotation_deg(90, center=(10, 10))
        np.testing.assert_allclose(t.apply(np.array([10.0, 10.0])), [10, 10], atol=1e-12)
        np.testing.assert_allclose(t.apply(np.array([11.0, 10.0])), [10, 11], atol=1e-12)
        assert t.angle_deg == pytest.approx(90)

    def test_compose_order(self):
        """Test compose(a2, a1) applies a1 first."""
        a1 = AffineTransform.translation(1, 0)
        a2 = AffineTransform.rotation_deg(90)
        point = np.array([1.0, 0.0])
        np.testing.assert_allclose(compose(a2, a1).apply(point), a2.apply(a1.apply(point)), atol=1e-12)
        np.testing.assert_allclose(compose(a2, a1).apply(point), [0, 2], atol=1e-12)

    @given(
        st.floats(min_value=-45, max_value=45),
        st.floats(min_value=-50, max_value=50),
        st.floats(min_value=-50, max_value=50),
    )
    def test_opposite_motions_cancel(self, degrees, dx, dy):
        """Test a rotation plus shift followed by its opposite is the identity."""
        forward = compose(AffineTransform.translation(dx, dy), AffineTransform.rotation_deg(degrees))
        backward = compose(AffineTransform.rotation_deg(-degrees), AffineTransform.translation(-dx, -dy))
        assert compose(backward, forward).allclose(AffineTransform.identity(), atol=1e-9)


class TestIoU:
    """Test IoU and the pairwise IoU matrix."""

    def test_known_values(self):
        """Test IoU of identical, disjoint and half-overlapping boxes."""
        a = BBox(0, 0, 10, 10)
        assert iou(a, a) == 1.0
        assert iou(a, BBox(20, 20, 5, 5)) == 0.0
        assert iou(a, BBox(5, 0, 10, 10)) == pytest.approx(50 / 150)

    def test_zero_area(self):
        """Test zero-area boxes have IoU 0."""
        assert iou(BBox(0, 0, 0, 0), BBox(0, 0, 0, 0)) == 0.0

    def test_touching_edges(self):
        """Test boxes sharing only an edge do not overlap."""
        assert iou(BBox(0, 0, 10, 10), BBox(10, 0, 10, 10)) == 0.0

    @given(boxes, boxes)
    def test_symmetric_and_bounded(self, a, b):
        """Test IoU is symmetric and in [0, 1]."""
        value = iou(a, b)
        assert 0.0 <= value <= 1.0 + 1e-12
        assert value == pytest.approx(iou(b, a), abs=1e-12)

    @given(st.lists(boxes, max_size=5), st.lists(boxes, max_size=5))
    def test_matrix_matches_scalar(self, left, right):
        """Test the vectorized matrix agrees with pairwise iou()."""
        matrix = iou_matrix(left, right)
        assert matrix.shape == (len(left), len(right))
        for i, a in enumerate(left):
            for j, b in enumerate(right):
                assert matrix[i, j] == pytest.approx(iou(a, b), abs=1e-9)

    def test_center_convention(self):
        """Test center() matches the left + width / 2 convention used by the filter."""
        box = BBox(1, 2, 3, 4)
        assert box.center == (1 + 1.5, 2 + 2)
        assert math.isclose(BBox.from_center(*box.center, 3, 4).left, 1)
