"""Shared fixtures: seeded textures, frames and synthetic sequences."""

import numpy as np
import pytest

from cbyte.config import SynthConfig
from cbyte.core_types import BBox, Detection, GrayFrame
from cbyte.evaluation.synth import noise_texture, synth_sequence


def make_texture(seed: int = 0, height: int = 120, width: int = 160, amplitude: float = 0.8) -> np.ndarray:
    """Seeded multi-octave noise image in [0, 1]."""
    return noise_texture(np.random.default_rng(seed), height, width, amplitude)


def make_frame(pixels: np.ndarray, frame_index: int = 0) -> GrayFrame:
    height, width = pixels.shape
    return GrayFrame(width, height, pixels, frame_index)


def shifted(pixels: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """Image content moved by (dx, dy) px, edges replicated."""
    height, width = pixels.shape
    padded = np.pad(pixels, ((abs(dy), abs(dy)), (abs(dx), abs(dx))), mode="edge")
    top = abs(dy) - dy
    left = abs(dx) - dx
    return padded[top : top + height, left : left + width]


def det(left: float, top: float, width: float, height: float, score: float = 0.9) -> Detection:
    return Detection(BBox(left, top, width, height), score)


@pytest.fixture
def texture():
    """A 120x160 seeded noise texture."""
    return make_texture()


@pytest.fixture(scope="session")
def small_sequence():
    """A short synthetic sequence with a panning camera."""
    return synth_sequence(
        SynthConfig(frames=12, width=160, height=120, objects=3, object_size_min=16, object_size_max=24, camera_pan_x=2)
    )
