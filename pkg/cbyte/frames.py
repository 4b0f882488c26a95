"""Numbered image directories: file stem digits give the 1-based MOT frame number."""

import re
from pathlib import Path
from typing import Dict, Union

import cv2
import numpy as np

from .core_types import GrayFrame
from .errors import MissingFrameError
from .module_registry import module_registry

module_registry.register_module(
    name="frames",
    description="Frame directory loading and writing",
    logger_name="cbyte.frames",
    debug_flag="--debug-frames",
    category="io",
)

log = module_registry.get_module_info("frames")["logger"]

IMAGE_SUFFIXES = {".pgm", ".pnm", ".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"}
_NUMBER = re.compile(r"(\d+)$")


def frame_filename(frame: int, suffix: str = ".pgm") -> str:
    """Zero-padded file name for a 1-based MOT frame number."""
    return f"{frame:06d}{suffix}"


def list_frames(directory: Union[str, Path]) -> Dict[int, Path]:
    """
    Map MOT frame numbers to image paths.

    Files without a trailing number in their stem or with an unknown suffix are ignored.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"frames directory not found: {directory}")
    frames: Dict[int, Path] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        match = _NUMBER.search(path.stem)
        if not match:
            continue
        number = int(match.group(1))
        if number < 1:
            log.warning("Ignoring %s: frame numbers start at 1", path.name)
            continue
        if number in frames:
            log.warning("Duplicate frame %d: keeping %s, ignoring %s", number, frames[number].name, path.name)
            continue
        frames[number] = path
    return dict(sorted(frames.items()))


def read_image(path: Union[str, Path]) -> np.ndarray:
    """Read an 8-bit image as a 2-D grayscale array."""
    pixels = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
    if pixels is None:
        raise OSError(f"cannot read image {path}")
    return pixels


def load_frame(path: Union[str, Path], frame: int) -> GrayFrame:
    """Load the image for a 1-based MOT frame as a normalized GrayFrame (frame_index = frame - 1)."""
    return GrayFrame.from_uint8(read_image(path), frame - 1)


def frame_path(frames: Dict[int, Path], frame: int) -> Path:
    """Look up a frame's image, raising MissingFrameError when absent."""
    try:
        return frames[frame]
    except KeyError:
        raise MissingFrameError(frame) from None


def write_frame(path: Union[str, Path], frame: GrayFrame) -> Path:
    """Write a frame as an 8-bit image; the suffix picks the format."""
    path = Path(path)
    if not cv2.imwrite(str(path), frame.pixels_u8):
        raise OSError(f"cannot write image {path}")
    return path
