"""Offline overlay rendering of tracking results onto sequence frames."""

import os

# Headless pygame: set before pygame is imported
os.environ.setdefault("PYGAME_HIDE_SUPPORT_PROMPT", "1")
os.environ.setdefault("SDL_VIDEODRIVER", "dummy")

from collections import defaultdict, deque  # noqa: E402
from pathlib import Path  # noqa: E402
from typing import Deque, Dict, List, Optional, Tuple, Union  # noqa: E402

import numpy as np  # noqa: E402
import pygame  # noqa: E402

from .config import RenderConfig  # noqa: E402
from .fileio import atomic_directory  # noqa: E402
from .frames import frame_filename, read_image  # noqa: E402
from .module_registry import module_registry  # noqa: E402
from .mot_format import FrameRecords, MotRecord  # noqa: E402

module_registry.register_module(
    name="render",
    description="Overlay rendering of tracks",
    logger_name="cbyte.render",
    debug_flag="--debug-render",
    category="io",
)

log = module_registry.get_module_info("render")["logger"]

GOLDEN_RATIO_CONJUGATE = 0.618033988749895
RGB = Tuple[int, int, int]


def id_color(track_id: int) -> RGB:
    """Deterministic, well-spread color for a track id."""
    color = pygame.Color(0, 0, 0)
    color.hsva = ((track_id * GOLDEN_RATIO_CONJUGATE) % 1.0 * 360.0, 85, 95, 100)
    return (color.r, color.g, color.b)


def gray_surface(pixels: np.ndarray) -> pygame.Surface:
    """RGB surface from a (height, width) uint8 image."""
    rgb = np.repeat(np.asarray(pixels, dtype=np.uint8).T[:, :, np.newaxis], 3, axis=2)
    return pygame.surfarray.make_surface(rgb)


class OverlayRenderer:
    """Draws boxes, id labels and trailing trajectories; trails persist across `draw` calls."""

    def __init__(self, config: Optional[RenderConfig] = None):
        """Initialize with empty trails."""
        self.config = config or RenderConfig()
        self._trails: Dict[int, Deque[Tuple[int, Tuple[float, float]]]] = defaultdict(deque)
        self._font: Optional[pygame.font.Font] = None
        if self.config.draw_labels:
            pygame.font.init()
            self._font = pygame.font.Font(None, self.config.font_size)

    def _update_trail(self, frame: int, record: MotRecord) -> List[Tuple[float, float]]:
        trail = self._trails[record.track_id]
        trail.append((frame, record.box.center))
        while trail and trail[0][0] <= frame - self.config.trail_length:
            trail.popleft()
        return [center for _, center in trail]

    def draw(self, surface: pygame.Surface, frame: int, records: List[MotRecord]) -> None:
        """Annotate `surface` with the records of one frame."""
        width = self.config.line_width
        for record in sorted(records, key=lambda r: r.track_id):
            color = id_color(record.track_id)
            rect = pygame.Rect(
                int(round(record.left)), int(round(record.top)), int(round(record.width)), int(round(record.height))
            )
            pygame.draw.rect(surface, color, rect, width)

            points = self._update_trail(frame, record)
            if len(points) >= 2:
                pygame.draw.lines(surface, color, False, points, width)

            if self._font is not None:
                label = self._font.render(str(record.track_id), True, color)
                surface.blit(label, (rect.left, max(rect.top - label.get_height(), 0)))


def render_sequence(
    frames: Dict[int, Path],
    results: FrameRecords,
    out_dir: Union[str, Path],
    config: Optional[RenderConfig] = None,
) -> int:
    """
    Write one annotated PNG per frame image into `out_dir`.

    Result frames with no image are skipped with a warning.

    Returns:
        Number of frames written
    """
    renderer = OverlayRenderer(config)
    for frame in sorted(set(results) - set(frames)):
        log.warning("No image for frame %d; skipping its %d records", frame, len(results[frame]))

    written = 0
    with atomic_directory(out_dir) as tmp:
        for frame, path in frames.items():
            surface = gray_surface(read_image(path))
            renderer.draw(surface, frame, results.get(frame, []))
            pygame.image.save(surface, str(tmp / frame_filename(frame, ".png")))
            written += 1
    log.info("Rendered %d frames into %s", written, out_dir)
    return written
