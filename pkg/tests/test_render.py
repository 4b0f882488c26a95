"""Tests for overlay rendering."""

import logging

import cv2
import numpy as np
import pygame

from cbyte.config import RenderConfig
from cbyte.frames import frame_filename, list_frames, read_image
from cbyte.mot_format import MotRecord
from cbyte.render import OverlayRenderer, gray_surface, id_color, render_sequence


def write_gray_frames(directory, count, value=128):
    directory.mkdir()
    for frame in range(1, count + 1):
        cv2.imwrite(str(directory / frame_filename(frame)), np.full((48, 64), value, dtype=np.uint8))
    return list_frames(directory)


class TestColors:
    """Test id colors."""

    def test_deterministic(self):
        assert id_color(5) == id_color(5)

    def test_neighbouring_ids_differ(self):
        colors = {id_color(i) for i in range(1, 20)}
        assert len(colors) == 19


class TestOverlay:
    """Test drawing on surfaces."""

    def test_gray_surface_orientation(self):
        pixels = np.zeros((10, 20), dtype=np.uint8)
        pixels[2, 15] = 255
        surface = gray_surface(pixels)
        assert surface.get_size() == (20, 10)
        assert tuple(surface.get_at((15, 2)))[:3] == (255, 255, 255)

    def test_box_drawn_in_track_color(self):
        """Test the box outline uses the id color."""
        surface = gray_surface(np.zeros((48, 64), dtype=np.uint8))
        renderer = OverlayRenderer(RenderConfig(draw_labels=False))
        renderer.draw(surface, 1, [MotRecord(1, 3, 10, 20, 20, 10)])
        assert tuple(surface.get_at((10, 25)))[:3] == id_color(3)
        assert tuple(surface.get_at((20, 25)))[:3] == (0, 0, 0)

    def test_trail_length(self):
        """Test trails keep only the last trail_length frames."""
        renderer = OverlayRenderer(RenderConfig(trail_length=3, draw_labels=False))
        surface = gray_surface(np.zeros((48, 64), dtype=np.uint8))
        for frame in range(1, 7):
            renderer.draw(surface, frame, [MotRecord(frame, 1, frame, 0, 4, 4)])
        assert [f for f, _ in renderer._trails[1]] == [4, 5, 6]


class TestRenderSequence:
    """Test writing annotated frames."""

    def test_empty_results_copy_frames(self, tmp_path):
        """Test frames without results are written unannotated."""
        frames = write_gray_frames(tmp_path / "frames", 3)
        assert render_sequence(frames, {}, tmp_path / "overlay") == 3
        written = sorted(p.name for p in (tmp_path / "overlay").iterdir())
        assert written == ["000001.png", "000002.png", "000003.png"]
        assert (read_image(tmp_path / "overlay" / "000002.png") == 128).all()

    def test_results_without_images_warn(self, tmp_path, caplog):
        frames = write_gray_frames(tmp_path / "frames", 2)
        results = {1: [MotRecord(1, 1, 5, 5, 10, 10)], 9: [MotRecord(9, 1, 5, 5, 10, 10)]}
        with caplog.at_level(logging.WARNING, logger="cbyte.render"):
            assert render_sequence(frames, results, tmp_path / "overlay") == 2
        assert "No image for frame 9" in caplog.text

    def test_annotated_frame_changes(self, tmp_path):
        frames = write_gray_frames(tmp_path / "frames", 1)
        render_sequence(frames, {1: [MotRecord(1, 2, 5, 5, 30, 30)]}, tmp_path / "overlay")
        surface = pygame.image.load(str(tmp_path / "overlay" / "000001.png"))
        assert tuple(surface.get_at((5, 25)))[:3] == id_color(2)
