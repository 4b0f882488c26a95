"""
Synthetic tracking sequences with planted camera motion.

Textured squares move over a textured background while a virtual camera pans,
rotates and occasionally jumps. Ground truth, detections and the planted
frame-to-frame camera transforms are computed up front; pixels are rendered
lazily per frame so long sequences need not be held in memory.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import cv2
import numpy as np

from ..config import SynthConfig
from ..core_types import AffineTransform, Detection, GrayFrame, compose
from ..errors import SynthConfigError
from ..fileio import atomic_directory
from ..frames import frame_filename, write_frame
from ..module_registry import module_registry
from ..mot_format import FrameRecords, MotRecord, flatten_records, format_number, write_mot

module_registry.register_module(
    name="synth",
    description="Synthetic sequence generator",
    logger_name="cbyte.synth",
    debug_flag="--debug-synth",
    category="evaluation",
)

log = module_registry.get_module_info("synth")["logger"]

# Per-pixel, 4 px and 16 px noise cells, mixed with these weights
_OCTAVES = ((1, 0.6), (4, 0.25), (16, 0.15))


def noise_texture(rng: np.random.Generator, height: int, width: int, amplitude: float) -> np.ndarray:
    """Multi-octave uniform noise centered on 0.5 with peak-to-peak `amplitude`."""
    mix = np.zeros((height, width), dtype=np.float64)
    for cell, weight in _OCTAVES:
        coarse = rng.random((-(-height // cell), -(-width // cell)))
        mix += weight * np.kron(coarse, np.ones((cell, cell)))[:height, :width]
    return 0.5 + amplitude * (mix - 0.5)


def camera_transforms(cfg: SynthConfig) -> List[AffineTransform]:
    """
    Planted frame-to-frame camera transforms, one per consecutive frame pair.

    Entry t-1 maps image coordinates of frame t-1 to frame t: the constant pan
    and rotation (about the image center), followed by a jump every
    `camera_jump_interval` frames. Jumps alternate in sign, so the view
    shakes back and forth instead of drifting.
    """
    center = (cfg.width / 2.0, cfg.height / 2.0)
    steady = compose(
        AffineTransform.translation(cfg.camera_pan_x, cfg.camera_pan_y),
        AffineTransform.rotation_deg(cfg.camera_rotation_deg, center),
    )
    planted = []
    for t in range(1, cfg.frames):
        if cfg.camera_jump_interval and t % cfg.camera_jump_interval == 0:
            sign = 1.0 if (t // cfg.camera_jump_interval) % 2 else -1.0
            jump = compose(
                AffineTransform.translation(sign * cfg.camera_jump_x, sign * cfg.camera_jump_y),
                AffineTransform.rotation_deg(sign * cfg.camera_jump_deg, center),
            )
            planted.append(compose(jump, steady))
        else:
            planted.append(steady)
    return planted


@dataclass
class _SceneObject:
    object_id: int
    size: int
    texture: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    track: List[Tuple[int, int]] = field(default_factory=list)


@dataclass(eq=False)
class SyntheticSequence:
    """A generated sequence: lazily rendered frames plus gt, detections and planted motion."""

    config: SynthConfig
    planted: List[AffineTransform]
    gt: FrameRecords
    detections: FrameRecords
    _canvas: np.ndarray
    _margin: int
    _cumulative: List[AffineTransform]
    _objects: List[_SceneObject]
    _visible: Dict[int, List[int]]

    def __len__(self) -> int:
        return self.config.frames

    def frame(self, frame_index: int) -> GrayFrame:
        """Render frame `frame_index` (0-based)."""
        if not 0 <= frame_index < len(self):
            raise IndexError(f"frame_index {frame_index} outside 0..{len(self) - 1}")
        cfg = self.config
        view = compose(self._cumulative[frame_index], AffineTransform.translation(-self._margin, -self._margin))
        pixels = cv2.warpAffine(
            self._canvas,
            view.matrix,
            (cfg.width, cfg.height),
            flags=cv2.INTER_LINEAR,
            borderMode=cv2.BORDER_REFLECT_101,
        )
        for obj in self._objects:
            if obj.object_id not in self._visible[frame_index]:
                continue
            left, top = obj.track[frame_index]
            pixels[top : top + obj.size, left : left + obj.size] = obj.texture
        return GrayFrame(cfg.width, cfg.height, np.clip(pixels, 0.0, 1.0), frame_index)

    def frames(self) -> Iterator[GrayFrame]:
        for frame_index in range(len(self)):
            yield self.frame(frame_index)

    def detections_for(self, frame_index: int) -> List[Detection]:
        """Tracker detections for a 0-based frame index."""
        return [record.to_detection() for record in self.detections.get(frame_index + 1, [])]


def _bounce(position: np.ndarray, velocity: np.ndarray, low: np.ndarray, high: np.ndarray) -> None:
    for axis in range(2):
        if position[axis] < low[axis]:
            position[axis] = 2 * low[axis] - position[axis]
            velocity[axis] = -velocity[axis]
        elif position[axis] > high[axis]:
            position[axis] = 2 * high[axis] - position[axis]
            velocity[axis] = -velocity[axis]
    np.clip(position, low, high, out=position)


def camera_excursion(cfg: SynthConfig, cumulative: List[AffineTransform]) -> np.ndarray:
    """Largest per-axis displacement any image point undergoes across the sequence."""
    corners = np.array([[0, 0], [cfg.width, 0], [0, cfg.height], [cfg.width, cfg.height]], dtype=np.float64)
    worst = np.zeros(2)
    for view in cumulative:
        worst = np.maximum(worst, np.abs(view.apply(corners) - corners).max(axis=0))
    return worst


def _occluded(cfg: SynthConfig, object_id: int, frame: int) -> bool:
    return any(obj == object_id and first <= frame <= last for obj, first, last in cfg.occlusions)


def _detect(cfg: SynthConfig, rng: np.random.Generator, record: MotRecord) -> Optional[MotRecord]:
    # Every draw happens unconditionally so the stream does not depend on earlier outcomes
    noise = rng.normal(0.0, 1.0, size=4) * cfg.det_noise_px
    dropped = rng.random() < cfg.det_dropout
    low = rng.random() < cfg.det_low_score_fraction
    high_score = rng.uniform(cfg.det_score_min, cfg.det_score_max)
    low_score = rng.uniform(cfg.det_low_score_min, cfg.det_low_score_max)
    if dropped:
        return None
    left, top, width, height = np.array([record.left, record.top, record.width, record.height]) + noise
    return MotRecord(
        record.frame,
        -1,
        float(left),
        float(top),
        float(max(width, 1.0)),
        float(max(height, 1.0)),
        float(low_score if low else high_score),
    )


def synth_sequence(cfg: SynthConfig) -> SyntheticSequence:
    """
    Generate a deterministic synthetic sequence for `cfg`.

    Objects live in the scene (first-frame coordinates): each drifts at
    `object_speed` px/frame and bounces inside the part of the scene that
    stays in view however far the camera moves, then is carried into every
    frame by the cumulative camera transform. When the camera travels too
    far for such a region to exist, objects are clamped to the image border.
    Occluded objects are neither drawn nor recorded.

    Raises:
        SynthConfigError: if an object cannot fit inside the image
    """
    if cfg.object_size_max > min(cfg.width, cfg.height):
        raise SynthConfigError(
            f"object_size_max {cfg.object_size_max} does not fit a {cfg.width}x{cfg.height} image"
        )

    rng = np.random.default_rng(cfg.seed)
    margin = max(cfg.width, cfg.height) // 2
    canvas = noise_texture(rng, cfg.height + 2 * margin, cfg.width + 2 * margin, cfg.texture_amplitude)

    planted = camera_transforms(cfg)
    cumulative = [AffineTransform.identity()]
    for transform in planted:
        cumulative.append(compose(transform, cumulative[-1]))

    image_size = np.array([cfg.width, cfg.height], dtype=np.float64)
    room = (image_size - cfg.object_size_max) / 2.0
    keep_out = np.minimum(np.ceil(camera_excursion(cfg, cumulative)), room)

    objects = []
    for object_id in range(1, cfg.objects + 1):
        size = int(rng.integers(cfg.object_size_min, cfg.object_size_max + 1))
        texture = noise_texture(rng, size, size, cfg.texture_amplitude)
        low, high = keep_out, image_size - size - keep_out
        position = rng.uniform(low, high)
        heading = rng.uniform(0.0, 2.0 * np.pi)
        velocity = cfg.object_speed * np.array([np.cos(heading), np.sin(heading)])
        objects.append(_SceneObject(object_id, size, texture, position, velocity))

    gt: FrameRecords = {}
    detections: FrameRecords = {}
    visible: Dict[int, List[int]] = {}
    for frame_index in range(cfg.frames):
        frame = frame_index + 1
        view = cumulative[frame_index]
        visible[frame_index] = []
        for obj in objects:
            if frame_index > 0:
                obj.position = obj.position + obj.velocity
                _bounce(obj.position, obj.velocity, keep_out, image_size - obj.size - keep_out)
            half = obj.size / 2.0
            top_left = np.clip(view.apply(obj.position + half) - half, 0.0, image_size - obj.size)
            left, top = (int(v) for v in np.round(top_left))
            obj.track.append((left, top))
            if _occluded(cfg, obj.object_id, frame):
                continue
            visible[frame_index].append(obj.object_id)
            record = MotRecord(frame, obj.object_id, left, top, obj.size, obj.size)
            gt.setdefault(frame, []).append(record)
            detection = _detect(cfg, rng, record)
            if detection is not None:
                detections.setdefault(frame, []).append(detection)

    log.info(
        "Generated %d frames, %d objects, %d gt and %d detection records",
        cfg.frames,
        cfg.objects,
        sum(map(len, gt.values())),
        sum(map(len, detections.values())),
    )
    return SyntheticSequence(cfg, planted, gt, detections, canvas, margin, cumulative, objects, visible)


def format_planted_motion(planted: List[AffineTransform]) -> str:
    """One row-major 2x3 matrix per line, six comma-separated reals."""
    return "".join(",".join(format_number(v) for v in t.matrix.reshape(-1)) + "\n" for t in planted)


def parse_planted_motion(text: str) -> List[AffineTransform]:
    """Inverse of `format_planted_motion`."""
    transforms = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        values = [float(v) for v in line.split(",")]
        if len(values) != 6:
            raise ValueError(f"line {line_number}: expected 6 values, got {len(values)}")
        transforms.append(AffineTransform.from_matrix(np.array(values).reshape(2, 3)))
    return transforms


def write_synthetic(seq: SyntheticSequence, out_dir: Union[str, Path]) -> Path:
    """
    Write `frames/NNNNNN.pgm`, `gt.txt`, `det.txt` and `planted_motion.txt` under `out_dir`.

    The directory appears only once everything is written.
    """
    out_dir = Path(out_dir)
    with atomic_directory(out_dir) as tmp:
        frames_dir = tmp / "frames"
        frames_dir.mkdir()
        for frame in seq.frames():
            write_frame(frames_dir / frame_filename(frame.frame_index + 1), frame)
        (tmp / "gt.txt").write_text(write_mot(flatten_records(seq.gt)), encoding="utf-8")
        (tmp / "det.txt").write_text(write_mot(flatten_records(seq.detections)), encoding="utf-8")
        (tmp / "planted_motion.txt").write_text(format_planted_motion(seq.planted), encoding="utf-8")
    log.info("Wrote synthetic sequence (%d frames) to %s", len(seq), out_dir)
    return out_dir
