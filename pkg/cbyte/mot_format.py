"""MOT Challenge text format: `frame,id,left,top,width,height,conf,x,y,z` per line."""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

from .core_types import BBox, Detection
from .errors import MotParseError
from .module_registry import module_registry
from .track_state import TrackSnapshot

module_registry.register_module(
    name="mot_format",
    description="MOT text format parsing and writing",
    logger_name="cbyte.mot_format",
    debug_flag="--debug-mot",
    category="io",
)

log = module_registry.get_module_info("mot_format")["logger"]

MIN_FIELDS = 7
NUM_FIELDS = 10

FrameRecords = Dict[int, List["MotRecord"]]


@dataclass(frozen=True)
class MotRecord:
    """One MOT line. `track_id` is -1 for raw detections."""

    frame: int
    track_id: int
    left: float
    top: float
    width: float
    height: float
    score: float = 1.0
    x: float = -1.0
    y: float = -1.0
    z: float = -1.0

    @property
    def box(self) -> BBox:
        return BBox(self.left, self.top, max(self.width, 0.0), max(self.height, 0.0))

    def to_detection(self) -> Detection:
        """Convert to a tracker Detection, clipping the score into [0, 1]."""
        return Detection(self.box, min(max(self.score, 0.0), 1.0))


def format_number(value: float) -> str:
    """Shortest text with at most six decimals: integral values print without a point."""
    if float(value).is_integer():
        return str(int(value))
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def format_record(record: MotRecord) -> str:
    fields = [
        str(record.frame),
        str(record.track_id),
        *(
            format_number(v)
            for v in (record.left, record.top, record.width, record.height, record.score, record.x, record.y, record.z)
        ),
    ]
    return ",".join(fields)


def _parse_int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def parse_mot(text: str) -> FrameRecords:
    """
    Parse MOT text into records grouped by frame, frames in ascending order.

    Raises:
        MotParseError: naming the 1-based line of the first malformed line
    """
    grouped: FrameRecords = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < MIN_FIELDS:
            raise MotParseError(line_number, f"expected at least {MIN_FIELDS} fields, got {len(parts)}")
        if len(parts) > NUM_FIELDS:
            raise MotParseError(line_number, f"expected at most {NUM_FIELDS} fields, got {len(parts)}")
        try:
            frame = _parse_int(parts[0])
            track_id = _parse_int(parts[1])
            values = [float(p) for p in parts[2:]]
        except ValueError as e:
            raise MotParseError(line_number, str(e)) from e
        if not all(math.isfinite(v) for v in values):
            raise MotParseError(line_number, f"non-finite value in {line!r}")
        if frame < 1:
            raise MotParseError(line_number, f"frame numbers start at 1, got {frame}")
        extras = values[5:] + [-1.0] * (NUM_FIELDS - 2 - len(values))
        record = MotRecord(frame, track_id, *values[:5], *extras[:3])
        grouped.setdefault(frame, []).append(record)
    return {frame: grouped[frame] for frame in sorted(grouped)}


def write_mot(records: Iterable[MotRecord]) -> str:
    """Serialize records frame-major then id order; empty input gives empty text."""
    ordered = sorted(records, key=lambda r: (r.frame, r.track_id))
    return "".join(format_record(r) + "\n" for r in ordered)


def snapshots_to_records(history: Sequence[TrackSnapshot]) -> List[MotRecord]:
    """Convert tracker history (0-based frame_index) into MOT records (1-based frames)."""
    return [
        MotRecord(s.frame_index + 1, s.track_id, s.box.left, s.box.top, s.box.width, s.box.height, s.score)
        for s in history
    ]


def flatten_records(grouped: FrameRecords) -> List[MotRecord]:
    return [record for frame in sorted(grouped) for record in grouped[frame]]


def read_mot_file(path: Union[str, Path]) -> FrameRecords:
    """Read and parse a MOT file."""
    path = Path(path)
    grouped = parse_mot(path.read_text(encoding="utf-8"))
    log.info("Read %d records over %d frames from %s", sum(map(len, grouped.values())), len(grouped), path)
    return grouped
