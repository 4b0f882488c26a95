"""Configuration management for the tracker, camera compensation and synthesis."""

from pathlib import Path
from typing import Any, Dict, List, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

ModelT = TypeVar("ModelT", bound=BaseModel)


class _FrozenModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class KalmanParams(_FrozenModel):
    """Noise model for the constant-velocity box filter (std devs proportional to box height)."""

    std_weight_position: float = Field(1.0 / 20, gt=0)
    std_weight_velocity: float = Field(1.0 / 160, gt=0)
    min_box_size: float = Field(1e-3, gt=0)


class CmcParams(_FrozenModel):
    """Camera motion compensation parameters."""

    # Keypoints
    theta_th: float = Field(0.9, gt=0)
    num_keypoints: int = Field(210, ge=3)
    keypoint_grid: int = Field(8, ge=1)

    # Pyramidal Lucas-Kanade
    lk_window: int = Field(21, ge=5)
    lk_pyramid_levels: int = Field(3, ge=1)
    lk_max_iters: int = Field(30, ge=1)
    lk_epsilon: float = Field(0.01, gt=0)
    lk_min_eigenvalue: float = Field(1e-4, ge=0)

    # RANSAC
    ransac_inlier_px: float = Field(2.0, gt=0)
    ransac_max_iters: int = Field(100, ge=1)
    ransac_confidence: float = Field(0.99, gt=0, lt=1)
    ransac_min_inliers: int = Field(10, ge=3)
    ransac_min_triangle_area: float = Field(1e-6, ge=0)

    @field_validator("lk_window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("lk_window must be odd")
        return value


class TrackerConfig(_FrozenModel):
    """Tracker configuration: score split, gating, lifecycle and camera compensation."""

    cmc: CmcParams = Field(default_factory=CmcParams)
    kalman: KalmanParams = Field(default_factory=KalmanParams)

    tau_high: float = Field(0.6, ge=0, le=1)
    tau_low: float = Field(0.1, ge=0, le=1)
    primary_max_cost: float = Field(0.8, ge=0, le=1)
    secondary_max_cost: float = Field(0.5, ge=0, le=1)

    max_lost_age: int = Field(30, ge=1)
    min_hits_to_confirm: int = Field(2, ge=1)
    enable_cmc: bool = True
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _ordered_thresholds(self) -> "TrackerConfig":
        if self.tau_low > self.tau_high:
            raise ValueError(f"tau_low ({self.tau_low}) must not exceed tau_high ({self.tau_high})")
        return self

    @classmethod
    def create_default(cls) -> "TrackerConfig":
        """Create a default configuration instance."""
        return cls()

    @classmethod
    def create_for_testing(cls) -> "TrackerConfig":
        """Create a configuration that confirms tracks on their first detection."""
        return cls(min_hits_to_confirm=1)


class SynthConfig(_FrozenModel):
    """Synthetic sequence with textured moving squares and planted camera motion."""

    frames: int = Field(100, ge=1)
    width: int = Field(640, ge=16)
    height: int = Field(480, ge=16)
    objects: int = Field(10, ge=0)
    object_size_min: int = Field(40, ge=4)
    object_size_max: int = Field(80, ge=4)
    object_speed: float = Field(2.0, ge=0)

    # Camera motion (image content displacement per frame)
    camera_pan_x: float = 0.0
    camera_pan_y: float = 0.0
    camera_rotation_deg: float = 0.0
    camera_jump_interval: int = Field(0, ge=0)
    camera_jump_x: float = 0.0
    camera_jump_y: float = 0.0
    camera_jump_deg: float = 0.0

    # Occlusions: list of (object id, first frame, last frame), 1-based MOT frames, inclusive
    occlusions: List[Tuple[int, int, int]] = Field(default_factory=list)

    texture_amplitude: float = Field(0.6, gt=0, le=1)

    # Detections
    det_noise_px: float = Field(0.0, ge=0)
    det_dropout: float = Field(0.0, ge=0, lt=1)
    det_score_min: float = Field(0.7, ge=0, le=1)
    det_score_max: float = Field(1.0, ge=0, le=1)
    det_low_score_fraction: float = Field(0.0, ge=0, le=1)
    det_low_score_min: float = Field(0.15, ge=0, le=1)
    det_low_score_max: float = Field(0.55, ge=0, le=1)

    seed: int = Field(0, ge=0)

    @field_validator("occlusions", mode="before")
    @classmethod
    def _parse_occlusions(cls, value: Any) -> Any:
        """Accept `id:first-last` comma-separated text as written in flat config files."""
        if not isinstance(value, str):
            return value
        windows = []
        for chunk in value.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                obj, span = chunk.split(":")
                first, last = span.split("-")
                windows.append((int(obj), int(first), int(last)))
            except ValueError as e:
                raise ValueError(f"occlusion window {chunk!r} is not of the form id:first-last") from e
        return windows

    @model_validator(mode="after")
    def _consistent_ranges(self) -> "SynthConfig":
        if self.object_size_min > self.object_size_max:
            raise ValueError("object_size_min must not exceed object_size_max")
        if self.det_score_min > self.det_score_max:
            raise ValueError("det_score_min must not exceed det_score_max")
        if self.det_low_score_min > self.det_low_score_max:
            raise ValueError("det_low_score_min must not exceed det_low_score_max")
        for obj, first, last in self.occlusions:
            if first > last:
                raise ValueError(f"occlusion window for object {obj} ends before it starts")
        return self


class RenderConfig(_FrozenModel):
    """Overlay rendering options."""

    trail_length: int = Field(15, ge=0)
    line_width: int = Field(2, ge=1)
    font_size: int = Field(16, ge=6)
    draw_labels: bool = True


def parse_flat_config(text: str) -> Dict[str, str]:
    """
    Parse `key = value` lines into a flat mapping.

    Args:
        text: Config file contents; `#` starts a comment, blank lines are ignored

    Returns:
        Mapping of dotted keys to raw string values
    """
    values: Dict[str, str] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {line_number}: empty key")
        values[key] = value
    return values


def _nest(flat: Dict[str, Any], model_cls: Type[BaseModel]) -> Dict[str, Any]:
    """Turn dotted keys into nested dicts, rejecting keys the model does not declare."""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.split(".")
        cls: Any = model_cls
        target = nested
        for depth, part in enumerate(parts):
            fields = cls.model_fields if isinstance(cls, type) and issubclass(cls, BaseModel) else {}
            if part not in fields:
                raise ConfigError(f"unknown config key: {key}")
            if depth == len(parts) - 1:
                target[part] = value
            else:
                cls = fields[part].annotation
                target = target.setdefault(part, {})
    return nested


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_config(model_cls: Type[ModelT], flat: Dict[str, Any], base: Union[ModelT, None] = None) -> ModelT:
    """
    Apply flat dotted overrides on top of defaults (or `base`) and validate.

    Raises:
        ConfigError: on unknown keys or values that fail validation
    """
    nested = _nest(flat, model_cls)
    start = base.model_dump() if base is not None else {}
    try:
        return model_cls.model_validate(_merge(start, nested))
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(loc) for loc in first["loc"]) or model_cls.__name__
        raise ConfigError(f"invalid value for {key}: {first['msg']}") from e


def load_config_file(path: Union[str, Path], model_cls: Type[ModelT]) -> ModelT:
    """Load a flat config file into a validated model."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return build_config(model_cls, parse_flat_config(text))


def flatten_config(model: BaseModel, prefix: str = "") -> Dict[str, Any]:
    """Flatten a model into dotted keys, the inverse of the config file layout."""
    flat: Dict[str, Any] = {}
    for name in type(model).model_fields:
        value = getattr(model, name)
        key = f"{prefix}{name}"
        if isinstance(value, BaseModel):
            flat.update(flatten_config(value, prefix=f"{key}."))
        else:
            flat[key] = value
    return flat
