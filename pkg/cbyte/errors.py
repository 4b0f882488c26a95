"""Exception hierarchy for the cbyte package."""


class CByteError(Exception):
    """Base class for all tracker errors."""

    pass


class ConfigError(CByteError):
    """Invalid or unknown configuration value."""

    pass


class SynthConfigError(ConfigError):
    """Synthetic sequence configuration that cannot be rendered."""

    pass


class FrameOrderError(CByteError):
    """Frames were presented out of order to a tracker instance."""

    pass


class FrameMismatchError(CByteError):
    """Two frames that must share dimensions do not."""

    pass


class KalmanDegeneracyError(CByteError):
    """Innovation covariance could not be factorized."""

    pass


class MotParseError(CByteError):
    """Malformed line in a MOT-format text file."""

    def __init__(self, line_number: int, message: str):
        """Initialize with the 1-based offending line number."""
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class MissingFrameError(CByteError):
    """A detection references a frame with no image on disk."""

    def __init__(self, frame: int):
        """Initialize with the missing MOT frame number."""
        super().__init__(f"no image found for frame {frame}")
        self.frame = frame
