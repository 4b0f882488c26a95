"""Camera-motion-compensated BYTE-style multi-object tracking package."""

__version__ = "0.1.0"
