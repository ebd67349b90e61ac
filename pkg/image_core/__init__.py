"""
Raster core: planar float image buffers, replicate boundary, 8-bit file I/O.
"""

from .buffer import BOUNDARY, BoundaryPolicy, ImageBuffer, apply_per_channel, map_channels, sample
from .exceptions import (
    DimensionMismatchException,
    ImageIOException,
    ImageProcessingException,
    ImageReadException,
    ImageWriteException,
    InvalidParameterException,
    QuarterFilterException,
    UnsupportedImageFormatException,
)
from .image_io import encode_samples, load_image, save_image

__all__ = [
    "ImageBuffer",
    "BoundaryPolicy",
    "BOUNDARY",
    "sample",
    "apply_per_channel",
    "map_channels",
    "load_image",
    "save_image",
    "encode_samples",
    "QuarterFilterException",
    "ImageIOException",
    "ImageReadException",
    "ImageWriteException",
    "UnsupportedImageFormatException",
    "ImageProcessingException",
    "DimensionMismatchException",
    "InvalidParameterException",
]
