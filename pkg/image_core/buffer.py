"""
Planar raster type and the replicate boundary rule.

Samples are float32, stored channel-major as (channels, height, width). Values are
nominally 0-255 but are never clamped here; clamping belongs to encoding.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from image_core.exceptions import DimensionMismatchException, InvalidParameterException

logger = logging.getLogger(__name__)

VALID_CHANNEL_COUNTS = (1, 3)


class BoundaryPolicy(str, Enum):
    """Out-of-range coordinates take the value of the nearest in-bounds pixel."""

    REPLICATE = "replicate"

    def clamp(self, coord: int, size: int) -> int:
        return min(max(coord, 0), size - 1)

    def pad(self, array: np.ndarray, width: int = 1) -> np.ndarray:
        """Pad the last two axes of ``array`` by ``width`` pixels."""
        widths = [(0, 0)] * (array.ndim - 2) + [(width, width), (width, width)]
        return np.pad(array, widths, mode="edge")

    def pad_into(self, plane: np.ndarray, out: np.ndarray) -> np.ndarray:
        """One-pixel pad of a (height, width) plane written into ``out`` of shape (height + 2, width + 2)."""
        h, w = plane.shape
        if out.shape != (h + 2, w + 2):
            raise DimensionMismatchException(f"pad target is {out.shape}, expected {(h + 2, w + 2)}")
        out[1:-1, 1:-1] = plane
        out[0, 1:-1] = plane[0]
        out[-1, 1:-1] = plane[-1]
        out[:, 0] = out[:, 1]
        out[:, -1] = out[:, -2]
        return out


BOUNDARY = BoundaryPolicy.REPLICATE


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.float32)
        if arr.ndim == 2:
            arr = arr[np.newaxis, :, :]
        if arr.ndim != 3:
            raise InvalidParameterException(f"image data must be 2-D or 3-D (channels, height, width), got shape {arr.shape}")
        channels, height, width = arr.shape
        if channels not in VALID_CHANNEL_COUNTS:
            raise InvalidParameterException(f"channel count must be 1 or 3, got {channels}")
        if height < 1 or width < 1:
            raise InvalidParameterException(f"image must be at least 1x1, got {width}x{height}")
        if not np.isfinite(arr).all():
            raise InvalidParameterException("image data contains NaN or Inf")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def height(self) -> int:
        return int(self.data.shape[1])

    @property
    def width(self) -> int:
        return int(self.data.shape[2])

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.channels, self.height, self.width)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "ImageBuffer":
        """Accepts (height, width) for one channel or planar (channels, height, width)."""
        return cls(np.asarray(array))

    @classmethod
    def from_interleaved(cls, array: np.ndarray) -> "ImageBuffer":
        """Build from (height, width) or (height, width, channels) pixel-interleaved data."""
        arr = np.asarray(array)
        if arr.ndim == 3:
            arr = np.moveaxis(arr, 2, 0)
        return cls(arr)

    @classmethod
    def stack(cls, planes: Sequence["ImageBuffer"]) -> "ImageBuffer":
        """Concatenate single-channel buffers into one multi-channel buffer."""
        if not planes:
            raise InvalidParameterException("cannot stack zero channels")
        first = planes[0]
        for p in planes:
            if p.channels != 1:
                raise DimensionMismatchException(f"stack expects 1-channel buffers, got {p.channels} channels")
            if (p.height, p.width) != (first.height, first.width):
                raise DimensionMismatchException(f"channel is {p.width}x{p.height}, expected {first.width}x{first.height}")
        return cls(np.concatenate([p.data for p in planes], axis=0))

    def channel(self, index: int) -> "ImageBuffer":
        if not 0 <= index < self.channels:
            raise InvalidParameterException(f"channel {index} out of range for {self.channels}-channel image")
        return ImageBuffer(self.data[index : index + 1])

    def plane(self, index: int = 0) -> np.ndarray:
        """Read-only (height, width) view of one channel."""
        return self.data[index]

    def interleaved(self) -> np.ndarray:
        """(height, width, channels) copy, the layout image codecs expect."""
        return np.ascontiguousarray(np.moveaxis(self.data, 0, 2))


def sample(img: ImageBuffer, channel: int, x: int, y: int) -> float:
    """Value at (x, y) under the replicate boundary; total over all integers."""
    if not 0 <= channel < img.channels:
        raise InvalidParameterException(f"channel {channel} out of range for {img.channels}-channel image")
    cx = BOUNDARY.clamp(x, img.width)
    cy = BOUNDARY.clamp(y, img.height)
    return float(img.data[channel, cy, cx])


ChannelTransform = Callable[[ImageBuffer], ImageBuffer]
T = TypeVar("T")


def map_channels(img: ImageBuffer, f: Callable[[ImageBuffer], T], *, max_workers: Optional[int] = None) -> List[T]:
    """
    f applied to every single-channel slice of ``img``, results in channel order.

    With ``max_workers`` > 1 the channels run on a thread pool; collection order does
    not depend on scheduling.
    """
    planes = [img.channel(i) for i in range(img.channels)]
    if max_workers is not None and max_workers > 1 and len(planes) > 1:
        logger.debug(f"map_channels: {len(planes)} channels on {min(max_workers, len(planes))} threads")
        with ThreadPoolExecutor(max_workers=min(max_workers, len(planes))) as pool:
            return list(pool.map(f, planes))
    return [f(p) for p in planes]


def apply_per_channel(
    img: ImageBuffer,
    f: ChannelTransform,
    *,
    max_workers: Optional[int] = None,
) -> ImageBuffer:
    """Run a single-channel transform on every channel independently and restack."""
    results = map_channels(img, f, max_workers=max_workers)

    for i, out in enumerate(results):
        if out.channels != 1 or (out.height, out.width) != (img.height, img.width):
            raise DimensionMismatchException(
                f"channel {i}: transform returned {out.channels}x{out.width}x{out.height}, expected 1x{img.width}x{img.height}"
            )
    if len(results) == 1:
        return results[0]
    return ImageBuffer.stack(results)
