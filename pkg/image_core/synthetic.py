"""
Synthetic test rasters, so every check runs without external image assets.

  step     left half ``low``, right half ``high`` (one vertical edge)
  corner   top-left quadrant ``high``, rest ``low`` (one 90-degree corner)
  checker  checkerboard blocks plus a vertical step, with isolated single-pixel
           impulses at the centre of blocks of side >= 6
  noise    flat ``level`` plus seeded uniform noise in [-amplitude, +amplitude]
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from image_core.buffer import ImageBuffer
from image_core.exceptions import InvalidParameterException


class Pattern(str, Enum):
    STEP = "step"
    CORNER = "corner"
    CHECKER = "checker"
    NOISE = "noise"


DEFAULT_LOW = 0.0
DEFAULT_HIGH = 100.0
DEFAULT_NOISE_LEVEL = 100.0
DEFAULT_NOISE_AMPLITUDE = 20.0

CHECKER_LEVELS = (40.0, 80.0)
CHECKER_STEP_OFFSET = 100.0
IMPULSE_HEIGHT = 60.0
# an impulse needs a uniform 5x5 neighbourhood inside its block
MIN_IMPULSE_BLOCK = 6


def step_plane(size: int, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH) -> np.ndarray:
    plane = np.full((size, size), low, dtype=np.float32)
    plane[:, size // 2 :] = high
    return plane


def corner_plane(size: int, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH) -> np.ndarray:
    plane = np.full((size, size), low, dtype=np.float32)
    half = max(1, size // 2)
    plane[:half, :half] = high
    return plane


def checker_block(size: int) -> int:
    return max(2, size // 8)


def checker_step_column(size: int) -> int:
    """The step sits on a block boundary so every region stays at least 2 pixels wide."""
    block = checker_block(size)
    return max(1, (size // block // 2)) * block


def checker_plane(size: int) -> np.ndarray:
    block = checker_block(size)
    yy, xx = np.indices((size, size))
    parity = ((yy // block) + (xx // block)) % 2
    plane = np.where(parity == 0, CHECKER_LEVELS[0], CHECKER_LEVELS[1]).astype(np.float32)
    plane[:, checker_step_column(size) :] += CHECKER_STEP_OFFSET

    if block >= MIN_IMPULSE_BLOCK:
        nblocks = size // block
        for by in range(nblocks):
            for bx in range(nblocks):
                cy = by * block + block // 2
                cx = bx * block + block // 2
                plane[cy, cx] += IMPULSE_HEIGHT
    return plane


def noise_plane(
    size: int,
    level: float = DEFAULT_NOISE_LEVEL,
    amplitude: float = DEFAULT_NOISE_AMPLITUDE,
    seed: int = 0,
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (level + rng.uniform(-amplitude, amplitude, size=(size, size))).astype(np.float32)


def generate_pattern(
    pattern: Pattern,
    size: int,
    *,
    channels: int = 1,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
    level: float = DEFAULT_NOISE_LEVEL,
    amplitude: float = DEFAULT_NOISE_AMPLITUDE,
    seed: int = 0,
) -> ImageBuffer:
    """Square ``size`` x ``size`` test image; 3-channel output repeats the plane."""
    if size < 1:
        raise InvalidParameterException(f"pattern size must be >= 1, got {size}")
    if channels not in (1, 3):
        raise InvalidParameterException(f"channels must be 1 or 3, got {channels}")

    pattern = Pattern(pattern)

    if pattern == Pattern.STEP:
        plane = step_plane(size, low, high)
    elif pattern == Pattern.CORNER:
        plane = corner_plane(size, low, high)
    elif pattern == Pattern.CHECKER:
        plane = checker_plane(size)
    else:
        plane = noise_plane(size, level, amplitude, seed)

    return ImageBuffer(np.repeat(plane[np.newaxis], channels, axis=0))
