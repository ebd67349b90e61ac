"""
Explicit diffusion: U <- U + c * response(U), repeated t times.

The Laplacian variant blurs across edges. The quarter variant uses the quarter Laplacian
response, for which constant regions, axis-aligned steps and 90-degree corners are exact
fixed points. Nothing is clamped between iterations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List

import numpy as np

from image_core.buffer import ImageBuffer
from image_core.exceptions import DimensionMismatchException, InvalidParameterException
from quarter_laplacian.kernels import DEFAULT_LAPLACIAN, Kernel3, KernelVariant, laplacian_kernel
from quarter_laplacian.quarter_filter import (
    QuarterWorkspace,
    ResponsePath,
    correlate_plane,
    quarter_naive_plane,
    quarter_selected_fast,
)

logger = logging.getLogger(__name__)

DEFAULT_C = 1.0
DEFAULT_ITERATIONS = 10


class DiffusionVariant(str, Enum):
    LAPLACIAN = "laplacian"
    QUARTER = "quarter"


def validate_c(c: float) -> float:
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise InvalidParameterException(f"diffusion coefficient c must be in (0, 1], got {c}")
    return c


def validate_iterations(t: int) -> int:
    if int(t) != t or t < 0:
        raise InvalidParameterException(f"iteration count must be a non-negative integer, got {t}")
    return int(t)


@dataclass(frozen=True)
class DiffusionConfig:
    variant: DiffusionVariant = DiffusionVariant.QUARTER
    c: float = DEFAULT_C
    iterations: int = DEFAULT_ITERATIONS
    kernel: KernelVariant = DEFAULT_LAPLACIAN
    path: ResponsePath = ResponsePath.FAST

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", DiffusionVariant(self.variant))
        object.__setattr__(self, "kernel", KernelVariant(self.kernel))
        object.__setattr__(self, "path", ResponsePath(self.path))
        object.__setattr__(self, "c", validate_c(self.c))
        object.__setattr__(self, "iterations", validate_iterations(self.iterations))


PlaneStep = Callable[[np.ndarray], np.ndarray]


def _iterate(u: np.ndarray, step: PlaneStep, c: float, t: int) -> np.ndarray:
    """Double-buffered update; accumulation in float64, state stored as float32."""
    current = u
    for _ in range(t):
        delta = step(current)
        if c != 1.0:
            delta = c * delta
        current = np.add(current, delta, dtype=np.float64).astype(np.float32)
    return current


def laplacian_step(k: Kernel3) -> PlaneStep:
    return lambda u: correlate_plane(u, k)


def quarter_step(path: ResponsePath = ResponsePath.FAST) -> PlaneStep:
    if ResponsePath(path) == ResponsePath.FAST:
        workspace = QuarterWorkspace()
        return lambda u: quarter_selected_fast(u, workspace)
    return lambda u: quarter_naive_plane(u).selected


def _single_plane(channel: ImageBuffer) -> np.ndarray:
    if channel.channels != 1:
        raise DimensionMismatchException(f"diffusion works on one channel, got {channel.channels}")
    return channel.plane(0)


def diffuse_laplacian(channel: ImageBuffer, k: Kernel3, c: float = DEFAULT_C, t: int = DEFAULT_ITERATIONS) -> ImageBuffer:
    c = validate_c(c)
    t = validate_iterations(t)
    u = _single_plane(channel)
    if t == 0:
        return channel
    logger.info(f"diffuse_laplacian: kernel={k.name} c={c} t={t} on {channel.width}x{channel.height}")
    return ImageBuffer.from_array(_iterate(u, laplacian_step(k), c, t))


def diffuse_quarter(
    channel: ImageBuffer,
    c: float = DEFAULT_C,
    t: int = DEFAULT_ITERATIONS,
    *,
    path: ResponsePath = ResponsePath.FAST,
) -> ImageBuffer:
    c = validate_c(c)
    t = validate_iterations(t)
    u = _single_plane(channel)
    if t == 0:
        return channel
    logger.info(f"diffuse_quarter: c={c} t={t} path={ResponsePath(path).value} on {channel.width}x{channel.height}")
    return ImageBuffer.from_array(_iterate(u, quarter_step(path), c, t))


def diffuse(channel: ImageBuffer, cfg: DiffusionConfig) -> ImageBuffer:
    if cfg.variant == DiffusionVariant.LAPLACIAN:
        return diffuse_laplacian(channel, laplacian_kernel(cfg.kernel), cfg.c, cfg.iterations)
    return diffuse_quarter(channel, cfg.c, cfg.iterations, path=cfg.path)


def row_profile(img: ImageBuffer, row: int, channel: int = 0) -> np.ndarray:
    """Intensities along one row, length ``width``."""
    if not 0 <= row < img.height:
        raise InvalidParameterException(f"row {row} out of range for height {img.height}")
    if not 0 <= channel < img.channels:
        raise InvalidParameterException(f"channel {channel} out of range for {img.channels}-channel image")
    return img.data[channel, row, :].astype(np.float64)


def _step_for(cfg: DiffusionConfig) -> PlaneStep:
    if cfg.variant == DiffusionVariant.LAPLACIAN:
        return laplacian_step(laplacian_kernel(cfg.kernel))
    return quarter_step(cfg.path)


def diffusion_profiles(channel: ImageBuffer, row: int, cfg: DiffusionConfig) -> List[np.ndarray]:
    """Row profile after 0, 1, ..., cfg.iterations diffusion steps."""
    row_profile(channel, row)  # range check
    u = _single_plane(channel)
    step = _step_for(cfg)
    profiles = [u[row, :].astype(np.float64)]
    for _ in range(cfg.iterations):
        u = _iterate(u, step, cfg.c, 1)
        profiles.append(u[row, :].astype(np.float64))
    logger.info(f"diffusion_profiles: row={row} variant={cfg.variant.value} iterations={cfg.iterations}")
    return profiles
