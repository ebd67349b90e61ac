"""
Image operations built on quarter diffusion: edge-preserving smoothing, detail
enhancement, and multi-scale low-light enhancement.

Low-light enhancement splits the illumination into a coarse base and detail bands
from several diffusion scales, lifts the base, and puts the details back:
  1. illumination L = max(R, G, B) / 255
  2. bases B_k = quarter diffusion of L for each scale t_k (ascending)
  3. detail bands L - B_1, B_1 - B_2, ..., weighted and summed into D (unit weights
     telescope to D = L - B_last)
  4. L' = B_last ** gamma + D
  5. per-pixel gain = max(L', eps) / max(L, eps), capped, applied to every channel
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from image_core.buffer import ImageBuffer, apply_per_channel
from image_core.exceptions import DimensionMismatchException, InvalidParameterException
from quarter_laplacian.diffusion import (
    DEFAULT_ITERATIONS,
    DiffusionConfig,
    DiffusionVariant,
    diffuse,
    diffuse_quarter,
)

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 10.0
DEFAULT_SCALES = (1, 10, 100)
DEFAULT_GAMMA = 0.5
DEFAULT_EPSILON = 1.0 / 255.0
DEFAULT_MAX_GAIN = 10.0


@dataclass(frozen=True)
class EnhanceConfig:
    iterations: int = DEFAULT_ITERATIONS
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self) -> None:
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise InvalidParameterException(f"enhance iterations must be an integer >= 1, got {self.iterations}")
        if not self.alpha > 0:
            raise InvalidParameterException(f"detail gain alpha must be > 0, got {self.alpha}")


@dataclass(frozen=True)
class LowLightConfig:
    scales: Tuple[int, ...] = DEFAULT_SCALES
    gamma: float = DEFAULT_GAMMA
    epsilon: float = DEFAULT_EPSILON
    max_gain: float = DEFAULT_MAX_GAIN
    # one weight per band (L - B_1, B_1 - B_2, ...); None means all 1
    detail_gains: Optional[Tuple[float, ...]] = field(default=None)

    def __post_init__(self) -> None:
        scales = tuple(int(s) for s in self.scales)
        if not scales:
            raise InvalidParameterException("low-light scales must not be empty")
        if scales[0] < 1:
            raise InvalidParameterException(f"low-light scales must be >= 1 iteration, got {scales[0]}")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise InvalidParameterException(f"low-light scales must be strictly ascending, got {list(scales)}")
        object.__setattr__(self, "scales", scales)
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidParameterException(f"gamma must be in (0, 1], got {self.gamma}")
        if not self.epsilon > 0:
            raise InvalidParameterException(f"epsilon must be > 0, got {self.epsilon}")
        if not self.max_gain > 0:
            raise InvalidParameterException(f"max_gain must be > 0, got {self.max_gain}")
        if self.detail_gains is not None:
            gains = tuple(float(g) for g in self.detail_gains)
            if len(gains) != len(scales):
                raise InvalidParameterException(f"need one detail gain per scale ({len(scales)}), got {len(gains)}")
            object.__setattr__(self, "detail_gains", gains)


def smooth(img: ImageBuffer, cfg: DiffusionConfig = DiffusionConfig(), *, max_workers: Optional[int] = None) -> ImageBuffer:
    """Structure image: diffusion run on each channel separately."""
    logger.info(f"smooth: {cfg.variant.value} c={cfg.c} t={cfg.iterations} on {img.width}x{img.height}x{img.channels}")
    return apply_per_channel(img, lambda ch: diffuse(ch, cfg), max_workers=max_workers)


def enhance_detail(img: ImageBuffer, cfg: EnhanceConfig = EnhanceConfig(), *, max_workers: Optional[int] = None) -> ImageBuffer:
    """
    S + alpha * (img - S) with S the quarter-smoothed structure.

    Evaluated as img + (alpha - 1) * (img - S), which is the same value but returns img
    unchanged, bit for bit, when alpha is 1 or wherever img == S.
    """
    structure = smooth(img, DiffusionConfig(variant=DiffusionVariant.QUARTER, c=1.0, iterations=cfg.iterations), max_workers=max_workers)
    src = img.data.astype(np.float64)
    texture = src - structure.data.astype(np.float64)
    out = src + (cfg.alpha - 1.0) * texture
    logger.info(f"enhance_detail: alpha={cfg.alpha} t={cfg.iterations}")
    return ImageBuffer(out.astype(np.float32))


@dataclass(frozen=True, eq=False)
class LowLightLayers:
    luminance: np.ndarray
    bases: List[np.ndarray]
    bands: List[np.ndarray]
    detail: np.ndarray
    adjusted: np.ndarray
    gain: np.ndarray


def lowlight_layers(img: ImageBuffer, cfg: LowLightConfig = LowLightConfig()) -> LowLightLayers:
    """Every intermediate of the low-light pipeline, all (height, width) float64."""
    if img.channels != 3:
        raise DimensionMismatchException(f"low-light enhancement needs a 3-channel image, got {img.channels}")

    lum32 = (img.data.max(axis=0).astype(np.float64) / 255.0).astype(np.float32)
    current = ImageBuffer.from_array(lum32)
    bases: List[np.ndarray] = []
    done = 0
    # each coarser scale continues from the previous one
    for scale in cfg.scales:
        current = diffuse_quarter(current, c=1.0, t=scale - done)
        done = scale
        bases.append(current.plane(0).astype(np.float64))

    lum = lum32.astype(np.float64)
    base = bases[-1]
    upper = [lum] + bases[:-1]
    bands = [hi - lo for hi, lo in zip(upper, bases)]
    if cfg.detail_gains is None:
        detail = lum - base
    else:
        detail = np.zeros_like(lum)
        for w, band in zip(cfg.detail_gains, bands):
            detail += w * band

    adjusted = np.power(np.maximum(base, 0.0), cfg.gamma) + detail
    gain = np.maximum(adjusted, cfg.epsilon) / np.maximum(lum, cfg.epsilon)
    gain = np.minimum(gain, cfg.max_gain)
    return LowLightLayers(luminance=lum, bases=bases, bands=bands, detail=detail, adjusted=adjusted, gain=gain)


def enhance_lowlight(img: ImageBuffer, cfg: LowLightConfig = LowLightConfig(), *, max_workers: Optional[int] = None) -> ImageBuffer:
    layers = lowlight_layers(img, cfg)
    gain = layers.gain
    out = apply_per_channel(img, lambda ch: ImageBuffer(ch.data.astype(np.float64) * gain), max_workers=max_workers)
    logger.info(
        f"enhance_lowlight: scales={list(cfg.scales)} gamma={cfg.gamma} "
        f"gain range [{float(layers.gain.min()):.4f}, {float(layers.gain.max()):.4f}]"
    )
    return out
