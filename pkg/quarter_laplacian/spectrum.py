"""
Fourier magnitude of 3x3 stencils and an angular isotropy score.

The spectrum is |DFT| of the kernel zero-padded to N x N, shifted so DC sits at
(N/2, N/2). Isotropy is the angular coefficient of variation (std / mean) of that
magnitude on circles of fixed radius, averaged over the radii; 0 means the response
depends on |frequency| only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import map_coordinates

from image_core.exceptions import InvalidParameterException
from quarter_laplacian.kernels import Kernel3

logger = logging.getLogger(__name__)

DEFAULT_SPECTRUM_SIZE = 64
MIN_SPECTRUM_SIZE = 32
DEFAULT_RADII = (0.15, 0.25, 0.35)
DEFAULT_ANGLES = 64
MIN_ANGLES = 8


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    size: int
    magnitudes: np.ndarray

    def __post_init__(self) -> None:
        mags = np.array(self.magnitudes, dtype=np.float64)
        if mags.shape != (self.size, self.size):
            raise InvalidParameterException(f"spectrum magnitudes must be {self.size}x{self.size}, got {mags.shape}")
        if (mags < 0).any():
            raise InvalidParameterException("spectrum magnitudes must be non-negative")
        mags.flags.writeable = False
        object.__setattr__(self, "magnitudes", mags)

    def at_frequency(self, kx: int, ky: int) -> float:
        """Magnitude at integer DFT frequency (kx, ky); indices wrap modulo N."""
        n = self.size
        return float(self.magnitudes[(ky + n // 2) % n, (kx + n // 2) % n])

    @property
    def dc(self) -> float:
        return self.at_frequency(0, 0)


def kernel_spectrum(k: Kernel3, n: int = DEFAULT_SPECTRUM_SIZE) -> SpectrumGrid:
    if n < MIN_SPECTRUM_SIZE or n % 2 != 0:
        raise InvalidParameterException(f"spectrum grid size must be even and >= {MIN_SPECTRUM_SIZE}, got {n}")
    padded = np.zeros((n, n), dtype=np.float64)
    padded[:3, :3] = k.coefficients
    mags = np.fft.fftshift(np.abs(np.fft.fft2(padded)))
    return SpectrumGrid(size=n, magnitudes=mags)


def angular_profile(s: SpectrumGrid, radius: float, angles: int = DEFAULT_ANGLES) -> np.ndarray:
    """Bilinearly interpolated magnitudes at ``angles`` equally spaced points on a circle (cycles/sample)."""
    theta = np.arange(angles) * (2.0 * np.pi / angles)
    centre = s.size / 2.0
    cols = centre + radius * s.size * np.cos(theta)
    rows = centre + radius * s.size * np.sin(theta)
    return map_coordinates(s.magnitudes, [rows, cols], order=1, mode="nearest")


def isotropy_score(s: SpectrumGrid, radii: Sequence[float] = DEFAULT_RADII, angles: int = DEFAULT_ANGLES) -> float:
    """Mean over ``radii`` of the angular coefficient of variation. Lower is more isotropic."""
    if not radii:
        raise InvalidParameterException("isotropy_score needs at least one radius")
    if angles < MIN_ANGLES:
        raise InvalidParameterException(f"need at least {MIN_ANGLES} angular samples, got {angles}")

    cvs = []
    for r in radii:
        if not 0.0 < r < 0.5:
            raise InvalidParameterException(f"radius must be in (0, 0.5) cycles/sample, got {r}")
        profile = angular_profile(s, r, angles)
        mean = float(profile.mean())
        if mean <= 0.0:
            raise InvalidParameterException(f"spectrum is zero on the circle of radius {r}")
        cvs.append(float(profile.std()) / mean)
    score = float(np.mean(cvs))
    logger.debug(f"isotropy_score: radii={list(radii)} cvs={cvs} score={score:.6f}")
    return score


def spectrum_image_plane(s: SpectrumGrid) -> np.ndarray:
    """Magnitudes scaled so the peak maps to 255."""
    peak = float(s.magnitudes.max())
    if peak <= 0.0:
        return np.zeros_like(s.magnitudes)
    return s.magnitudes * (255.0 / peak)
