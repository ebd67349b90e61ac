"""
Quarter Laplacian response: four 2x2 quarter-window Laplacians per pixel, keeping the
one with the smallest magnitude.

Two paths compute the same maps:
  naive  correlate the image with k1..k4 separately (four 3x3 correlations)
  fast   one 2x2 box-sum pass shared by all four windows of every pixel; the upper-left
         window of (x+1, y) is the upper-right window of (x, y), and so on, so
         d_i = (S - 4U) / 3 with S read at (x, y), (x+1, y), (x+1, y+1), (x, y+1)

"Convolution" is implemented as correlation (no kernel flip). Flipping would only swap
k1<->k3 and k2<->k4, so magnitudes and the selected response are unaffected.

Sums are accumulated in float64 from float32 samples with integer weights, which is
exact for 8-bit data; the one division happens last. Both paths therefore produce the
same bits, and flat regions give exact zeros.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from image_core.buffer import BOUNDARY, ImageBuffer
from image_core.exceptions import DimensionMismatchException
from quarter_laplacian.kernels import Kernel3, quarter_kernels

logger = logging.getLogger(__name__)

# signed response map, (height, width) float64
FeatureMap = np.ndarray
# (height + 1, width + 1) float64; S[y, x] sums the 2x2 block whose bottom-right pixel is (x, y)
BoxSumMap = np.ndarray

VISUALIZATION_OFFSET = 128.0

# S offsets (dx, dy) for windows k1..k4: upper-left, upper-right, lower-right, lower-left
QUARTER_BOX_OFFSETS = ((0, 0), (1, 0), (1, 1), (0, 1))


class ResponsePath(str, Enum):
    NAIVE = "naive"
    FAST = "fast"


@dataclass(frozen=True, eq=False)
class QuarterMaps:
    """
    responses  (4, height, width): d1..d4
    selection  (height, width) uint8 in 1..4: smallest index reaching min |d_i|
    selected   (height, width): d at the selected index
    """

    responses: np.ndarray
    selection: np.ndarray
    selected: FeatureMap

    def d(self, i: int) -> FeatureMap:
        """Response map d_i, 1-based as in k1..k4."""
        return self.responses[i - 1]

    @property
    def height(self) -> int:
        return int(self.selected.shape[0])

    @property
    def width(self) -> int:
        return int(self.selected.shape[1])


def _single_plane(channel: ImageBuffer) -> np.ndarray:
    if channel.channels != 1:
        raise DimensionMismatchException(f"expected a 1-channel image, got {channel.channels} channels")
    return channel.plane(0)


def correlate_plane(u: np.ndarray, k: Kernel3) -> FeatureMap:
    """correlate3 on a bare (height, width) array."""
    h, w = u.shape
    padded = BOUNDARY.pad(u.astype(np.float64), 1)
    acc = np.zeros((h, w), dtype=np.float64)
    for a, b, n in k.taps():
        window = padded[1 + b : 1 + b + h, 1 + a : 1 + a + w]
        if n == 1:
            acc += window
        else:
            acc += n * window
    return acc / k.denominator


def correlate3(channel: ImageBuffer, k: Kernel3) -> FeatureMap:
    """out(x, y) = sum over a, b in {-1, 0, 1} of k(a, b) * sample(x + a, y + b)."""
    return correlate_plane(_single_plane(channel), k)


def select_min_abs(responses: np.ndarray) -> tuple[np.ndarray, FeatureMap]:
    """
    Per pixel, index (1-based) and value of the response with the smallest magnitude.

    argmin returns the first occurrence, so ties keep the earlier index.
    """
    idx = np.argmin(np.abs(responses), axis=0)
    selected = np.take_along_axis(responses, idx[np.newaxis], axis=0)[0]
    return (idx + 1).astype(np.uint8), selected


def quarter_naive_plane(u: np.ndarray) -> QuarterMaps:
    responses = np.stack([correlate_plane(u, k) for k in quarter_kernels()])
    selection, selected = select_min_abs(responses)
    return QuarterMaps(responses=responses, selection=selection, selected=selected)


def quarter_response_naive(channel: ImageBuffer) -> QuarterMaps:
    """Four correlations with k1..k4, then argmin |d_i| with lowest-index tie-break."""
    return quarter_naive_plane(_single_plane(channel))


def box_sum_plane(u: np.ndarray) -> BoxSumMap:
    p = BOUNDARY.pad(u.astype(np.float64), 1)
    return p[:-1, :-1] + p[:-1, 1:] + p[1:, :-1] + p[1:, 1:]


def box_sum_2x2(channel: ImageBuffer) -> BoxSumMap:
    """S[y, x] = sample(x-1, y-1) + sample(x, y-1) + sample(x-1, y) + sample(x, y), 0 <= x <= width, 0 <= y <= height."""
    return box_sum_plane(_single_plane(channel))


def _quarter_numerators(u: np.ndarray) -> np.ndarray:
    """(4, height, width) stack of S_i - 4U, i.e. 3 * d_i."""
    h, w = u.shape
    s = box_sum_plane(u)
    u4 = 4.0 * u.astype(np.float64)
    out = np.empty((4, h, w), dtype=np.float64)
    for i, (dx, dy) in enumerate(QUARTER_BOX_OFFSETS):
        np.subtract(s[dy : dy + h, dx : dx + w], u4, out=out[i])
    return out


def quarter_fast_plane(u: np.ndarray) -> QuarterMaps:
    responses = _quarter_numerators(u)
    responses /= 3.0
    selection, selected = select_min_abs(responses)
    return QuarterMaps(responses=responses, selection=selection, selected=selected)


class QuarterWorkspace:
    """
    Scratch arrays for quarter_selected_fast, reallocated only when the plane shape changes.

    The array returned by a call is owned by the workspace and overwritten by the next
    call. One workspace must not be shared between threads.
    """

    def __init__(self) -> None:
        self.shape: tuple[int, int] = (0, 0)

    def ensure(self, shape: tuple[int, int]) -> None:
        if shape == self.shape:
            return
        h, w = shape
        self.shape = shape
        self.padded = np.empty((h + 2, w + 2), dtype=np.float64)
        self.box = np.empty((h + 1, w + 1), dtype=np.float64)
        self.u4 = np.empty((h, w), dtype=np.float64)
        self.best = np.empty((h, w), dtype=np.float64)
        self.best_mag = np.empty((h, w), dtype=np.float64)
        self.num = np.empty((h, w), dtype=np.float64)
        self.mag = np.empty((h, w), dtype=np.float64)
        self.mask = np.empty((h, w), dtype=bool)


def quarter_selected_fast(u: np.ndarray, workspace: Optional[QuarterWorkspace] = None) -> FeatureMap:
    """
    d_m alone, without materializing the (4, height, width) stack.

    A running minimum over the numerators S_i - 4U, replaced only on a strictly smaller
    magnitude, keeps the lowest index on ties exactly like select_min_abs. Only the
    winner is divided by 3.
    """
    ws = workspace if workspace is not None else QuarterWorkspace()
    h, w = u.shape
    ws.ensure((h, w))

    p = BOUNDARY.pad_into(u, ws.padded)
    np.add(p[:-1, :-1], p[:-1, 1:], out=ws.box)
    np.add(ws.box, p[1:, :-1], out=ws.box)
    np.add(ws.box, p[1:, 1:], out=ws.box)
    np.multiply(p[1:-1, 1:-1], 4.0, out=ws.u4)

    dx, dy = QUARTER_BOX_OFFSETS[0]
    np.subtract(ws.box[dy : dy + h, dx : dx + w], ws.u4, out=ws.best)
    np.abs(ws.best, out=ws.best_mag)
    for dx, dy in QUARTER_BOX_OFFSETS[1:]:
        np.subtract(ws.box[dy : dy + h, dx : dx + w], ws.u4, out=ws.num)
        np.abs(ws.num, out=ws.mag)
        np.less(ws.mag, ws.best_mag, out=ws.mask)
        np.copyto(ws.best, ws.num, where=ws.mask)
        np.minimum(ws.best_mag, ws.mag, out=ws.best_mag)

    np.divide(ws.best, 3.0, out=ws.best)
    return ws.best


def quarter_response_fast(channel: ImageBuffer) -> QuarterMaps:
    """Single box-sum pass, d_i = (S_i - 4U) / 3, same selection as the naive path."""
    return quarter_fast_plane(_single_plane(channel))


def quarter_plane(u: np.ndarray, path: ResponsePath = ResponsePath.FAST) -> QuarterMaps:
    if ResponsePath(path) == ResponsePath.NAIVE:
        return quarter_naive_plane(u)
    return quarter_fast_plane(u)


def quarter_response(channel: ImageBuffer, path: ResponsePath = ResponsePath.FAST) -> QuarterMaps:
    maps = quarter_plane(_single_plane(channel), path)
    logger.info(f"quarter_response: {ResponsePath(path).value} path on {maps.width}x{maps.height}")
    return maps


def feature_map_image(values: FeatureMap) -> ImageBuffer:
    """Signed map shifted by +128 for viewing; clamping happens when the image is encoded."""
    return ImageBuffer.from_array(np.asarray(values, dtype=np.float64) + VISUALIZATION_OFFSET)
