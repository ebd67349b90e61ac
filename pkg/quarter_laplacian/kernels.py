"""
3x3 stencils: the three classical discrete Laplacians and the four quarter kernels.

Coefficient grids are written row by row, top to bottom, with the centre at (1, 1).
A coefficient at grid[row][col] weights the sample at offset (a, b) = (col - 1, row - 1),
i.e. x to the right and y downward.

Every kernel is defined from exact rationals. ``Kernel3`` keeps that exact form plus an
integer numerator grid over one common denominator, which is what the correlation
code multiplies by, so responses are an exact integer stencil sum divided once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from image_core.exceptions import InvalidParameterException

RationalGrid = Tuple[Tuple[Fraction, ...], ...]


class KernelVariant(str, Enum):
    STANDARD4 = "standard4"
    SHARP16 = "sharp16"
    ISOTROPIC12 = "isotropic12"


# used for Laplacian diffusion unless another variant is asked for
DEFAULT_LAPLACIAN = KernelVariant.ISOTROPIC12


def _grid(rows: Sequence[Sequence[object]]) -> RationalGrid:
    out = tuple(tuple(Fraction(v) for v in row) for row in rows)  # type: ignore[arg-type]
    if len(out) != 3 or any(len(r) != 3 for r in out):
        raise InvalidParameterException("kernel grid must be 3x3")
    return out


@dataclass(frozen=True, eq=False)
class Kernel3:
    name: str
    exact: RationalGrid

    def __post_init__(self) -> None:
        object.__setattr__(self, "exact", _grid(self.exact))

    @property
    def coefficients(self) -> np.ndarray:
        """float64 grid, rows top to bottom."""
        return np.array([[float(v) for v in row] for row in self.exact], dtype=np.float64)

    @property
    def denominator(self) -> int:
        return math.lcm(*(v.denominator for row in self.exact for v in row))

    @property
    def numerators(self) -> np.ndarray:
        """Integer grid N with coefficients == N / denominator."""
        d = self.denominator
        return np.array([[int(v * d) for v in row] for row in self.exact], dtype=np.int64)

    def at(self, a: int, b: int) -> Fraction:
        """Coefficient weighting the sample at offset (a, b), a, b in {-1, 0, 1}."""
        return self.exact[b + 1][a + 1]

    def taps(self) -> list[tuple[int, int, int]]:
        """Non-zero (a, b, numerator) triples in row-major order."""
        nums = self.numerators
        return [(col - 1, row - 1, int(nums[row, col])) for row in range(3) for col in range(3) if nums[row, col] != 0]

    def total(self) -> Fraction:
        return sum((v for row in self.exact for v in row), Fraction(0))

    def center(self) -> Fraction:
        return self.exact[1][1]

    def rotate_cw(self, name: str | None = None) -> "Kernel3":
        rotated = tuple(tuple(self.exact[2 - c][r] for c in range(3)) for r in range(3))
        return Kernel3(name or f"{self.name}_cw", rotated)

    def flip_horizontal(self, name: str | None = None) -> "Kernel3":
        return Kernel3(name or f"{self.name}_fliph", tuple(tuple(reversed(row)) for row in self.exact))

    def flip_vertical(self, name: str | None = None) -> "Kernel3":
        return Kernel3(name or f"{self.name}_flipv", tuple(reversed(self.exact)))

    def same_coefficients(self, other: "Kernel3") -> bool:
        return self.exact == other.exact


F = Fraction

LAPLACIAN_GRIDS = {
    KernelVariant.STANDARD4: (
        (0, F(1, 4), 0),
        (F(1, 4), -1, F(1, 4)),
        (0, F(1, 4), 0),
    ),
    KernelVariant.SHARP16: (
        (F(-1, 16), F(5, 16), F(-1, 16)),
        (F(5, 16), -1, F(5, 16)),
        (F(-1, 16), F(5, 16), F(-1, 16)),
    ),
    KernelVariant.ISOTROPIC12: (
        (F(1, 12), F(1, 6), F(1, 12)),
        (F(1, 6), -1, F(1, 6)),
        (F(1, 12), F(1, 6), F(1, 12)),
    ),
}

T = F(1, 3)

# k1 upper-left, k2 upper-right, k3 lower-right, k4 lower-left
QUARTER_GRIDS = (
    ((T, T, 0), (T, -1, 0), (0, 0, 0)),
    ((0, T, T), (0, -1, T), (0, 0, 0)),
    ((0, 0, 0), (0, -1, T), (0, T, T)),
    ((0, 0, 0), (T, -1, 0), (T, T, 0)),
)


def laplacian_kernel(variant: KernelVariant | str) -> Kernel3:
    try:
        v = KernelVariant(variant)
    except ValueError as e:
        raise InvalidParameterException(f"unknown Laplacian kernel {variant!r}; expected one of {[k.value for k in KernelVariant]}") from e
    return Kernel3(v.value, LAPLACIAN_GRIDS[v])  # type: ignore[arg-type]


def quarter_kernels() -> tuple[Kernel3, Kernel3, Kernel3, Kernel3]:
    k1, k2, k3, k4 = (Kernel3(f"k{i + 1}", g) for i, g in enumerate(QUARTER_GRIDS))  # type: ignore[arg-type]
    return (k1, k2, k3, k4)
