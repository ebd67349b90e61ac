"""
Per-iteration wall time of one diffusion step: Laplacian correlation, quarter response
via four correlations, quarter response via the shared box sum.

Each repeat runs ``iterations`` steps on the same seeded noise image; one warmup round
is discarded and the median over repeats is reported.
"""

from __future__ import annotations

import logging
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np

from image_core.buffer import ImageBuffer
from image_core.exceptions import InvalidParameterException
from quarter_laplacian.diffusion import diffuse_laplacian, diffuse_quarter
from quarter_laplacian.kernels import DEFAULT_LAPLACIAN, laplacian_kernel
from quarter_laplacian.quarter_filter import ResponsePath

logger = logging.getLogger(__name__)

DEFAULT_BENCH_SIZE = 1024
DEFAULT_BENCH_ITERATIONS = 10
DEFAULT_BENCH_REPEATS = 5

LAPLACIAN_NAIVE = "laplacian naive"
QUARTER_NAIVE = "quarter naive"
QUARTER_FAST = "quarter fast"


@dataclass(frozen=True)
class BenchResult:
    name: str
    median_ms_per_iter: float


@dataclass(frozen=True)
class BenchReport:
    size: int
    iters: int
    repeats: int
    results: List[BenchResult] = field(default_factory=list)

    def median(self, name: str) -> float:
        for r in self.results:
            if r.name == name:
                return r.median_ms_per_iter
        raise KeyError(name)

    def ratio(self, numerator: str, denominator: str) -> float:
        den = self.median(denominator)
        return self.median(numerator) / den if den > 0 else float("inf")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _time_per_iteration(run: Callable[[], object], iterations: int, repeats: int) -> float:
    run()  # warmup
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        run()
        samples.append((time.perf_counter() - start) * 1000.0 / iterations)
    return statistics.median(samples)


def run_benchmark(
    size: int = DEFAULT_BENCH_SIZE,
    iterations: int = DEFAULT_BENCH_ITERATIONS,
    repeats: int = DEFAULT_BENCH_REPEATS,
    seed: int = 0,
) -> BenchReport:
    if size < 1:
        raise InvalidParameterException(f"benchmark size must be >= 1, got {size}")
    if iterations < 1:
        raise InvalidParameterException(f"benchmark iterations must be >= 1, got {iterations}")
    if repeats < 1:
        raise InvalidParameterException(f"benchmark repeats must be >= 1, got {repeats}")

    rng = np.random.default_rng(seed)
    img = ImageBuffer.from_array(rng.uniform(0.0, 255.0, size=(size, size)).astype(np.float32))
    k = laplacian_kernel(DEFAULT_LAPLACIAN)

    cases: List[tuple[str, Callable[[], object]]] = [
        (LAPLACIAN_NAIVE, lambda: diffuse_laplacian(img, k, 1.0, iterations)),
        (QUARTER_NAIVE, lambda: diffuse_quarter(img, 1.0, iterations, path=ResponsePath.NAIVE)),
        (QUARTER_FAST, lambda: diffuse_quarter(img, 1.0, iterations, path=ResponsePath.FAST)),
    ]

    # per-call INFO lines from the diffusion functions would flood the log
    diffusion_logger = logging.getLogger("quarter_laplacian.diffusion")
    previous = diffusion_logger.level
    diffusion_logger.setLevel(logging.WARNING)
    try:
        results = [BenchResult(name, _time_per_iteration(run, iterations, repeats)) for name, run in cases]
    finally:
        diffusion_logger.setLevel(previous)

    for r in results:
        logger.info(f"bench: {r.name} {r.median_ms_per_iter:.3f} ms/iter at {size}x{size}")
    return BenchReport(size=size, iters=iterations, repeats=repeats, results=results)
