"""
Quarter Laplacian filtering: kernels, spectra, the quarter response, diffusion and the
image operations built on it.
"""

from .applications import EnhanceConfig, LowLightConfig, LowLightLayers, enhance_detail, enhance_lowlight, lowlight_layers, smooth
from .benchmark import BenchReport, BenchResult, run_benchmark
from .diffusion import DiffusionConfig, DiffusionVariant, diffuse, diffuse_laplacian, diffuse_quarter, diffusion_profiles, row_profile
from .kernels import DEFAULT_LAPLACIAN, Kernel3, KernelVariant, laplacian_kernel, quarter_kernels
from .quarter_filter import (
    QuarterMaps,
    ResponsePath,
    box_sum_2x2,
    correlate3,
    feature_map_image,
    quarter_response,
    quarter_response_fast,
    quarter_response_naive,
)
from .spectrum import SpectrumGrid, angular_profile, isotropy_score, kernel_spectrum

__all__ = [
    "Kernel3",
    "KernelVariant",
    "DEFAULT_LAPLACIAN",
    "laplacian_kernel",
    "quarter_kernels",
    "SpectrumGrid",
    "kernel_spectrum",
    "angular_profile",
    "isotropy_score",
    "QuarterMaps",
    "ResponsePath",
    "correlate3",
    "box_sum_2x2",
    "quarter_response",
    "quarter_response_naive",
    "quarter_response_fast",
    "feature_map_image",
    "DiffusionConfig",
    "DiffusionVariant",
    "diffuse",
    "diffuse_laplacian",
    "diffuse_quarter",
    "diffusion_profiles",
    "row_profile",
    "EnhanceConfig",
    "LowLightConfig",
    "LowLightLayers",
    "smooth",
    "enhance_detail",
    "enhance_lowlight",
    "lowlight_layers",
    "BenchReport",
    "BenchResult",
    "run_benchmark",
]
