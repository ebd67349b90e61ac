import numpy as np
import pytest

from image_core import DimensionMismatchException, ImageBuffer, InvalidParameterException, encode_samples
from image_core.synthetic import Pattern, generate_pattern
from quarter_laplacian.applications import (
    EnhanceConfig,
    LowLightConfig,
    enhance_detail,
    enhance_lowlight,
    lowlight_layers,
    smooth,
)
from quarter_laplacian.diffusion import DiffusionConfig, diffuse_quarter


def _constant_rgb(r: float, g: float, b: float, size: int = 8) -> ImageBuffer:
    return ImageBuffer(np.stack([np.full((size, size), v) for v in (r, g, b)]))


def test_smooth_keeps_constants_and_steps():
    flat = _constant_rgb(10, 20, 30)
    assert np.array_equal(smooth(flat).data, flat.data)
    step = generate_pattern(Pattern.STEP, 16, channels=3, low=0, high=100)
    assert np.array_equal(smooth(step, DiffusionConfig(iterations=50)).data, step.data)


def test_smooth_reduces_noise():
    noisy = generate_pattern(Pattern.NOISE, 64, channels=3, level=100, amplitude=20, seed=3)
    out = smooth(noisy, DiffusionConfig(iterations=10), max_workers=3)
    for c in range(3):
        assert np.std(out.data[c] - 100.0) < np.std(noisy.data[c] - 100.0)


def test_enhance_alpha_one_is_identity():
    rng = np.random.default_rng(0)
    img = ImageBuffer(rng.uniform(0, 255, size=(3, 15, 12)))
    assert np.array_equal(enhance_detail(img, EnhanceConfig(alpha=1.0)).data, img.data)


def test_enhance_leaves_fixed_points_alone():
    step = generate_pattern(Pattern.STEP, 16, low=20, high=200)
    assert np.array_equal(enhance_detail(step).data, step.data)


def test_enhance_amplifies_single_detail():
    plane = np.full((9, 9), 100.0)
    plane[4, 4] = 110.0
    img = ImageBuffer.from_array(plane)
    structure = diffuse_quarter(img, c=1.0, t=10).plane(0)[4, 4]
    out = enhance_detail(img, EnhanceConfig(iterations=10, alpha=10.0)).plane(0)[4, 4]
    assert out == pytest.approx(structure + 10.0 * (110.0 - structure), abs=1e-3)
    assert out == pytest.approx(200.0, abs=1e-3)


def test_enhance_keeps_structure_on_fixed_points():
    corner = generate_pattern(Pattern.CORNER, 16, low=0, high=100)
    before = smooth(corner)
    after = smooth(enhance_detail(corner))
    assert np.max(np.abs(after.data - before.data)) <= 1e-3


def test_lowlight_lifts_constant_gray():
    img = _constant_rgb(64, 64, 64)
    out = enhance_lowlight(img, LowLightConfig(gamma=0.5))
    assert np.all(np.abs(out.data - 127.75) <= 0.5)
    assert np.all(encode_samples(out) == 128)


def test_lowlight_gamma_one_is_identity_on_fixed_points():
    step = generate_pattern(Pattern.STEP, 16, channels=3, low=0, high=90)
    out = enhance_lowlight(step, LowLightConfig(gamma=1.0))
    assert np.array_equal(out.data, step.data)


def test_lowlight_black_stays_black():
    out = enhance_lowlight(_constant_rgb(0, 0, 0))
    assert np.all(out.data == 0.0)


@pytest.mark.parametrize("value", [5.0, 40.0, 128.0, 250.0])
def test_lowlight_never_darkens_constants(value):
    img = _constant_rgb(value, value, value)
    assert np.all(enhance_lowlight(img).data >= img.data)


def test_lowlight_preserves_hue():
    img = _constant_rgb(40, 20, 10)
    out = enhance_lowlight(img).data.astype(np.float64)
    assert np.all(np.abs(out[1] / out[0] - 0.5) <= 1e-4)
    assert np.all(np.abs(out[2] / out[0] - 0.25) <= 1e-4)


def test_lowlight_layers_are_incremental_scales():
    noisy = generate_pattern(Pattern.NOISE, 24, channels=3, level=60, amplitude=30, seed=5)
    cfg = LowLightConfig(scales=(2, 5, 9))
    layers = lowlight_layers(noisy, cfg)
    assert len(layers.bases) == 3 and len(layers.bands) == 3
    lum = ImageBuffer.from_array(layers.luminance.astype(np.float32))
    for scale, base in zip(cfg.scales, layers.bases):
        assert np.array_equal(base, diffuse_quarter(lum, t=scale).plane(0).astype(np.float64))
    assert np.allclose(sum(layers.bands), layers.detail, atol=1e-6)
    assert np.all(layers.gain <= cfg.max_gain)


def test_lowlight_threads_match_sequential():
    noisy = generate_pattern(Pattern.NOISE, 20, channels=3, level=50, amplitude=30, seed=7)
    sequential = enhance_lowlight(noisy)
    threaded = enhance_lowlight(noisy, max_workers=3)
    layers = lowlight_layers(noisy)
    assert np.array_equal(sequential.data, threaded.data)
    expected = (noisy.data.astype(np.float64) * layers.gain[np.newaxis]).astype(np.float32)
    assert np.array_equal(sequential.data, expected)


def test_detail_gains_weight_the_bands():
    noisy = generate_pattern(Pattern.NOISE, 24, channels=3, level=60, amplitude=30, seed=6)
    unit = lowlight_layers(noisy, LowLightConfig(scales=(1, 4), detail_gains=(1.0, 1.0)))
    default = lowlight_layers(noisy, LowLightConfig(scales=(1, 4)))
    assert np.allclose(unit.detail, default.detail, atol=1e-9)
    flat = lowlight_layers(noisy, LowLightConfig(scales=(1, 4), detail_gains=(0.0, 0.0)))
    assert np.allclose(flat.adjusted, np.power(flat.bases[-1].clip(min=0.0), 0.5))


def test_lowlight_needs_rgb():
    with pytest.raises(DimensionMismatchException):
        enhance_lowlight(generate_pattern(Pattern.STEP, 8))


def test_config_validation():
    with pytest.raises(InvalidParameterException):
        EnhanceConfig(alpha=0.0)
    with pytest.raises(InvalidParameterException):
        EnhanceConfig(iterations=0)
    with pytest.raises(InvalidParameterException):
        LowLightConfig(scales=(10, 1))
    with pytest.raises(InvalidParameterException):
        LowLightConfig(scales=())
    with pytest.raises(InvalidParameterException):
        LowLightConfig(gamma=1.5)
    with pytest.raises(InvalidParameterException):
        LowLightConfig(epsilon=0.0)
    with pytest.raises(InvalidParameterException):
        LowLightConfig(scales=(1, 10), detail_gains=(1.0,))
