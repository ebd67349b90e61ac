"""
Quarter response: path equivalence, the brute-force oracle, fixed points and symmetry.
"""

import numpy as np
import pytest

from image_core import DimensionMismatchException, ImageBuffer, sample
from image_core.synthetic import Pattern, generate_pattern
from quarter_laplacian.kernels import KernelVariant, laplacian_kernel, quarter_kernels
from quarter_laplacian.quarter_filter import (
    VISUALIZATION_OFFSET,
    QuarterWorkspace,
    ResponsePath,
    box_sum_2x2,
    correlate3,
    feature_map_image,
    quarter_response,
    quarter_response_fast,
    quarter_response_naive,
    quarter_selected_fast,
)

TOL = 1e-4


def _random_sizes(count: int, seed: int):
    rng = np.random.default_rng(seed)
    fixed = [(1, 1), (1, 9), (9, 1), (2, 2), (3, 2), (257, 253)]
    rest = [(int(h), int(w)) for h, w in rng.integers(1, 258, size=(count - len(fixed), 2))]
    return fixed + rest


def _brute_force(img: ImageBuffer, x: int, y: int):
    """d1..d4 at one pixel from sample(), each window summed by hand."""
    u = sample(img, 0, x, y)
    windows = [
        [(-1, -1), (0, -1), (-1, 0)],
        [(0, -1), (1, -1), (1, 0)],
        [(1, 0), (1, 1), (0, 1)],
        [(-1, 0), (-1, 1), (0, 1)],
    ]
    return [(sum(sample(img, 0, x + a, y + b) for a, b in w) - 3 * u) / 3 for w in windows]


def test_fast_matches_naive_on_random_images():
    rng = np.random.default_rng(2024)
    sizes = _random_sizes(100, seed=1)
    for h, w in sizes:
        img = ImageBuffer.from_array(rng.uniform(0.0, 255.0, size=(h, w)).astype(np.float32))
        naive = quarter_response_naive(img)
        fast = quarter_response_fast(img)
        assert np.max(np.abs(fast.responses - naive.responses)) <= TOL

        mags = np.sort(np.abs(naive.responses), axis=0)
        unique = (mags[1] - mags[0]) > 1e-9
        assert np.array_equal(fast.selection[unique], naive.selection[unique])
        assert np.max(np.abs(fast.selected[unique] - naive.selected[unique]), initial=0.0) <= TOL


def test_paths_are_bit_identical_on_8bit_data():
    rng = np.random.default_rng(77)
    img = ImageBuffer.from_array(rng.integers(0, 256, size=(40, 33)).astype(np.float32))
    naive = quarter_response_naive(img)
    fast = quarter_response_fast(img)
    assert np.array_equal(naive.responses, fast.responses)
    assert np.array_equal(naive.selection, fast.selection)
    assert np.array_equal(quarter_selected_fast(img.plane(0)), naive.selected)


def test_naive_matches_brute_force_oracle():
    rng = np.random.default_rng(9)
    img = ImageBuffer.from_array(rng.integers(0, 256, size=(5, 4)).astype(np.float32))
    maps = quarter_response_naive(img)
    for y in range(img.height):
        for x in range(img.width):
            expected = _brute_force(img, x, y)
            got = [maps.d(i)[y, x] for i in range(1, 5)]
            assert got == pytest.approx(expected, abs=1e-9)
            mags = [abs(v) for v in expected]
            assert maps.selection[y, x] == mags.index(min(mags)) + 1


def test_constant_image_selects_first_window():
    img = ImageBuffer.from_array(np.full((6, 7), 123.0))
    for path in ResponsePath:
        maps = quarter_response(img, path)
        assert np.all(maps.responses == 0.0)
        assert np.all(maps.selected == 0.0)
        assert np.all(maps.selection == 1)
        assert maps.selection.dtype == np.uint8


def test_step_edge_pixel_responses():
    img = generate_pattern(Pattern.STEP, 8, low=0, high=100)
    x, y = 3, 4  # last 0-pixel before the edge
    for path in ResponsePath:
        maps = quarter_response(img, path)
        d = [maps.d(i)[y, x] for i in range(1, 5)]
        assert d == pytest.approx([0.0, 200.0 / 3.0, 200.0 / 3.0, 0.0], abs=1e-12)
        assert maps.selection[y, x] == 1
        assert maps.selected[y, x] == 0.0
        assert np.all(maps.selected == 0.0)


def test_corner_pixel_has_one_zero_window():
    img = generate_pattern(Pattern.CORNER, 8, low=0, high=100)
    maps = quarter_response_naive(img)
    d = [maps.d(i)[3, 3] for i in range(1, 5)]
    assert sum(1 for v in d if v == 0.0) == 1
    assert d[0] == 0.0
    assert np.all(maps.selected == 0.0)


def test_box_sum_values():
    img = ImageBuffer.from_array(np.array([[1.0, 2.0], [3.0, 4.0]]))
    s = box_sum_2x2(img)
    assert s.shape == (3, 3)
    assert s[1, 1] == 10.0
    assert s[0, 0] == 4.0
    assert s[1, 2] == 12.0


def test_correlate3_hand_values():
    k = laplacian_kernel(KernelVariant.ISOTROPIC12)
    assert np.all(np.abs(correlate3(ImageBuffer.from_array(np.full((4, 4), 5.0)), k)) < 1e-5)

    step = generate_pattern(Pattern.STEP, 8, low=0, high=100)
    assert correlate3(step, k)[4, 3] == pytest.approx(100.0 / 3.0, abs=1e-9)

    impulse = np.zeros((5, 5))
    impulse[2, 2] = 1.0
    out = correlate3(ImageBuffer.from_array(impulse), k)
    assert out[2, 2] == pytest.approx(-1.0)
    assert out[1, 2] == pytest.approx(1.0 / 6.0)
    assert out[3, 3] == pytest.approx(1.0 / 12.0)


def test_quarter_kernel_correlation_equals_window_response():
    rng = np.random.default_rng(12)
    img = ImageBuffer.from_array(rng.integers(0, 256, size=(6, 6)).astype(np.float32))
    maps = quarter_response_fast(img)
    for i, k in enumerate(quarter_kernels(), start=1):
        np.testing.assert_array_equal(correlate3(img, k), maps.d(i))


SYMMETRIES = [
    lambda a: a,
    lambda a: np.rot90(a, 1),
    lambda a: np.rot90(a, 2),
    lambda a: np.rot90(a, 3),
    lambda a: a[:, ::-1],
    lambda a: a[::-1, :],
    lambda a: a.T,
    lambda a: np.rot90(a, 1).T,
]


@pytest.mark.parametrize("seed", range(20))
def test_selected_magnitude_is_equivariant(seed):
    rng = np.random.default_rng(seed)
    h, w = (int(v) for v in rng.integers(1, 24, size=2))
    plane = rng.integers(0, 256, size=(h, w)).astype(np.float32)
    base = np.abs(quarter_response_fast(ImageBuffer.from_array(plane)).selected)
    for t in SYMMETRIES:
        moved = np.abs(quarter_response_fast(ImageBuffer.from_array(np.ascontiguousarray(t(plane)))).selected)
        assert np.array_equal(moved, t(base))


def test_feature_map_image_offsets_by_128():
    values = np.array([[-200.0, 0.0, 5.5]])
    img = feature_map_image(values)
    np.testing.assert_array_equal(img.plane(0), (values + VISUALIZATION_OFFSET).astype(np.float32))


def test_multichannel_input_rejected():
    with pytest.raises(DimensionMismatchException):
        quarter_response_naive(ImageBuffer(np.zeros((3, 4, 4))))


def _unique_argmin(maps) -> np.ndarray:
    mags = np.sort(np.abs(maps.responses), axis=0)
    return mags[1] > mags[0]


@pytest.mark.parametrize("seed", range(8))
def test_signed_selected_is_equivariant_where_argmin_is_unique(seed):
    rng = np.random.default_rng(100 + seed)
    h, w = (int(v) for v in rng.integers(2, 24, size=2))
    plane = rng.integers(0, 256, size=(h, w)).astype(np.float32)
    maps = quarter_response_fast(ImageBuffer.from_array(plane))
    unique = _unique_argmin(maps)
    for t in SYMMETRIES:
        moved = quarter_response_fast(ImageBuffer.from_array(np.ascontiguousarray(t(plane)))).selected
        mask = t(unique)
        assert np.array_equal(moved[mask], t(maps.selected)[mask])


@pytest.mark.parametrize("path", [ResponsePath.NAIVE, ResponsePath.FAST])
@pytest.mark.parametrize("seed", range(5))
def test_response_magnitude_bounded_by_source_range(seed, path):
    rng = np.random.default_rng(200 + seed)
    plane = rng.uniform(0.0, 255.0, size=(19, 23)).astype(np.float32)
    span = float(plane.max()) - float(plane.min())
    maps = quarter_response(ImageBuffer.from_array(plane), path)
    assert np.max(np.abs(maps.responses)) <= 4.0 / 3.0 * span + TOL
    assert np.max(np.abs(maps.selected)) <= 4.0 / 3.0 * span + TOL


@pytest.mark.parametrize("levels", [2, 4, 256])
def test_selected_fast_agrees_with_full_maps(levels):
    # few levels produce many tied magnitudes
    rng = np.random.default_rng(levels)
    workspace = QuarterWorkspace()
    for h, w in [(16, 16), (1, 5), (16, 16), (31, 7)]:
        plane = rng.integers(0, levels, size=(h, w)).astype(np.float32)
        full = quarter_response_fast(ImageBuffer.from_array(plane))
        assert np.array_equal(quarter_selected_fast(plane, workspace), full.selected)
        assert np.array_equal(quarter_selected_fast(plane), full.selected)
    assert workspace.shape == (31, 7)
