import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dppix import InvalidParameterError, PrivacyParams, laplace_at
from dppix.image import block_sums, grid_dims, mirror_pad
from dppix.uniform import GridMeans, broadcast_means, pixelize_parallel, pixelize_reference, quantize, release

from conftest import random_image
from oracles import brute_box_pixelize


P = PrivacyParams(epsilon=0.5, m=16, b=2)


def test_half_rounds_up():
    img = np.array([[0, 0], [255, 255]], dtype=np.uint8)
    np.testing.assert_array_equal(pixelize_reference(img, P, 0, noise=False), np.full((2, 2), 128))
    out, _ = pixelize_parallel(img, P, 0, noise=False)
    np.testing.assert_array_equal(out, np.full((2, 2), 128))


def test_clipping():
    assert release(100.0, 200.0) == 255
    assert release(100.0, -300.0) == 0
    np.testing.assert_array_equal(release(np.array([100.0, 100.0]), np.array([200.0, -101.0])), [255, 0])


@pytest.mark.parametrize("x, q", [(0.0, 0), (0.5, 1), (1.4999999, 1), (2.5, 3), (254.5, 255), (0.49999999999999994, 0)])
def test_quantize(x, q):
    assert quantize(x) == q
    assert quantize(np.array([x]))[0] == q


def test_grid_means_0_to_15():
    img = np.arange(16, dtype=np.uint8).reshape(4, 4)
    expected = np.kron(np.array([[3, 5], [11, 13]]), np.ones((2, 2), dtype=int))
    np.testing.assert_array_equal(pixelize_reference(img, P, 0, noise=False), expected)
    out, means = pixelize_parallel(img, P, 0, noise=False)
    np.testing.assert_array_equal(out, expected)
    np.testing.assert_array_equal(means.values, [[3, 5], [11, 13]])


@pytest.mark.parametrize("shape, b", [((16, 16), 4), ((32, 24), 8), ((12, 36), 2), ((64, 64), 16)])
def test_parallel_matches_reference(rng, shape, b):
    img = random_image(rng, shape)
    p = PrivacyParams(epsilon=1.0, m=4, b=b)
    for seed in (0, 1, 2**63 + 5):
        out, _ = pixelize_parallel(img, p, seed)
        np.testing.assert_array_equal(out, pixelize_reference(img, p, seed))


def test_constant_image_without_noise():
    img = np.full((11, 13), 91, dtype=np.uint8)
    out, _ = pixelize_parallel(img, PrivacyParams(1.0, 1, 4), 3, noise=False)
    np.testing.assert_array_equal(out, img)


def test_parallel_matches_brute_oracle(rng):
    img = random_image(rng, (10, 10))
    p = PrivacyParams(0.8, 2, 3)
    out, _ = pixelize_parallel(img, p, 0, noise=False)
    np.testing.assert_array_equal(out, brute_box_pixelize(img.tolist(), 3))
    out, _ = pixelize_parallel(img, p, 77)
    oracle = brute_box_pixelize(img.tolist(), 3, lambda r, c: laplace_at(77, (r, c, 0, 0), p.sigma))
    np.testing.assert_array_equal(out, oracle)


def test_reference_uses_partial_border_grids():
    img = np.array([[0, 10, 20], [30, 40, 50], [60, 70, 80]], dtype=np.uint8)
    out = pixelize_reference(img, PrivacyParams(1.0, 1, 2), 0, noise=False)
    # grids: [[0,10],[30,40]] -> 20; [[20],[50]] -> 35; [[60,70]] -> 65; [[80]] -> 80
    np.testing.assert_array_equal(out, [[20, 20, 35], [20, 20, 35], [65, 65, 80]])


def test_uniform_requires_n1(rng):
    with pytest.raises(InvalidParameterError):
        pixelize_parallel(random_image(rng, (8, 8)), PrivacyParams(1.0, 1, 4, 2), 0)


def test_broadcast_examples():
    g = grid_dims(4, 4, 4)
    np.testing.assert_array_equal(broadcast_means(GridMeans(g, [7]), 4, 4), np.full((4, 4), 7))
    g = grid_dims(2, 2, 1)
    np.testing.assert_array_equal(broadcast_means(GridMeans(g, [[1, 2], [3, 4]]), 2, 2), [[1, 2], [3, 4]])
    g = grid_dims(3, 3, 2)
    np.testing.assert_array_equal(
        broadcast_means(GridMeans(g, [[1, 2], [3, 4]]), 3, 3), [[1, 1, 2], [1, 1, 2], [3, 3, 4]]
    )
    with pytest.raises(InvalidParameterError):
        broadcast_means(GridMeans(g, [[1, 2], [3, 4]]), 4, 4)


@st.composite
def uniform_case(draw):
    h = draw(st.integers(1, 40))
    w = draw(st.integers(1, 40))
    b = draw(st.integers(1, min(h, w)))
    img = draw(arrays(np.uint8, (h, w)))
    seed = draw(st.integers(0, 2**64 - 1))
    eps = draw(st.sampled_from([0.1, 0.5, 2.0]))
    return img, PrivacyParams(eps, draw(st.integers(1, 64)), b), seed


@settings(max_examples=80, deadline=None)
@given(uniform_case())
def test_piecewise_constant_and_in_range(case):
    img, p, seed = case
    out, means = pixelize_parallel(img, p, seed)
    b = p.b
    assert out.dtype == np.uint8 and out.shape == img.shape
    for r in range(means.geometry.rows):
        for c in range(means.geometry.cols):
            block = out[r * b:(r + 1) * b, c * b:(c + 1) * b]
            assert (block == means.values[r, c]).all()


@settings(max_examples=60, deadline=None)
@given(uniform_case())
def test_block_constant_idempotent(case):
    img, p, seed = case
    # build an input that is already constant per block
    block_const, _ = pixelize_parallel(img, p, seed)
    again, _ = pixelize_parallel(block_const, p, seed, noise=False)
    if all(s % p.b == 0 for s in img.shape):
        np.testing.assert_array_equal(again, block_const)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_sensitivity_bound_full_grids(data):
    b = data.draw(st.integers(1, 8))
    h, w = b * data.draw(st.integers(1, 5)), b * data.draw(st.integers(1, 5))
    m = data.draw(st.integers(1, 8))
    img = data.draw(arrays(np.uint8, (h, w)))
    other = img.copy()
    idx = data.draw(st.lists(st.integers(0, h * w - 1), min_size=1, max_size=m, unique=True))
    other.flat[idx] = data.draw(arrays(np.uint8, (len(idx),)))
    p = PrivacyParams(1.0, m, b)
    g = grid_dims(h, w, b)
    diff = np.abs(block_sums(mirror_pad(img, g), b) - block_sums(mirror_pad(other, g), b)) / (b * b)
    assert diff.max() <= p.delta + 1e-9


def test_mirror_padding_duplicates_border_pixels():
    # A corner pixel is reflected into all four cells of its 2x2 border grid,
    # so that grid's mean moves by 4x the full-grid sensitivity.
    a = np.zeros((3, 3), dtype=np.uint8)
    b = a.copy()
    b[2, 2] = 255
    g = grid_dims(3, 3, 2)
    diff = (block_sums(mirror_pad(b, g), 2) - block_sums(mirror_pad(a, g), 2)) / 4
    assert diff[1, 1] == 4 * PrivacyParams(1.0, 1, 2).delta


@pytest.mark.parametrize("threads", [1, 2, 3, 8])
def test_thread_count_independence(rng, threads):
    img = random_image(rng, (97, 131))
    p = PrivacyParams(0.5, 16, 8)
    base, base_means = pixelize_parallel(img, p, 11, threads=1)
    out, means = pixelize_parallel(img, p, 11, threads=threads)
    np.testing.assert_array_equal(out, base)
    assert means == base_means
