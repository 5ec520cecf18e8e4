import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dppix import InvalidParameterError
from dppix.image import block_sums, crop, grid_dims, grid_mean, mask_grid_mean, mirror_pad

from oracles import brute_pad


@pytest.mark.parametrize(
    "dims, expected",
    [
        ((768, 576, 16), (48, 36, 0, 0)),
        ((10, 10, 3), (4, 4, 2, 2)),
        ((1920, 1080, 30), (64, 36, 0, 0)),
    ],
)
def test_grid_dims(dims, expected):
    g = grid_dims(*dims)
    assert (g.rows, g.cols, g.pad_rows, g.pad_cols) == expected


def test_grid_dims_rejects_zero_side():
    with pytest.raises(InvalidParameterError):
        grid_dims(10, 10, 0)


def test_mirror_pad_last_column():
    img = np.array([[1, 2, 3], [4, 5, 6]], dtype=np.uint8)
    out = mirror_pad(img, grid_dims(2, 3, 2))
    np.testing.assert_array_equal(out, [[1, 2, 3, 3], [4, 5, 6, 6]])


def test_mirror_pad_corner():
    img = np.arange(1, 10, dtype=np.uint8).reshape(3, 3)
    out = mirror_pad(img, grid_dims(3, 3, 2))
    np.testing.assert_array_equal(out, [[1, 2, 3, 3], [4, 5, 6, 6], [7, 8, 9, 9], [7, 8, 9, 9]])


def test_mirror_pad_identity_when_aligned(rng):
    img = rng.integers(0, 256, (8, 12), dtype=np.uint8)
    np.testing.assert_array_equal(mirror_pad(img, grid_dims(8, 12, 4)), img)


def test_mirror_pad_too_large_side():
    img = np.zeros((3, 3), dtype=np.uint8)
    with pytest.raises(InvalidParameterError):
        mirror_pad(img, grid_dims(3, 3, 7))


@st.composite
def image_and_side(draw):
    h = draw(st.integers(1, 24))
    w = draw(st.integers(1, 24))
    b = draw(st.integers(1, min(h, w)))
    img = draw(arrays(np.uint8, (h, w)))
    return img, b


@settings(max_examples=150, deadline=None)
@given(image_and_side())
def test_padding_properties(case):
    img, b = case
    g = grid_dims(*img.shape, b)
    padded = mirror_pad(img, g)
    assert padded.shape[0] % b == 0 and padded.shape[1] % b == 0
    np.testing.assert_array_equal(crop(padded, *img.shape), img)
    np.testing.assert_array_equal(padded, np.array(brute_pad(img.tolist(), b)))
    # conservation: block sums add up to the padded pixel total
    assert int(block_sums(padded, b).sum()) == int(padded.sum(dtype=np.int64))


def test_grid_mean_examples():
    g = grid_dims(2, 2, 2)
    assert grid_mean(np.array([[0, 0], [255, 255]], dtype=np.uint8), g, 0, 0) == 127.5
    g4 = grid_dims(4, 4, 4)
    assert grid_mean(np.arange(16, dtype=np.uint8).reshape(4, 4), g4, 0, 0) == 120 / 16


@pytest.mark.parametrize("v", [0, 1, 77, 255])
def test_grid_mean_constant(v):
    img = np.full((7, 9), v, dtype=np.uint8)
    g = grid_dims(7, 9, 3)
    padded = mirror_pad(img, g)
    assert all(grid_mean(padded, g, r, c) == v for r in range(g.rows) for c in range(g.cols))


def test_grid_mean_index_out_of_range():
    g = grid_dims(4, 4, 2)
    with pytest.raises(InvalidParameterError):
        grid_mean(np.zeros((4, 4), dtype=np.uint8), g, 2, 0)


def test_mask_grid_mean():
    g = grid_dims(2, 2, 2)
    assert mask_grid_mean(np.ones((2, 2)), g, 0, 0) == 1.0
    assert mask_grid_mean(np.zeros((2, 2)), g, 0, 0) == 0.0
    assert mask_grid_mean(np.array([[1, 0], [0, 0]]), g, 0, 0) == 0.25


def test_mask_rejects_non_binary():
    with pytest.raises(InvalidParameterError):
        mask_grid_mean(np.full((2, 2), 2), grid_dims(2, 2, 2), 0, 0)
