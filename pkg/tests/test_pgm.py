import numpy as np
import pytest

from dppix import InvalidParameterError
from dppix.pgm import decode_pgm, encode_pgm, read_image, read_mask, write_image

from conftest import random_image


def test_roundtrip_bit_exact(tmp_path, rng):
    img = random_image(rng, (13, 29))
    path = tmp_path / "a.pgm"
    write_image(path, img)
    assert path.read_bytes() == b"P5\n29 13\n255\n" + img.tobytes()
    np.testing.assert_array_equal(read_image(path), img)


def test_header_with_comments():
    raster = bytes(range(6))
    img = decode_pgm(b"P5\n# made by hand\n3 2\n# depth\n255\n" + raster)
    np.testing.assert_array_equal(img, [[0, 1, 2], [3, 4, 5]])


def test_raster_starting_with_whitespace_byte():
    # 0x0a / 0x20 pixel values right after the header must not be swallowed
    raster = bytes([10, 32, 9, 13])
    np.testing.assert_array_equal(decode_pgm(b"P5 2 2 255\n" + raster), [[10, 32], [9, 13]])


@pytest.mark.parametrize(
    "data",
    [b"P2\n2 2\n255\n0 0 0 0", b"P5\n2 2\n65535\n" + bytes(8), b"P5\n2 2\n255\n\x00", b"P5\n2"],
)
def test_rejects(data):
    with pytest.raises(InvalidParameterError):
        decode_pgm(data)


def test_mask_threshold(tmp_path):
    path = tmp_path / "m.pgm"
    path.write_bytes(encode_pgm(np.array([[0, 127], [128, 255]], dtype=np.uint8)))
    np.testing.assert_array_equal(read_mask(path), [[0, 0], [1, 1]])


def test_png_convenience(tmp_path, rng):
    pytest.importorskip("PIL")
    img = random_image(rng, (9, 11))
    write_image(tmp_path / "a.png", img)
    np.testing.assert_array_equal(read_image(tmp_path / "a.png"), img)
