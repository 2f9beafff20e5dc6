import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cswatermark.image_core import (DimensionError, ImageFormatError, load_pgm, psnr,
                                    quantize, save_pgm)


def write_raw(path, header: bytes, raster: bytes):
    path.write_bytes(header + raster)
    return path


def test_load_zero_4x4(tmp_path):
    p = write_raw(tmp_path / "z.pgm", b"P5\n4 4\n255\n", bytes(16))
    img = load_pgm(p)
    assert img.shape == (4, 4)
    assert img.dtype == np.float64
    assert np.all(img == 0)


def test_load_header_with_comments(tmp_path):
    raster = bytes(range(32))
    p = write_raw(tmp_path / "c.pgm", b"P5 # made by hand\n8\n# height next\n4 255\n", raster)
    img = load_pgm(p)
    assert img.shape == (4, 8)
    np.testing.assert_array_equal(img.ravel(), np.arange(32))


def test_bundled_cameraman_is_256(camera):
    assert camera.shape == (256, 256)
    assert np.all(camera == np.round(camera))
    assert 0 <= camera.min() and camera.max() <= 255


def test_odd_sized_rejected(tmp_path):
    p = write_raw(tmp_path / "six.pgm", b"P5\n6 6\n255\n", bytes(36))
    with pytest.raises(DimensionError):
        load_pgm(p)
    assert load_pgm(p, multiple=2).shape == (6, 6)


@pytest.mark.parametrize("header, raster", [
    (b"P2\n4 4\n255\n", bytes(16)),
    (b"P5\n4 x\n255\n", bytes(16)),
    (b"P5\n4 4\n", b""),
    (b"P5\n4 4\n65535\n", bytes(32)),
    (b"P5\n4 4\n15\n", bytes(16)),
    (b"P5\n4 4\n255\n", bytes(15)),
])
def test_malformed_rejected(tmp_path, header, raster):
    p = write_raw(tmp_path / "bad.pgm", header, raster)
    with pytest.raises(ImageFormatError):
        load_pgm(p)


def test_save_saturates(tmp_path):
    p = tmp_path / "w.pgm"
    save_pgm(np.full((4, 4), 255.0), p)
    data = p.read_bytes()
    assert data.startswith(b"P5\n4 4\n255\n")
    assert data[-16:] == b"\xff" * 16


def test_save_rounding_and_clamp():
    q = quantize(np.array([[-3.2, 127.5], [0.49, 300.0]]))
    np.testing.assert_array_equal(q, [[0, 128], [0, 255]])
    assert quantize(np.array([[2.5, 3.5]])).tolist() == [[3, 4]]


def test_round_trip_exact(tmp_path, rng):
    img = rng.integers(0, 256, size=(12, 16)).astype(float)
    p = tmp_path / "r.pgm"
    save_pgm(img, p)
    np.testing.assert_array_equal(load_pgm(p), img)


def test_psnr_identity():
    a = np.arange(16.0).reshape(4, 4)
    rep = psnr(a, a)
    assert rep.mse == 0 and math.isinf(rep.psnr_db)
    assert rep.to_dict()["psnr_db"] == "inf"


def test_psnr_unit_offset():
    a = np.zeros((8, 8))
    assert psnr(a, a + 1.0).psnr_db == pytest.approx(20 * math.log10(255), abs=1e-12)
    assert psnr(a, a + 1.0).psnr_db == pytest.approx(48.13, abs=5e-3)


def test_psnr_full_scale():
    assert psnr(np.zeros((4, 4)), np.full((4, 4), 255.0)).psnr_db == pytest.approx(0.0, abs=1e-12)


def test_psnr_shape_mismatch():
    with pytest.raises(DimensionError):
        psnr(np.zeros((4, 4)), np.zeros((4, 8)))


grids = arrays(np.float64, (6, 6), elements=st.floats(-300, 300, allow_nan=False))


@settings(max_examples=60, deadline=None)
@given(grids, grids)
def test_psnr_symmetric(a, b):
    ab, ba = psnr(a, b), psnr(b, a)
    assert ab.mse == ba.mse
    assert ab.psnr_db == ba.psnr_db


@settings(max_examples=60, deadline=None)
@given(grids, grids, st.floats(0.01, 100) | st.floats(-100, -0.01))
def test_mse_scales_quadratically(a, b, s):
    base = psnr(a, b).mse
    scaled = psnr(s * a, s * b).mse
    assert scaled == pytest.approx(s * s * base, rel=1e-9, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, (4, 8), elements=st.integers(0, 255)))
def test_round_trip_property(tmp_path_factory, img):
    p = tmp_path_factory.mktemp("rt") / "x.pgm"
    save_pgm(img.astype(float), p)
    np.testing.assert_array_equal(load_pgm(p), img)
