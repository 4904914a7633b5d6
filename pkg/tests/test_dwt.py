import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from gdtext.dwt import (DetailBands, WaveletPyramid, decompose, dwt1d, idwt1d,
                        make_filter_bank, reconstruct, subband_shapes, threshold_details)
from gdtext.errors import InvalidParameterError, LevelOverflowError, ShapeError, TooShortError

SQRT2 = math.sqrt(2.0)


@pytest.mark.parametrize("order", range(1, 11))
def test_filter_bank_invariants(order):
    bank = make_filter_bank(order)
    h, g = bank.lowpass_analysis, bank.highpass_analysis
    assert len(h) == len(g) == len(bank.lowpass_synthesis) == len(bank.highpass_synthesis) == 2 * order
    assert abs(h.sum() - SQRT2) < 1e-10
    assert abs(np.dot(h, h) - 1.0) < 1e-10
    for k in range(1, order):
        assert abs(np.dot(h[:-2 * k], h[2 * k:])) < 1e-10
    n = np.arange(len(h))
    np.testing.assert_allclose(g, (-1.0) ** n * h[::-1], atol=1e-10)
    # highpass is orthogonal to every even shift of the lowpass
    for k in range(-(order - 1), order):
        shifted = np.roll(np.pad(h, 2 * order), 2 * k)[2 * order:4 * order]
        assert abs(np.dot(g, shifted)) < 1e-10


def test_haar_bank_is_forced():
    np.testing.assert_allclose(make_filter_bank(1).lowpass_analysis, [1 / SQRT2, 1 / SQRT2], atol=1e-15)


def test_db2_matches_closed_form():
    s3 = math.sqrt(3.0)
    closed = np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * SQRT2)
    h = make_filter_bank(2).lowpass_analysis
    np.testing.assert_allclose(h, closed, atol=1e-12)
    assert abs(closed.sum() - SQRT2) < 1e-12
    assert abs(closed[0] * closed[2] + closed[1] * closed[3]) < 1e-12


@pytest.mark.parametrize("order", [0, 11, -1, 2.5])
def test_filter_bank_rejects_bad_order(order):
    with pytest.raises(InvalidParameterError):
        make_filter_bank(order)


def test_dwt1d_constant_haar():
    c = 0.7
    a, d = dwt1d([c, c, c, c], make_filter_bank(1))
    np.testing.assert_allclose(a, [c * SQRT2, c * SQRT2])
    np.testing.assert_allclose(d, [0.0, 0.0], atol=1e-15)


def test_dwt1d_impulse_haar():
    # a[k] = (x[2k] + x[2k+1]) / sqrt2, d[k] = (x[2k] - x[2k+1]) / sqrt2
    a, d = dwt1d([1.0, 0.0, 0.0, 0.0], make_filter_bank(1))
    np.testing.assert_allclose(a, [1 / SQRT2, 0.0], atol=1e-15)
    np.testing.assert_allclose(d, [1 / SQRT2, 0.0], atol=1e-15)


def test_dwt1d_too_short():
    with pytest.raises(TooShortError):
        dwt1d([1.0], make_filter_bank(1))


@pytest.mark.parametrize("n", [2, 3, 5, 8, 13])
def test_dwt1d_output_length(n):
    a, d = dwt1d(np.arange(n, dtype=float), make_filter_bank(3))
    assert len(a) == len(d) == math.ceil(n / 2)


def test_idwt1d_constant_haar():
    c = 0.3
    out = idwt1d([c * SQRT2, c * SQRT2], [0.0, 0.0], make_filter_bank(1), 4)
    np.testing.assert_allclose(out, [c] * 4)


@pytest.mark.parametrize("order", [1, 2, 4, 7, 10])
@pytest.mark.parametrize("n", [16, 15, 2, 3])
def test_idwt1d_round_trip(rng, order, n):
    bank = make_filter_bank(order)
    x = rng.normal(size=n)
    a, d = dwt1d(x, bank)
    assert np.max(np.abs(idwt1d(a, d, bank, n) - x)) < 1e-8


def test_idwt1d_shape_errors():
    bank = make_filter_bank(1)
    with pytest.raises(ShapeError):
        idwt1d([1.0, 2.0, 3.0], [1.0, 2.0], bank, 6)
    with pytest.raises(ShapeError):
        idwt1d([1.0, 2.0], [1.0, 2.0], bank, 7)


def test_decompose_constant_image_has_no_detail():
    for order in (1, 2, 4, 6):
        pyr = decompose(np.full((16, 24), 0.4), make_filter_bank(order), 1)
        for band in pyr.details[0]:
            assert np.max(np.abs(band)) < 1e-12


def test_decompose_haar_ll_is_scaled_block_average(rng):
    img = rng.random((8, 8))
    pyr = decompose(img, make_filter_bank(1), 1)
    block_avg = img.reshape(4, 2, 4, 2).mean(axis=(1, 3))
    np.testing.assert_allclose(pyr.approx, 2 * block_avg, atol=1e-14)


def test_decompose_haar_detail_orientation():
    # rows alternate 0/1: variation along y only -> horizontal detail carries it
    img = np.zeros((8, 8))
    img[1::2] = 1.0
    pyr = decompose(img, make_filter_bank(1), 1)
    h, v, d = pyr.details[0]
    assert np.abs(h).max() > 0.5
    assert np.abs(v).max() < 1e-14 and np.abs(d).max() < 1e-14


def test_decompose_level_overflow():
    with pytest.raises(LevelOverflowError):
        decompose(np.zeros((4, 4)), make_filter_bank(1), 3)


@pytest.mark.parametrize("shape,levels", [((17, 31), 3), ((64, 64), 2), ((33, 20), 2)])
def test_pyramid_shapes_follow_ceil_recurrence(shape, levels):
    pyr = decompose(np.zeros(shape), make_filter_bank(2), levels)
    expected = subband_shapes(shape[0], shape[1], levels)
    assert pyr.levels == len(pyr.details) == levels
    for level, bands in enumerate(pyr.details, start=1):
        assert all(b.shape == expected[level] for b in bands)
    assert pyr.approx.shape == expected[-1]


def test_threshold_identity_at_full_keep(rng):
    pyr = decompose(rng.random((32, 32)), make_filter_bank(4), 2)
    out = threshold_details(pyr, 1.0)
    for before, after in zip(pyr.details, out.details):
        for b, a in zip(before, after):
            np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(out.approx, pyr.approx)


def test_threshold_hand_example():
    bands = DetailBands(np.array([[4.0]]), np.array([[-3.0]]), np.array([[2.0, -1.0]]))
    pyr = WaveletPyramid(approx=np.array([[9.0]]), details=(bands,))
    out = threshold_details(pyr, 0.5)
    pooled = np.concatenate([b.ravel() for b in out.details[0]])
    np.testing.assert_array_equal(pooled, [4.0, -3.0, 0.0, 0.0])
    assert out.approx[0, 0] == 9.0


@pytest.mark.parametrize("ratio", [0.0, -0.1, 1.5])
def test_threshold_rejects_bad_ratio(rng, ratio):
    pyr = decompose(rng.random((8, 8)), make_filter_bank(1), 1)
    with pytest.raises(InvalidParameterError):
        threshold_details(pyr, ratio)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.05, 0.2, 0.5, 0.9]))
def test_threshold_is_idempotent(seed, ratio):
    img = np.random.default_rng(seed).random((24, 20))
    once = threshold_details(decompose(img, make_filter_bank(2), 2), ratio)
    twice = threshold_details(once, ratio)
    for a, b in zip(once.details, twice.details):
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)


def test_threshold_keeps_requested_fraction(rng):
    pyr = decompose(rng.random((64, 64)), make_filter_bank(4), 2)
    out = threshold_details(pyr, 0.2)
    for bands in out.details:
        n = sum(b.size for b in bands)
        kept = sum(np.count_nonzero(b) for b in bands)
        assert kept == math.ceil(0.2 * n)


def test_reconstruct_round_trip_db4(rng):
    img = rng.random((64, 64))
    bank = make_filter_bank(4)
    out = reconstruct(decompose(img, bank, 2), bank, 64, 64)
    assert np.max(np.abs(out - img)) < 1e-6


def test_reconstruct_constant():
    bank = make_filter_bank(3)
    img = np.full((20, 30), 0.25)
    out = reconstruct(threshold_details(decompose(img, bank, 2), 0.2), bank, 30, 20)
    np.testing.assert_allclose(out, 0.25, atol=1e-12)


def test_reconstruct_shape_mismatch(rng):
    bank = make_filter_bank(2)
    pyr = decompose(rng.random((64, 64)), bank, 2)
    with pytest.raises(ShapeError):
        reconstruct(pyr, bank, 65, 64)


def test_reconstruct_clamps(rng):
    bank = make_filter_bank(2)
    img = rng.random((16, 16))
    pyr = decompose(img * 3 - 1, bank, 1)
    out = reconstruct(pyr, bank, 16, 16)
    assert out.min() >= 0.0 and out.max() <= 1.0
    raw = reconstruct(pyr, bank, 16, 16, clamp=False)
    np.testing.assert_allclose(raw, img * 3 - 1, atol=1e-10)


@given(
    arrays(np.float64, st.tuples(st.integers(2, 40), st.integers(2, 40)),
           elements=st.floats(0, 1, allow_nan=False)),
    st.integers(1, 4),
)
def test_round_trip_and_energy_property(img, order):
    levels = max(1, min(3, int(math.log2(min(img.shape)))))
    bank = make_filter_bank(order)
    pyr = decompose(img, bank, levels)
    assert abs(pyr.coefficient_energy() - np.sum(img ** 2)) <= 1e-6 * max(np.sum(img ** 2), 1e-12)
    out = reconstruct(pyr, bank, img.shape[1], img.shape[0], clamp=False)
    assert np.max(np.abs(out - img)) < 1e-6


def test_linearity(rng):
    bank = make_filter_bank(4)
    x, y = rng.random((30, 27)), rng.random((30, 27))
    a, b = 1.7, -0.6
    lhs = decompose(a * x + b * y, bank, 2)
    px, py = decompose(x, bank, 2), decompose(y, bank, 2)
    np.testing.assert_allclose(lhs.approx, a * px.approx + b * py.approx, atol=1e-8)
    for l1, l2, l3 in zip(lhs.details, px.details, py.details):
        for c1, c2, c3 in zip(l1, l2, l3):
            np.testing.assert_allclose(c1, a * c2 + b * c3, atol=1e-8)
