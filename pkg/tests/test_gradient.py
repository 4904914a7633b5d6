import numpy as np
import pytest
from hypothesis import given, strategies as st

from gdtext.errors import InvalidParameterError, TooShortError
from gdtext.gradient import (DEFAULT_WINDOW, SOBEL_X, SOBEL_Y, binarize_gd, gd_histogram,
                             gradient_difference, horizontal_gradient, otsu_bin,
                             otsu_threshold_value, sobel_edges, window_minmax)

from oracles import brute_window_minmax, direct_correlate3, exhaustive_otsu


def test_sobel_constant_is_zero():
    assert np.all(sobel_edges(np.full((9, 7), 0.6)) == 0.0)


def test_sobel_vertical_step():
    img = np.zeros((8, 10))
    img[:, 5:] = 1.0
    e = sobel_edges(img)
    # hand convolution at (y=4, x=4): right column sums 1 + 2 + 1, left column 0
    assert e[4, 4] == pytest.approx(4.0)
    assert e[4, 5] == pytest.approx(4.0)
    assert np.all(e[:, :3] == 0.0) and np.all(e[:, 7:] == 0.0)


def test_sobel_single_pixel_matches_direct_convolution():
    img = np.zeros((5, 5))
    img[2, 2] = 1.0
    gx = direct_correlate3(img, SOBEL_X)
    gy = direct_correlate3(img, SOBEL_Y)
    np.testing.assert_allclose(sobel_edges(img), np.hypot(gx, gy), atol=1e-15)
    # the four edge-adjacent neighbors see a single weight of 2
    assert sobel_edges(img)[2, 1] == pytest.approx(2.0)


def test_sobel_random_matches_direct_convolution(rng):
    img = rng.random((7, 9))
    expected = np.hypot(direct_correlate3(img, SOBEL_X), direct_correlate3(img, SOBEL_Y))
    np.testing.assert_allclose(sobel_edges(img), expected, atol=1e-12)


def test_horizontal_gradient_row():
    g = horizontal_gradient(np.array([[0.0, 1.0, 3.0, 3.0]]))
    np.testing.assert_array_equal(g, [[1.0, 2.0, 0.0, 0.0]])


def test_horizontal_gradient_constant_and_narrow():
    assert np.all(horizontal_gradient(np.full((3, 4), 2.0)) == 0.0)
    with pytest.raises(TooShortError):
        horizontal_gradient(np.zeros((4, 1)))


def test_gd_hand_example():
    gd = gradient_difference(np.array([[-2.0, 0.0, 5.0, 1.0, -1.0]]), 3)
    np.testing.assert_array_equal(gd, [[2.0, 7.0, 5.0, 6.0, 2.0]])


def test_gd_constant_is_zero():
    assert np.all(gradient_difference(np.full((4, 20), -1.5), 11) == 0.0)


def test_default_window_is_eleven():
    assert DEFAULT_WINDOW == 11


@pytest.mark.parametrize("n", [0, 2, 4, -3, 13])
def test_gd_rejects_bad_window(n):
    with pytest.raises(InvalidParameterError):
        gradient_difference(np.zeros((2, 12)), n)


@pytest.mark.parametrize("n", [1, 3, 5, 11])
@pytest.mark.parametrize("shape", [(1, 11), (5, 17), (13, 40)])
def test_window_minmax_matches_brute_force(rng, n, shape):
    g = rng.normal(size=shape)
    lo, hi = window_minmax(g, n)
    blo, bhi = brute_window_minmax(g, n)
    np.testing.assert_array_equal(lo, blo)
    np.testing.assert_array_equal(hi, bhi)


def test_window_minmax_with_ties(rng):
    g = rng.integers(-2, 3, size=(6, 30)).astype(float)
    for n in (3, 7, 11):
        lo, hi = window_minmax(g, n)
        blo, bhi = brute_window_minmax(g, n)
        np.testing.assert_array_equal(lo, blo)
        np.testing.assert_array_equal(hi, bhi)


@given(st.integers(0, 2 ** 32 - 1), st.integers(-1000, 1000), st.sampled_from([3, 5, 11]))
def test_gd_shift_invariance(seed, shift, n):
    # integer-valued gradients keep every addition exact in float64
    g = np.random.default_rng(seed).integers(-500, 500, size=(6, 25)).astype(float)
    np.testing.assert_array_equal(gradient_difference(g + shift, n), gradient_difference(g, n))


@given(st.integers(0, 2 ** 32 - 1), st.floats(0, 100), st.sampled_from([3, 5, 11]))
def test_gd_scale_equivariance(seed, s, n):
    g = np.random.default_rng(seed).normal(size=(6, 25))
    np.testing.assert_allclose(gradient_difference(s * g, n), s * gradient_difference(g, n),
                               rtol=0, atol=1e-12 * max(1.0, s))


def test_gd_monotone_in_window(rng):
    g = rng.normal(size=(10, 40))
    prev = gradient_difference(g, 1)
    assert np.all(prev == 0.0)
    for n in (3, 5, 11, 21):
        cur = gradient_difference(g, n)
        assert np.all(cur >= prev)
        prev = cur


def test_gd_non_negative(rng):
    assert np.all(gradient_difference(rng.normal(size=(8, 30)), 11) >= 0)


def test_binarize_all_zero():
    assert not binarize_gd(np.zeros((5, 5))).any()


def test_binarize_all_equal_nonzero():
    assert not binarize_gd(np.full((5, 5), 3.0)).any()


def test_binarize_bimodal():
    gd = np.zeros((6, 8))
    gd[:, 4:] = 10.0
    mask = binarize_gd(gd)
    np.testing.assert_array_equal(mask, gd == 10.0)


@pytest.mark.parametrize("seed", range(10))
def test_otsu_matches_exhaustive(seed):
    rng = np.random.default_rng(seed)
    hist = rng.integers(0, 50, size=256)
    hist[rng.random(256) < 0.3] = 0
    assert otsu_bin(hist) == exhaustive_otsu(hist)


def test_otsu_tie_goes_low():
    hist = np.zeros(256, dtype=int)
    hist[0] = 5
    hist[255] = 5
    assert otsu_bin(hist) == 0


def test_binarize_affine_rescale_invariant(rng):
    gd = np.abs(rng.normal(size=(20, 30))) + (rng.random((20, 30)) < 0.2) * 5.0
    base = binarize_gd(gd)
    np.testing.assert_array_equal(binarize_gd(gd * 4.0), base)


def test_threshold_value_splits_mask(rng):
    gd = np.abs(rng.normal(size=(20, 30))) + (rng.random((20, 30)) < 0.2) * 5.0
    t = otsu_threshold_value(gd)
    mask = binarize_gd(gd)
    assert np.all(gd[mask] >= t - 1e-12) and np.all(gd[~mask] < t + 1e-12)


def test_histogram_spans_zero_to_max():
    idx, hist = gd_histogram(np.array([[0.0, 1.0, 2.0]]))
    assert hist.sum() == 3 and idx[0, 0] == 0 and idx[0, 2] == 255
