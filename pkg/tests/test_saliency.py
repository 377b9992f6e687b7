import math

import numpy as np
import pytest

from sonivis.saliency import (
    FP_SCALE, OPERATIONAL_PRESET, STRICT_PRESET, FilterConfig, GrayImage,
    build_weight_table, filter_states, salient_mask,
)

OFFSETS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


def brute_mask_one_iter(pixels, thresh):
    """Straight-line per-pixel evaluation of the single-iteration salience rule."""
    h, w = pixels.shape
    limit = math.floor(thresh * 9 * 255)
    out = np.zeros((h, w), bool)
    for y in range(h):
        for x in range(w):
            total = 0
            for dy, dx in OFFSETS:
                yy = min(max(y + dy, 0), h - 1)
                xx = min(max(x + dx, 0), w - 1)
                total += 255 - abs(int(pixels[y, x]) - int(pixels[yy, xx]))
            out[y, x] = (255 + total) <= limit
    return out


def brute_states(pixels, iterations, thresh):
    """Straight-line per-pixel fixed-point iteration, independent of the kernels."""
    h, w = pixels.shape
    thresh_num = math.floor(thresh * 9 * 255 * FP_SCALE)
    states = [[FP_SCALE] * w for _ in range(h)]
    for _ in range(iterations):
        nxt = [[0] * w for _ in range(h)]
        for y in range(h):
            for x in range(w):
                t = 255 * states[y][x]
                for dy, dx in OFFSETS:
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    wgt = 255 - abs(int(pixels[y, x]) - int(pixels[yy, xx]))
                    t += wgt * states[yy][xx]
                nxt[y][x] = 0 if t <= thresh_num else t // 2295
        states = nxt
    return np.array(states, np.int64)


def test_weight_table_values():
    table = build_weight_table()
    assert table[0] == 255
    assert table[255] == 0
    assert table[51] == 204
    assert np.all(np.diff(table) <= 0)
    assert np.array_equal(table, 255 - np.arange(256))


def test_uniform_image_keeps_all_states_at_one():
    img = GrayImage(np.full((3, 3), 128, np.uint8))
    states = filter_states(img, STRICT_PRESET)
    assert np.all(states.states_fp == FP_SCALE)
    assert salient_mask(img, STRICT_PRESET).count == 0


def test_center_dot_forced_to_zero():
    pixels = np.full((3, 3), 255, np.uint8)
    pixels[1, 1] = 0
    states = filter_states(GrayImage(pixels), STRICT_PRESET)
    assert states.states_fp[1, 1] == 0
    border = states.states_fp.copy()
    border[1, 1] = 1  # ignore the center
    assert np.all(border > 0)


def test_single_dot_in_5x5_exactly_one_salient():
    pixels = np.full((5, 5), 255, np.uint8)
    pixels[2, 2] = 0
    mask = salient_mask(GrayImage(pixels), STRICT_PRESET)
    assert mask.count == 1
    assert mask.flags[2, 2]


def test_checkerboard_no_salient():
    pixels = np.zeros((4, 4), np.uint8)
    pixels[::2, 1::2] = 255
    pixels[1::2, ::2] = 255
    assert salient_mask(GrayImage(pixels), STRICT_PRESET).count == 0


def test_multi_iteration_matches_straight_line_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        pixels = rng.integers(0, 256, (8, 8), dtype=np.uint8)
        for iters in (1, 2, 3):
            got = filter_states(GrayImage(pixels), FilterConfig(thresh=0.3, iterations=iters))
            want = brute_states(pixels, iters, 0.3)
            assert np.array_equal(got.states_fp, want)


def test_fast_path_matches_filter_states_one_iteration():
    rng = np.random.default_rng(11)
    for thresh in (0.112, 0.3, 0.7):
        cfg = FilterConfig(thresh=thresh, iterations=1)
        for _ in range(20):
            pixels = rng.integers(0, 256, (8, 8), dtype=np.uint8)
            fast = salient_mask(GrayImage(pixels), cfg)
            states = filter_states(GrayImage(pixels), cfg)
            assert np.array_equal(fast.flags, states.states_fp == 0)


def test_mask_matches_brute_force_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        pixels = rng.integers(0, 256, (8, 8), dtype=np.uint8)
        got = salient_mask(GrayImage(pixels), STRICT_PRESET)
        assert np.array_equal(got.flags, brute_mask_one_iter(pixels, 0.112))


def test_states_stay_in_unit_interval():
    rng = np.random.default_rng(5)
    for iters in (1, 2, 3, 4):
        pixels = rng.integers(0, 256, (10, 10), dtype=np.uint8)
        states = filter_states(GrayImage(pixels), FilterConfig(thresh=0.2, iterations=iters))
        assert states.states_fp.min() >= 0
        assert states.states_fp.max() <= FP_SCALE


def test_center_state_monotone_in_contrast():
    prev = None
    for v in range(255, -1, -1):
        pixels = np.full((5, 5), 255, np.uint8)
        pixels[2, 2] = v
        s = filter_states(GrayImage(pixels), STRICT_PRESET).states_fp[2, 2]
        if prev is not None:
            assert s <= prev
        prev = s


def test_inversion_invariance():
    rng = np.random.default_rng(9)
    for _ in range(20):
        pixels = rng.integers(0, 256, (8, 8), dtype=np.uint8)
        a = salient_mask(GrayImage(pixels), OPERATIONAL_PRESET)
        b = salient_mask(GrayImage(255 - pixels), OPERATIONAL_PRESET)
        assert np.array_equal(a.flags, b.flags)


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 4), np.uint8))
    with pytest.raises(ValueError):
        GrayImage(np.array([[300, 0]], np.int32))
    with pytest.raises(ValueError):
        FilterConfig(thresh=0.0)
    with pytest.raises(ValueError):
        FilterConfig(iterations=0)
