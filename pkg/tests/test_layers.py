"""Forward kernels against loop oracles and frozen example values."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from gazebot.errors import ConfigError, InputError, ShapeError, StateError
from gazebot.nn import (
    conv2d_forward,
    cross_entropy,
    dense_forward,
    dropout,
    maxpool2x2,
    relu,
    softmax,
)

from oracles import conv2d_loop, dense_loop, maxpool_loop


class TestConv2d:
    def test_ones_kernel_3x3(self):
        x = np.arange(1, 10, dtype=np.float32).reshape(3, 3, 1)
        w = np.ones((3, 3, 1, 1), dtype=np.float32)
        b = np.zeros(1, dtype=np.float32)
        out = conv2d_forward(x, w, b)
        assert out[1, 1, 0] == 45.0  # full window
        assert out[0, 0, 0] == 12.0  # zero-padded corner: 1+2+4+5
        npt.assert_array_equal(out, conv2d_loop(x, w, b).astype(np.float32))

    def test_identity_kernel(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(5, 6, 3)).astype(np.float32)
        w = np.zeros((3, 3, 3, 3), dtype=np.float32)
        for c in range(3):
            w[1, 1, c, c] = 1.0
        out = conv2d_forward(x, w, np.zeros(3, dtype=np.float32))
        npt.assert_array_equal(out, x)

    def test_first_block_shape(self):
        x = np.zeros((128, 128, 1), dtype=np.float32)
        w = np.zeros((3, 3, 1, 32), dtype=np.float32)
        out = conv2d_forward(x, w, np.zeros(32, dtype=np.float32))
        assert out.shape == (128, 128, 32)

    def test_shape_errors(self):
        x = np.zeros((4, 4, 2), dtype=np.float32)
        with pytest.raises(ShapeError):
            conv2d_forward(x, np.zeros((3, 3, 3, 1), dtype=np.float32), np.zeros(1, np.float32))
        with pytest.raises(ShapeError):
            conv2d_forward(x, np.zeros((5, 5, 2, 1), dtype=np.float32), np.zeros(1, np.float32))
        with pytest.raises(ShapeError):
            conv2d_forward(x, np.zeros((3, 3, 2, 4), dtype=np.float32), np.zeros(2, np.float32))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_loop_oracle(self, seed):
        rng = np.random.default_rng(seed)
        h, w_ = rng.integers(8, 17, size=2)
        c = int(rng.integers(1, 5))
        f = int(rng.integers(1, 5))
        x = rng.normal(size=(h, w_, c)).astype(np.float32)
        w = rng.normal(size=(3, 3, c, f)).astype(np.float32)
        b = rng.normal(size=f).astype(np.float32)
        npt.assert_array_equal(conv2d_forward(x, w, b), conv2d_loop(x, w, b).astype(np.float32))


class TestRelu:
    def test_definition(self):
        npt.assert_array_equal(
            relu(np.array([-1.0, 0.0, 2.0], dtype=np.float32)),
            np.array([0.0, 0.0, 2.0], dtype=np.float32),
        )

    def test_all_negative(self):
        x = -np.abs(np.random.default_rng(0).normal(size=(4, 4))) - 0.1
        npt.assert_array_equal(relu(x), np.zeros_like(x))

    def test_identity_on_nonnegative(self):
        x = np.abs(np.random.default_rng(1).normal(size=(3, 5)))
        npt.assert_array_equal(relu(x), x)


class TestMaxpool:
    def test_four_values(self):
        x = np.array([[1, 2], [3, 4]], dtype=np.float32).reshape(2, 2, 1)
        npt.assert_array_equal(maxpool2x2(x), np.array([[[4.0]]], dtype=np.float32))

    def test_constant(self):
        x = np.full((6, 8, 2), 3.5, dtype=np.float32)
        out = maxpool2x2(x)
        assert out.shape == (3, 4, 2)
        npt.assert_array_equal(out, np.full((3, 4, 2), 3.5, dtype=np.float32))

    def test_block_shape(self):
        assert maxpool2x2(np.zeros((128, 128, 32), dtype=np.float32)).shape == (64, 64, 32)

    def test_odd_extent_rejected(self):
        with pytest.raises(ShapeError):
            maxpool2x2(np.zeros((5, 4, 1), dtype=np.float32))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_loop_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        h, w = 2 * rng.integers(4, 9, size=2)
        c = int(rng.integers(1, 5))
        x = rng.normal(size=(h, w, c)).astype(np.float32)
        npt.assert_array_equal(maxpool2x2(x), maxpool_loop(x))


class TestDropout:
    def test_inference_identity(self):
        x = np.random.default_rng(2).normal(size=(7, 7)).astype(np.float32)
        assert dropout(x, 0.4, training=False) is x

    def test_deterministic_mask(self):
        x = np.ones((50, 50), dtype=np.float32)
        out = dropout(x, 0.4, training=True, rng=np.random.default_rng(42))
        # recompute the mask from an identically seeded generator
        keep = np.random.default_rng(42).random(x.shape) >= 0.4
        expect = (keep.astype(np.float32) / np.float32(0.6)).astype(np.float32)
        npt.assert_array_equal(out, expect)
        survivors = out[out != 0]
        npt.assert_allclose(survivors, 1.0 / 0.6, rtol=1e-6)

    def test_monte_carlo_mean(self):
        # E[output] == x within 5% over 1e4 trials
        x = np.full(10_000, 2.0, dtype=np.float32)
        rng = np.random.default_rng(3)
        out = dropout(x, 0.4, training=True, rng=rng)
        assert abs(out.mean() - 2.0) / 2.0 < 0.05

    def test_rate_validation(self):
        x = np.ones(3, dtype=np.float32)
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ConfigError):
                dropout(x, bad, training=True, rng=np.random.default_rng(0))

    def test_training_requires_rng(self):
        with pytest.raises(StateError):
            dropout(np.ones(3, dtype=np.float32), 0.4, training=True)


class TestDense:
    def test_identity(self):
        x = np.array([3.0, -1.0], dtype=np.float32)
        npt.assert_array_equal(
            dense_forward(x, np.eye(2, dtype=np.float32), np.zeros(2, np.float32)), x
        )

    def test_hand_case(self):
        x = np.array([1.0, 2.0], dtype=np.float32)
        w = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=np.float32)
        b = np.array([1.0, 1.0], dtype=np.float32)
        npt.assert_array_equal(dense_forward(x, w, b), np.array([2.0, 3.0], np.float32))

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            dense_forward(np.zeros(3, np.float32), np.zeros((4, 2), np.float32), np.zeros(2, np.float32))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_loop_oracle(self, seed):
        rng = np.random.default_rng(200 + seed)
        n = int(rng.integers(1, 40))
        m = int(rng.integers(1, 20))
        x = rng.normal(size=n).astype(np.float32)
        w = rng.normal(size=(n, m)).astype(np.float32)
        b = rng.normal(size=m).astype(np.float32)
        npt.assert_array_equal(dense_forward(x, w, b), dense_loop(x, w, b).astype(np.float32))


class TestSoftmax:
    def test_uniform(self):
        npt.assert_allclose(softmax(np.zeros(5)), np.full(5, 0.2), atol=1e-12)

    def test_closed_form(self):
        out = softmax(np.array([math.log(2.0), 0.0]))
        npt.assert_allclose(out, [2.0 / 3.0, 1.0 / 3.0], atol=1e-9)

    def test_shift_invariance(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=9)
        npt.assert_allclose(softmax(x), softmax(x + 123.456), atol=1e-12)

    def test_sums_to_one_and_argmax(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            x = rng.normal(scale=50, size=rng.integers(1, 12))
            p = softmax(x)
            assert abs(p.sum() - 1.0) < 1e-6
            assert np.argmax(p) == np.argmax(x)

    def test_overflow_safe(self):
        p = softmax(np.array([1e30, 1e30, -1e30]))
        assert np.all(np.isfinite(p))
        npt.assert_allclose(p[:2], 0.5, atol=1e-12)


class TestCrossEntropy:
    def test_perfect(self):
        assert cross_entropy(np.array([0.0, 1.0, 0.0]), np.array([0.0, 1.0, 0.0])) == 0.0

    def test_half(self):
        loss = cross_entropy(np.array([0.5, 0.5]), np.array([1.0, 0.0]))
        assert abs(loss - math.log(2.0)) < 1e-12

    def test_clamp(self):
        loss = cross_entropy(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        assert abs(loss - (-math.log(1e-12))) < 1e-9
        assert loss < 27.64

    def test_rejects_non_one_hot(self):
        with pytest.raises(InputError):
            cross_entropy(np.array([0.5, 0.5]), np.array([0.5, 0.5]))
        with pytest.raises(InputError):
            cross_entropy(np.array([0.5, 0.5]), np.array([1.0, 1.0]))
