"""Network construction, shape walk, determinism, weight-file round trip."""

import numpy as np
import numpy.testing as npt
import pytest

from gazebot.errors import ShapeError
from gazebot.nn import LayerSpec, Network, load_weights, save_weights
from gazebot.model import build_gaze_network, gaze_layer_specs


def shape_walk_param_count(input_size: int) -> int:
    """Independent parameter-count oracle: walk the documented layer list."""
    total = 0
    c = 1
    hw = input_size
    for f in (32, 64, 128, 128):
        total += 3 * 3 * c * f + f
        c = f
        hw //= 2
    flat = hw * hw * c
    total += flat * 256 + 256
    total += 256 * 5 + 5
    return total


class TestArchitecture:
    def test_output_is_five_classes(self):
        net = build_gaze_network(seed=0, input_size=32)
        assert net.output_shape == (5,)

    def test_dense_hidden_width(self):
        specs = gaze_layer_specs()
        dense_units = [s.units for s in specs if s.kind == "Dense"]
        assert dense_units == [256, 5]

    def test_conv_filter_progression(self):
        specs = gaze_layer_specs()
        assert [s.filters for s in specs if s.kind == "Conv2D"] == [32, 64, 128, 128]

    def test_param_count_frozen(self):
        net = build_gaze_network(seed=0, input_size=128)
        assert net.param_count() == shape_walk_param_count(128)
        assert net.param_count() == 2_338_949

    def test_param_count_reduced_variant(self):
        net = build_gaze_network(seed=0, input_size=32)
        assert net.param_count() == shape_walk_param_count(32)

    def test_flatten_feeds_8192_into_dense(self):
        net = build_gaze_network(seed=0, input_size=128)
        dense = [l for l in net.layers if l.kind == "Dense"][0]
        assert dense.in_features == 128 // 16 * (128 // 16) * 128 == 8192

    def test_shape_conservation_and_rejection(self):
        net = build_gaze_network(seed=0, input_size=32)
        out = net.forward(np.zeros((2, 32, 32, 1), dtype=np.float32))
        assert out.shape == (2, 5)
        with pytest.raises(ShapeError):
            net.forward(np.zeros((1, 64, 64, 1), dtype=np.float32))
        with pytest.raises(ShapeError):
            net.forward(np.zeros((1, 32, 32, 3), dtype=np.float32))


class TestDeterminism:
    def test_identical_seed_identical_weights(self):
        a = build_gaze_network(seed=123, input_size=32)
        b = build_gaze_network(seed=123, input_size=32)
        for (_, pa), (_, pb) in zip(a.parameters(), b.parameters()):
            npt.assert_array_equal(pa.value, pb.value)

    def test_different_seed_differs(self):
        a = build_gaze_network(seed=1, input_size=32)
        b = build_gaze_network(seed=2, input_size=32)
        assert any(
            not np.array_equal(pa.value, pb.value)
            for (_, pa), (_, pb) in zip(a.parameters(), b.parameters())
        )

    def test_dropout_stream_reproducible(self):
        net = build_gaze_network(seed=5, input_size=32)
        x = np.random.default_rng(0).random((2, 32, 32, 1)).astype(np.float32)
        out1 = net.forward(x, training=True, rng=np.random.default_rng(77))
        out2 = net.forward(x, training=True, rng=np.random.default_rng(77))
        npt.assert_array_equal(out1, out2)

    def test_probabilities_valid(self):
        net = build_gaze_network(seed=9, input_size=32)
        x = np.random.default_rng(1).random((4, 32, 32, 1)).astype(np.float32)
        probs = net.forward(x)
        npt.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        assert np.all(probs >= 0)


class TestTrainingDeterminism:
    def test_seed_triple_fixes_trained_params_and_report(self):
        # (corpus seed, split seed, net seed, train seed) pin the whole
        # run: trained parameters bit-for-bit, report exactly
        from gazebot.classes import GazeClass
        from gazebot.dataset import split, synthesize_labeled_set
        from gazebot.evaluate import evaluate
        from gazebot.model import train

        def run():
            counts = {g: 8 for g in GazeClass}
            ds = synthesize_labeled_set(counts, corpus_seed=3, frame_size=16)
            train_set, val_set = split(ds, 0.3, seed=4)
            net = build_gaze_network(seed=5, input_size=16)
            train(net, train_set, epochs=2, batch=8, seed=6)
            report = evaluate(net, val_set)
            return net, report

        net_a, report_a = run()
        net_b, report_b = run()
        for (_, pa), (_, pb) in zip(net_a.parameters(), net_b.parameters()):
            npt.assert_array_equal(pa.value, pb.value)
        npt.assert_array_equal(report_a.confusion, report_b.confusion)
        assert report_a.accuracy == report_b.accuracy


class TestWeightsIO:
    def test_round_trip_bit_exact(self, tmp_path):
        net = build_gaze_network(seed=31, input_size=32)
        path = tmp_path / "net.gznn"
        save_weights(net, path)
        other = build_gaze_network(seed=0, input_size=32)
        load_weights(other, path)
        for (_, pa), (_, pb) in zip(net.parameters(), other.parameters()):
            assert pa.value.dtype == pb.value.dtype
            npt.assert_array_equal(pa.value, pb.value)

    def test_round_trip_preserves_predictions(self, tmp_path):
        net = build_gaze_network(seed=32, input_size=32)
        x = np.random.default_rng(2).random((3, 32, 32, 1)).astype(np.float32)
        before = net.forward(x)
        path = tmp_path / "net.gznn"
        save_weights(net, path)
        other = build_gaze_network(seed=0, input_size=32)
        load_weights(other, path)
        npt.assert_array_equal(other.forward(x), before)

    def test_bad_magic_rejected(self, tmp_path):
        from gazebot.errors import InputError

        path = tmp_path / "junk.gznn"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        net = build_gaze_network(seed=0, input_size=32)
        with pytest.raises(InputError):
            load_weights(net, path)

    def test_architecture_mismatch_rejected(self, tmp_path):
        path = tmp_path / "net.gznn"
        small = Network(
            [LayerSpec("Flatten"), LayerSpec("Dense", units=3), LayerSpec("Softmax")],
            input_shape=(2, 2, 1),
            seed=0,
        )
        save_weights(small, path)
        net = build_gaze_network(seed=0, input_size=32)
        with pytest.raises(ShapeError):
            load_weights(net, path)
