"""CLI surface: subcommands produce their documented artifacts."""

import json

import pytest

from gazebot.cli import main


@pytest.fixture(scope="module")
def tiny_corpus(tmp_path_factory):
    data = tmp_path_factory.mktemp("data")
    assert main(["gen-data", "--out", str(data), "--per-class", "12", "--seed", "5"]) == 0
    return data


class TestGenData:
    def test_manifest_and_layout(self, tiny_corpus):
        manifest = json.loads((tiny_corpus / "manifest.json").read_text())
        assert manifest["total"] == 60
        assert manifest["config"]["corpus_seed"] == 5
        assert len(list((tiny_corpus / "Down").glob("*.png"))) == 12

    def test_default_counts_manifest_total(self, tmp_path):
        # counts alone; writing 13k images is the slow path's job
        from gazebot.classes import DEFAULT_CLASS_COUNTS

        assert sum(DEFAULT_CLASS_COUNTS.values()) == 13233


@pytest.fixture(scope="module")
def trained(tiny_corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("train")
    code = main(
        [
            "train",
            "--data", str(tiny_corpus),
            "--out", str(out),
            "--preset", "reduced",
            "--epochs", "2",
            "--seed", "7",
        ]
    )
    assert code == 0
    return out


class TestTrainEvalBench:

    def test_train_artifacts(self, trained):
        assert (trained / "weights.gznn").exists()
        assert (trained / "loss_history.tsv").exists()
        assert (trained / "loss_curve.png").exists()
        assert (trained / "confusion.png").exists()
        summary = json.loads((trained / "train.json").read_text())
        assert summary["config"]["frame_size"] == 32
        assert len(summary["loss_history"]) == 2
        assert (trained / "checkpoints" / "epoch_002.gznn").exists()

    def test_eval_from_weights(self, tiny_corpus, trained, tmp_path):
        out = tmp_path / "eval"
        code = main(
            [
                "eval",
                "--data", str(tiny_corpus),
                "--weights", str(trained / "weights.gznn"),
                "--out", str(out),
                "--preset", "reduced",
                "--seed", "7",
            ]
        )
        assert code == 0
        payload = json.loads((out / "eval.json").read_text())
        assert "report" in payload and "config" in payload
        assert (out / "confusion.png").exists()

    def test_bench_small(self, trained, tmp_path):
        out = tmp_path / "bench"
        code = main(
            [
                "bench",
                "--weights", str(trained / "weights.gznn"),
                "--frames", "20",
                "--out", str(out),
                "--preset", "reduced",
            ]
        )
        assert code == 0
        payload = json.loads((out / "bench.json").read_text())
        assert payload["mean_fps"] > 0
        assert abs(payload["layer_sum_s"] - payload["total_s"]) <= 0.05 * payload["total_s"]
        assert "15-16" in payload["reference"]
        assert (out / "layer_times.png").exists()

    def test_missing_weights_diagnostic(self, tiny_corpus, tmp_path, capsys):
        code = main(
            [
                "eval",
                "--data", str(tiny_corpus),
                "--weights", str(tmp_path / "nope.gznn"),
                "--out", str(tmp_path / "o"),
            ]
        )
        assert code == 2
        err = capsys.readouterr().err.strip()
        diag = json.loads(err.splitlines()[-1])
        assert diag["command"] == "eval"
        assert "nope.gznn" in diag["error"]


class TestRunSim:
    def test_scenario_outputs(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(
            json.dumps(
                {
                    "duration_ms": 6000,
                    "gaze_script": [["Up", 35], ["Straight", 40]],
                }
            )
        )
        out = tmp_path / "sim"
        assert main(["run-sim", "--scenario", str(scenario), "--out", str(out)]) == 0
        assert (out / "trajectory.tsv").read_text().startswith("t_ms\tx\ty")
        assert (out / "commands.tsv").exists()
        assert (out / "trajectory.png").exists()
        assert (out / "latency_hist.png").exists()
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["config"]["tick_ms"] == 20.0
        assert any(stage == "Start" for _, stage in metrics["emissions"])

    def test_malformed_scenario_diagnostic(self, tmp_path, capsys):
        scenario = tmp_path / "bad.json"
        scenario.write_text("{ nope }")
        code = main(["run-sim", "--scenario", str(scenario), "--out", str(tmp_path / "o")])
        assert code == 2
        diag = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert "bad.json:1" in diag["error"]


class TestConfigPrecedence:
    def test_flags_beat_file(self, tmp_path, tiny_corpus):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"epochs": 9, "frame_size": 32}))
        out = tmp_path / "t"
        code = main(
            [
                "train",
                "--data", str(tiny_corpus),
                "--config", str(cfg),
                "--epochs", "1",
                "--out", str(out),
                "--no-figures",
            ]
        )
        assert code == 0
        summary = json.loads((out / "train.json").read_text())
        assert summary["config"]["epochs"] == 1
        assert summary["config"]["frame_size"] == 32

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"warp_speed": 9}))
        code = main(["gen-data", "--config", str(cfg), "--out", str(tmp_path / "d")])
        assert code == 2
        assert "warp_speed" in capsys.readouterr().err
