"""Command-line entry point tying the whole stack together.

Subcommands: gen-data, train, eval, bench, run-sim, serve. Config
precedence is flags > --config file > defaults. Every failure exits
nonzero with one machine-parsable JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from gazebot import __version__
from gazebot.classes import DEFAULT_CLASS_COUNTS, GazeClass
from gazebot.config import REDUCED_PRESET, RunConfig
from gazebot.errors import GazebotError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazebot",
        description="gaze-controlled bot stack: classifier, relay, simulator",
    )
    parser.add_argument("--version", action="version", version=f"gazebot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON RunConfig file")
        p.add_argument("--seed", type=int, help="base seed (derives all five seeds)")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument(
            "--no-figures", action="store_true", help="skip PNG figure rendering"
        )
        p.add_argument(
            "--preset",
            choices=["reduced"],
            help="reduced = 2000 images, 32px frames, 5 epochs",
        )

    p = sub.add_parser("gen-data", help="write a synthetic labeled corpus")
    common(p)
    p.add_argument("--per-class", type=int, help="uniform per-class count override")

    p = sub.add_parser("train", help="train the gaze network on a corpus")
    common(p)
    p.add_argument("--data", type=Path, required=True, help="corpus directory")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch", type=int)

    p = sub.add_parser("eval", help="evaluate saved weights on the validation split")
    common(p)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--weights", type=Path, required=True)

    p = sub.add_parser("bench", help="measure single-stream predict throughput")
    common(p)
    p.add_argument("--weights", type=Path, help="weights file (random net if omitted)")
    p.add_argument("--frames", type=int, default=500)
    p.add_argument(
        "--verify-conv",
        action="store_true",
        help="also check naive-loop vs fast conv predictions agree",
    )

    p = sub.add_parser("run-sim", help="run a scenario on the virtual clock")
    common(p)
    p.add_argument("--scenario", type=Path, required=True)

    p = sub.add_parser("serve", help="relay server + gateway + live simulation")
    common(p)
    p.add_argument("--listen", default="127.0.0.1:7677", help="relay addr:port")
    p.add_argument("--gateway-port", type=int, default=7678)
    p.add_argument("--log", type=Path, help="append-only store log file")
    p.add_argument("--scenario", type=Path, help="world/start pose for the live sim")
    p.add_argument("--time-scale", type=float, default=1.0)
    return parser


def _load_config(args) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else RunConfig()
    if args.preset == "reduced":
        config = config.with_overrides(**REDUCED_PRESET)
    if args.seed is not None:
        config = config.with_overrides(
            corpus_seed=args.seed,
            split_seed=args.seed + 1,
            net_seed=args.seed + 2,
            train_seed=args.seed + 3,
            world_seed=args.seed + 4,
        )
    for attr in ("epochs", "batch"):
        if getattr(args, attr, None) is not None:
            config = config.with_overrides(**{attr: getattr(args, attr)})
    return config


def _out_dir(args, default: str) -> Path:
    out = args.out if args.out else Path(default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _class_counts(config: RunConfig, per_class=None) -> dict:
    if per_class is not None:
        return {g: per_class for g in GazeClass}
    if config.total_images:
        return {g: config.total_images // 5 for g in GazeClass}
    return dict(DEFAULT_CLASS_COUNTS)


def cmd_gen_data(args) -> int:
    from gazebot.synth import generate_corpus

    config = _load_config(args)
    out = _out_dir(args, "data")
    counts = _class_counts(config, args.per_class)
    manifest = generate_corpus(out, counts, corpus_seed=config.corpus_seed)
    manifest["config"] = config.to_dict()
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {manifest['total']} images under {out}")
    return 0


def cmd_train(args) -> int:
    from gazebot.dataset import load_corpus, split
    from gazebot.evaluate import evaluate
    from gazebot.model import build_gaze_network, train
    from gazebot.nn import save_weights

    config = _load_config(args)
    out = _out_dir(args, "train-out")
    t0 = time.time()
    dataset = load_corpus(args.data, frame_size=config.frame_size)
    train_set, val_set = split(dataset, config.val_fraction, seed=config.split_seed)
    net = build_gaze_network(seed=config.net_seed, input_size=config.frame_size)
    print(
        f"training on {len(train_set)} frames ({config.frame_size}px), "
        f"{config.epochs} epochs, batch {config.batch}"
    )
    history = train(
        net,
        train_set,
        epochs=config.epochs,
        batch=config.batch,
        seed=config.train_seed,
        lr=config.lr,
        checkpoint_dir=out / "checkpoints",
        progress=lambda e, l: print(f"  epoch {e}/{config.epochs}: loss {l:.5f}"),
    )
    weights_path = out / "weights.gznn"
    save_weights(net, weights_path)
    report = evaluate(net, val_set)

    (out / "loss_history.tsv").write_text(
        "epoch\tloss\n" + "".join(f"{i+1}\t{l:.8f}\n" for i, l in enumerate(history))
    )
    (out / "eval.txt").write_text(report.render_text())
    summary = {
        "config": config.to_dict(),
        "train_size": len(train_set),
        "val_size": len(val_set),
        "loss_history": history,
        "elapsed_s": time.time() - t0,
        "report": report.to_dict(),
        "weights": str(weights_path),
    }
    (out / "train.json").write_text(json.dumps(summary, indent=2) + "\n")
    if not args.no_figures:
        from gazebot import figures

        figures.save_loss_curve(history, out / "loss_curve.png")
        figures.save_confusion_matrix(report, out / "confusion.png")
    print(report.render_text())
    print(f"weights: {weights_path}")
    return 0


def cmd_eval(args) -> int:
    from gazebot.dataset import load_corpus, split
    from gazebot.evaluate import evaluate
    from gazebot.model import build_gaze_network
    from gazebot.nn import load_weights

    config = _load_config(args)
    out = _out_dir(args, "eval-out")
    dataset = load_corpus(args.data, frame_size=config.frame_size)
    _, val_set = split(dataset, config.val_fraction, seed=config.split_seed)
    net = build_gaze_network(seed=config.net_seed, input_size=config.frame_size)
    load_weights(net, args.weights)
    report = evaluate(net, val_set)
    (out / "eval.txt").write_text(report.render_text())
    payload = {"config": config.to_dict(), "report": report.to_dict()}
    (out / "eval.json").write_text(json.dumps(payload, indent=2) + "\n")
    if not args.no_figures:
        from gazebot import figures

        figures.save_confusion_matrix(report, out / "confusion.png")
    print(report.render_text())
    return 0


def cmd_bench(args) -> int:
    from gazebot.bench import conv_paths_agree, run_bench
    from gazebot.model import build_gaze_network
    from gazebot.nn import load_weights

    config = _load_config(args)
    out = _out_dir(args, "bench-out")
    net = build_gaze_network(seed=config.net_seed, input_size=config.frame_size)
    if args.weights:
        load_weights(net, args.weights)
    report = run_bench(net, frames=args.frames)
    payload = {"config": config.to_dict(), **report.to_dict()}
    if args.verify_conv:
        payload["conv_paths_agree"] = conv_paths_agree(
            input_size=min(config.frame_size, 32), seed=config.net_seed
        )
    (out / "bench.json").write_text(json.dumps(payload, indent=2) + "\n")
    (out / "bench.txt").write_text(report.render_text())
    if not args.no_figures:
        from gazebot import figures

        figures.save_layer_times(report.layer_s, report.frames, out / "layer_times.png")
    print(report.render_text())
    if args.verify_conv:
        print(f"conv paths agree: {payload['conv_paths_agree']}")
    return 0


def cmd_run_sim(args) -> int:
    from gazebot.sim.runner import run_scenario
    from gazebot.sim.scenario import load_scenario

    config = _load_config(args)
    out = _out_dir(args, "sim-out")
    scenario = load_scenario(args.scenario)
    result = run_scenario(scenario, config)
    (out / "trajectory.tsv").write_text(result.trajectory_tsv())
    (out / "commands.tsv").write_text(result.commands_tsv())
    (out / "latency.tsv").write_text(
        "latency_ms\n" + "".join(f"{v:.3f}\n" for v in result.latencies_ms)
    )
    metrics = {
        "config": result.config,
        "emissions": result.emissions,
        "applies": result.applies,
        "median_latency_ms": result.median_latency_ms(),
        "displacement_m": result.displacement(),
        "dropped_frames": result.dropped_frames,
        "diagnostics": result.diagnostics,
        "final": {
            "x": result.final_state.x,
            "y": result.final_state.y,
            "heading": result.final_state.heading,
            "speed": result.final_state.speed,
            "mode": result.final_state.mode.value,
            "blocked": result.final_state.obstacle_blocked,
        },
    }
    (out / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
    if not args.no_figures:
        from gazebot import figures

        figures.save_trajectory(result.trajectory, scenario.world, out / "trajectory.png")
        figures.save_latency_hist(result.latencies_ms, out / "latency_hist.png")
    med = result.median_latency_ms()
    print(
        f"{len(result.trajectory)} ticks, {len(result.emissions)} emissions, "
        f"median latency {med:.1f} ms" if med is not None else
        f"{len(result.trajectory)} ticks, {len(result.emissions)} emissions"
    )
    return 0


def cmd_serve(args) -> int:
    from gazebot.serve import ServeSession
    from gazebot.sim.scenario import load_scenario

    config = _load_config(args)
    host, _, port = args.listen.rpartition(":")
    scenario = load_scenario(args.scenario) if args.scenario else None
    session = ServeSession(
        config=config,
        scenario=scenario,
        host=host or "127.0.0.1",
        relay_port=int(port),
        gateway_port=args.gateway_port,
        log_path=args.log,
        out_dir=args.out,
        time_scale=args.time_scale,
    )
    session.start()
    print(f"relay    tcp://{session.host}:{session.relay_port}")
    print(f"gateway  {session.gateway_url}")
    print("Ctrl+C to stop")
    try:
        while True:
            time.sleep(0.5)
    except KeyboardInterrupt:
        pass
    finally:
        session.stop()
        print("stopped; logs flushed")
    return 0


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "run-sim": cmd_run_sim,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GazebotError, OSError, FloatingPointError) as e:
        print(
            json.dumps({"error": str(e), "command": args.command}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
