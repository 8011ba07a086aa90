"""Matplotlib renderings written next to the delimited report files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from gazebot.classes import CLASS_LABELS
from gazebot.evaluate import EvalReport
from gazebot.sim.world import World


def save_confusion_matrix(report: EvalReport, path) -> None:
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    m = report.confusion
    im = ax.imshow(m, cmap="Blues")
    ax.set_xticks(range(len(CLASS_LABELS)), CLASS_LABELS, rotation=30)
    ax.set_yticks(range(len(CLASS_LABELS)), CLASS_LABELS)
    ax.set_xlabel("predicted")
    ax.set_ylabel("actual")
    thresh = m.max() / 2 if m.max() else 0.5
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            ax.text(
                j, i, str(m[i, j]), ha="center", va="center",
                color="white" if m[i, j] > thresh else "black", fontsize=9,
            )
    ax.set_title(f"accuracy {report.accuracy:.4f}")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_loss_curve(history: list[float], path) -> None:
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    ax.plot(range(1, len(history) + 1), history, marker="o")
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean training loss")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_layer_times(layer_s: dict[str, float], frames: int, path) -> None:
    names = list(layer_s)
    ms = [layer_s[n] * 1e3 / frames for n in names]
    fig, ax = plt.subplots(figsize=(6.5, 0.35 * len(names) + 1.5))
    ax.barh(range(len(names)), ms)
    ax.set_yticks(range(len(names)), names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("ms per frame")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trajectory(rows: list[str], world: World, path) -> None:
    xs, ys, blocked = [], [], []
    for row in rows:
        parts = row.split("\t")
        xs.append(float(parts[1]))
        ys.append(float(parts[2]))
        blocked.append(parts[6] == "1")
    fig, ax = plt.subplots(figsize=(6, 6))
    xmin, ymin, xmax, ymax = world.bounds
    ax.add_patch(
        plt.Rectangle((xmin, ymin), xmax - xmin, ymax - ymin, fill=False, lw=1.2)
    )
    for c in world.circles:
        ax.add_patch(plt.Circle((c.cx, c.cy), c.r, color="tab:red", alpha=0.4))
    for s in world.segments:
        ax.plot([s.x1, s.x2], [s.y1, s.y2], color="tab:red", lw=2)
    if xs:
        ax.plot(xs, ys, color="tab:blue", lw=1.2)
        bx = [x for x, b in zip(xs, blocked) if b]
        by = [y for y, b in zip(ys, blocked) if b]
        if bx:
            ax.scatter(bx, by, s=6, color="tab:orange", label="guard engaged")
            ax.legend(loc="upper right", fontsize=8)
        ax.plot(xs[0], ys[0], "go", ms=8)
        ax.plot(xs[-1], ys[-1], "ks", ms=8)
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    ax.set_xlim(xmin - pad, xmax + pad)
    ax.set_ylim(ymin - pad, ymax + pad)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_latency_hist(latencies_ms: list[float], path) -> None:
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    if latencies_ms:
        ax.hist(latencies_ms, bins=min(20, max(5, len(latencies_ms))), edgecolor="black")
        med = float(np.median(latencies_ms))
        ax.axvline(med, color="tab:red", ls="--", label=f"median {med:.0f} ms")
        ax.legend(fontsize=8)
    ax.set_xlabel("emit-to-motor latency [ms]")
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
