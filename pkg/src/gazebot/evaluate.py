"""Evaluation reports: confusion matrix and per-class classification metrics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from gazebot.classes import CLASS_LABELS, GazeClass
from gazebot.dataset import LabeledSet
from gazebot.errors import InputError
from gazebot.model import predict_batch
from gazebot.nn import Network

N = len(CLASS_LABELS)


def round2(x: float) -> float:
    """Two-decimal half-up rounding, as rendered in the report tables."""
    return float(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass
class EvalReport:
    """Confusion counts (rows actual, columns predicted) plus derived metrics."""

    confusion: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float

    @classmethod
    def from_confusion(cls, confusion) -> "EvalReport":
        confusion = np.asarray(confusion, dtype=np.int64)
        if confusion.shape != (N, N):
            raise InputError(f"confusion matrix must be {N}x{N}, got {confusion.shape}")
        if (confusion < 0).any():
            raise InputError("confusion counts must be non-negative")
        support = confusion.sum(axis=1)
        tp = np.diag(confusion).astype(np.float64)
        predicted = confusion.sum(axis=0).astype(np.float64)
        precision = np.divide(tp, predicted, out=np.zeros(N), where=predicted > 0)
        recall = np.divide(
            tp, support.astype(np.float64), out=np.zeros(N), where=support > 0
        )
        denom = precision + recall
        f1 = np.divide(2 * precision * recall, denom, out=np.zeros(N), where=denom > 0)
        total = confusion.sum()
        accuracy = float(tp.sum() / total) if total else 0.0
        return cls(confusion, precision, recall, f1, support, accuracy)

    def to_dict(self) -> dict:
        return {
            "classes": CLASS_LABELS,
            "confusion": self.confusion.tolist(),
            "precision": [float(v) for v in self.precision],
            "recall": [float(v) for v in self.recall],
            "f1": [float(v) for v in self.f1],
            "support": [int(v) for v in self.support],
            "accuracy": float(self.accuracy),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def render_text(self) -> str:
        """Human-readable tables, metrics rounded half-up to 2 decimals."""
        width = max(len(c) for c in CLASS_LABELS) + 2
        lines = ["Confusion matrix (rows actual, columns predicted)"]
        header = " " * width + "".join(f"{c:>{width}}" for c in CLASS_LABELS)
        lines.append(header)
        for i, label in enumerate(CLASS_LABELS):
            row = "".join(f"{int(v):>{width}}" for v in self.confusion[i])
            lines.append(f"{label:<{width}}" + row)
        lines.append("")
        lines.append("Classification report")
        lines.append(
            f"{'Class':<{width}}{'Precision':>10}{'Recall':>10}{'F1':>10}{'Support':>10}"
        )
        for i, label in enumerate(CLASS_LABELS):
            lines.append(
                f"{label:<{width}}"
                f"{round2(self.precision[i]):>10.2f}"
                f"{round2(self.recall[i]):>10.2f}"
                f"{round2(self.f1[i]):>10.2f}"
                f"{int(self.support[i]):>10}"
            )
        lines.append("")
        lines.append(f"Accuracy: {round2(self.accuracy):.2f} ({self.accuracy:.6f})")
        return "\n".join(lines) + "\n"


def confusion_from_predictions(actual: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    confusion = np.zeros((N, N), dtype=np.int64)
    np.add.at(confusion, (actual, predicted), 1)
    return confusion


def evaluate(net: Network, val_set: LabeledSet, batch: int = 64) -> EvalReport:
    """Run the network over a validation set and tabulate the results."""
    if len(val_set) == 0:
        raise InputError("empty validation set")
    predicted = predict_batch(net, val_set.frames, batch=batch)
    confusion = confusion_from_predictions(val_set.labels, predicted)
    return EvalReport.from_confusion(confusion)


def per_class_recall(report: EvalReport) -> dict[GazeClass, float]:
    return {g: float(report.recall[int(g)]) for g in GazeClass}
