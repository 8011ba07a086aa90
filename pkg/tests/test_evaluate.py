"""Report math, including the published-confusion-matrix fidelity case."""

import numpy as np
import numpy.testing as npt
import pytest

from gazebot.classes import CLASS_LABELS, GazeClass
from gazebot.errors import InputError
from gazebot.evaluate import EvalReport, confusion_from_predictions, round2

# Published five-class confusion matrix this system's report math must
# reproduce. Source ordering was Down/Left/Right/Up/Straight; ours is
# alphabetical (Down/Left/Right/Straight/Up), remapped accordingly.
REference_ROWS = {
    "Down": {"Down": 628},
    "Left": {"Left": 851},
    "Right": {"Left": 1, "Right": 840},
    "Up": {"Left": 1, "Up": 714, "Straight": 3},
    "Straight": {"Left": 1, "Straight": 931},
}


def reference_confusion():
    m = np.zeros((5, 5), dtype=np.int64)
    for actual, row in REference_ROWS.items():
        for predicted, count in row.items():
            m[GazeClass.from_label(actual), GazeClass.from_label(predicted)] = count
    return m


class TestReferenceFidelity:
    def test_up_recall_rounds_to_point_99(self):
        report = EvalReport.from_confusion(reference_confusion())
        up = int(GazeClass.UP)
        assert report.support[up] == 718
        assert abs(report.recall[up] - 714 / 718) < 1e-12
        assert round2(report.recall[up]) == 0.99

    def test_all_other_metrics_round_to_one(self):
        report = EvalReport.from_confusion(reference_confusion())
        for g in GazeClass:
            i = int(g)
            assert round2(report.precision[i]) == 1.0, g
            assert round2(report.f1[i]) == 1.0, g
            if g != GazeClass.UP:
                assert round2(report.recall[i]) == 1.0, g

    def test_supports_match_row_sums(self):
        report = EvalReport.from_confusion(reference_confusion())
        expected = {"Down": 628, "Left": 851, "Right": 841, "Up": 718, "Straight": 932}
        for g in GazeClass:
            assert report.support[int(g)] == expected[g.label]
        assert report.support.sum() == 3970

    def test_rendered_table_shows_rounded_values(self):
        text = EvalReport.from_confusion(reference_confusion()).render_text()
        lines = text.splitlines()
        start = lines.index("Classification report")
        up_line = next(l for l in lines[start:] if l.startswith("Up"))
        assert "0.99" in up_line
        assert "1.00" in up_line


class TestReportMath:
    def test_perfect_predictions(self):
        m = np.diag([10, 20, 30, 40, 50])
        report = EvalReport.from_confusion(m)
        npt.assert_array_equal(report.precision, np.ones(5))
        npt.assert_array_equal(report.recall, np.ones(5))
        npt.assert_array_equal(report.f1, np.ones(5))
        assert report.accuracy == 1.0

    def test_hand_two_class_case(self):
        # TP=1, FP=1, FN=0 for class 0: precision .5, recall 1, F1 2/3
        m = np.zeros((5, 5), dtype=int)
        m[0, 0] = 1
        m[1, 0] = 1
        report = EvalReport.from_confusion(m)
        assert report.precision[0] == 0.5
        assert report.recall[0] == 1.0
        assert abs(report.f1[0] - 2 / 3) < 1e-12

    def test_accuracy_is_trace_over_total(self):
        rng = np.random.default_rng(0)
        m = rng.integers(0, 50, size=(5, 5))
        report = EvalReport.from_confusion(m)
        assert abs(report.accuracy - np.trace(m) / m.sum()) < 1e-12

    def test_row_sums_equal_support(self):
        rng = np.random.default_rng(1)
        m = rng.integers(0, 9, size=(5, 5))
        report = EvalReport.from_confusion(m)
        npt.assert_array_equal(report.support, m.sum(axis=1))

    def test_rejects_bad_matrix(self):
        with pytest.raises(InputError):
            EvalReport.from_confusion(np.zeros((4, 4), dtype=int))
        with pytest.raises(InputError):
            EvalReport.from_confusion(np.full((5, 5), -1))

    def test_confusion_from_predictions(self):
        actual = np.array([0, 0, 1, 2])
        predicted = np.array([0, 1, 1, 2])
        m = confusion_from_predictions(actual, predicted)
        assert m[0, 0] == 1 and m[0, 1] == 1 and m[1, 1] == 1 and m[2, 2] == 1
        assert m.sum() == 4

    def test_json_round_trip(self):
        import json

        report = EvalReport.from_confusion(reference_confusion())
        data = json.loads(report.to_json())
        assert data["classes"] == CLASS_LABELS
        assert data["support"][int(GazeClass.UP)] == 718
        assert abs(data["accuracy"] - report.accuracy) < 1e-12


class TestRounding:
    def test_half_up(self):
        assert round2(0.994) == 0.99
        assert round2(0.995) == 1.0
        assert round2(0.985) == 0.99
        assert round2(2 / 3) == 0.67
