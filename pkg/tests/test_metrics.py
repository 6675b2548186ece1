import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridscope.detections import Detection
from gridscope.errors import CsvError, NoGroundTruth, UndefinedMetric
from gridscope.metrics import (
    GroundTruthBox,
    MAP_THRESHOLDS,
    MatchOutcome,
    average_precision,
    evaluate_detections,
    fitness,
    iou,
    map_range,
    match_greedy,
    precision_recall,
    read_ground_truth,
)

from oracles import ap_oracle, iou_oracle, match_oracle


def pred(frame="0", box=(0.0, 0.0, 10.0, 10.0), conf=0.9):
    return Detection("det", frame, 0.0, box[0], box[1], box[2], box[3], conf)


def gt(frame="0", box=(0.0, 0.0, 10.0, 10.0)):
    return GroundTruthBox(frame, box[0], box[1], box[2], box[3])


class TestIou:
    def test_offset_overlap_is_exactly_one_third(self):
        assert iou((0, 0, 2, 2), (1, 0, 3, 2)) == 1.0 / 3.0

    def test_identical(self):
        assert iou((0, 0, 5, 5), (0, 0, 5, 5)) == 1.0

    def test_disjoint(self):
        assert iou((0, 0, 1, 1), (5, 5, 6, 6)) == 0.0

    def test_edge_touching_is_zero(self):
        assert iou((0, 0, 1, 1), (1, 0, 2, 1)) == 0.0

    def test_contained(self):
        assert iou((0, 0, 10, 10), (2, 2, 4, 4)) == 4.0 / 100.0

    def test_symmetry(self):
        a, b = (0.0, 0.0, 3.0, 4.0), (1.0, 1.0, 5.0, 2.5)
        assert iou(a, b) == iou(b, a)

    @given(
        shift=st.floats(-12, 12),
        size=st.floats(0.5, 8),
    )
    def test_matches_reference(self, shift, size):
        a = (0.0, 0.0, 10.0, 10.0)
        b = (shift, 0.0, shift + size, size)
        assert iou(a, b) == iou_oracle(a, b)


class TestGroundTruthBox:
    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            gt(box=(0, 0, 0, 5))
        with pytest.raises(ValueError):
            gt(box=(0, 5, 5, 5))


class TestMatchGreedy:
    def test_perfect_match(self):
        out = match_greedy([pred()], [gt()])
        assert (out.tp, out.fp, out.fn) == (1, 0, 0)

    def test_below_threshold_is_fp(self):
        out = match_greedy([pred(box=(0, 0, 2, 2))], [gt(box=(1, 0, 3, 2))], 0.5)
        assert (out.tp, out.fp, out.fn) == (0, 1, 1)

    def test_frames_are_isolated(self):
        out = match_greedy([pred(frame="7")], [gt(frame="8")])
        assert (out.tp, out.fp, out.fn) == (0, 1, 1)

    def test_duplicate_prediction_is_fp(self):
        out = match_greedy([pred(conf=0.9), pred(conf=0.8)], [gt()])
        assert (out.tp, out.fp, out.fn) == (1, 1, 0)

    def test_higher_confidence_claims_first(self):
        # The low-confidence pred overlaps better but ranks later.
        good_fit = pred(box=(0, 0, 10, 10), conf=0.3)
        bad_fit = pred(box=(0, 0, 10, 14), conf=0.9)
        out = match_greedy([good_fit, bad_fit], [gt()], 0.5)
        assert (out.tp, out.fp) == (1, 1)

    def test_iou_tie_takes_earliest_gt_row(self):
        # One pred overlaps two identical GT boxes equally; the first row
        # is claimed, leaving the second unmatched.
        boxes = [gt(box=(0, 0, 10, 10)), gt(box=(0, 0, 10, 10))]
        out = match_greedy([pred()], boxes)
        assert (out.tp, out.fn) == (1, 1)

    def test_equal_confidence_keeps_input_order(self):
        first = pred(box=(0, 0, 10, 10), conf=0.5)
        second = pred(box=(0, 0, 10, 12), conf=0.5)
        out = match_greedy([first, second], [gt()], 0.5)
        assert (out.tp, out.fp) == (1, 1)

    def test_counts_conserved(self):
        preds = [pred(conf=c / 10.0) for c in range(1, 6)]
        boxes = [gt(), gt(box=(20, 20, 30, 30))]
        out = match_greedy(preds, boxes)
        assert out.tp + out.fp == len(preds)
        assert out.tp + out.fn == len(boxes)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            MatchOutcome(-1, 0, 0)


class TestPrecisionRecall:
    def test_values(self):
        assert precision_recall(MatchOutcome(3, 2, 1)) == (0.6, 0.75)

    def test_no_predictions_undefined(self):
        with pytest.raises(UndefinedMetric) as err:
            precision_recall(MatchOutcome(0, 0, 4))
        assert "precision" in str(err.value)

    def test_no_ground_truth_undefined(self):
        with pytest.raises(UndefinedMetric) as err:
            precision_recall(MatchOutcome(0, 3, 0))
        assert "recall" in str(err.value)


class TestAveragePrecision:
    def test_needs_ground_truth(self):
        with pytest.raises(NoGroundTruth):
            average_precision([pred()], [])

    def test_no_predictions_scores_zero(self):
        assert average_precision([], [gt()]) == 0.0

    def test_single_perfect_prediction(self):
        assert average_precision([pred()], [gt()]) == 1.0

    def test_perfect_among_two_gt(self):
        # Recall tops out at 0.5, precision 1 up to there: 51 points of 1.
        ap = average_precision([pred()], [gt(), gt(frame="9")])
        assert ap == 51.0 / 101.0

    def test_threshold_boundary_inclusive(self):
        # Engineered IoU of exactly 0.60: counted at threshold 0.60.
        p = [pred(box=(0.0, 0.0, 10.0, 10.0))]
        g = [gt(box=(0.0, 0.0, 10.0, 6.0))]
        assert iou(p[0].bbox, (0.0, 0.0, 10.0, 6.0)) == 60.0 / 100.0
        assert average_precision(p, g, 60.0 / 100.0) == 1.0
        assert average_precision(p, g, 0.65) == 0.0

    def test_fp_before_tp_lowers_curve(self):
        preds = [pred(frame="nope", conf=0.9), pred(conf=0.8)]
        ap = average_precision(preds, [gt()])
        assert ap == 101 * 0.5 / 101.0


boxes_strategy = st.sampled_from(
    [
        (0.0, 0.0, 10.0, 10.0),
        (2.0, 0.0, 12.0, 10.0),
        (5.0, 5.0, 15.0, 15.0),
        (0.0, 0.0, 4.0, 4.0),
        (20.0, 20.0, 30.0, 30.0),
    ]
)


@settings(max_examples=120, deadline=None)
@given(
    preds=st.lists(
        st.builds(
            pred,
            frame=st.sampled_from(["0", "1"]),
            box=boxes_strategy,
            conf=st.sampled_from([0.3, 0.5, 0.7, 0.9]),
        ),
        max_size=8,
    ),
    boxes=st.lists(
        st.builds(gt, frame=st.sampled_from(["0", "1"]), box=boxes_strategy),
        min_size=1,
        max_size=6,
    ),
    threshold=st.sampled_from([0.5, 0.6, 2.0 / 3.0, 0.75]),
)
def test_matching_and_ap_equal_brute_force(preds, boxes, threshold):
    out = match_greedy(preds, boxes, threshold)
    _, (tp, fp, fn) = match_oracle(preds, boxes, threshold)
    assert (out.tp, out.fp, out.fn) == (tp, fp, fn)
    assert average_precision(preds, boxes, threshold) == ap_oracle(
        preds, boxes, threshold
    )


class TestFitness:
    def test_weights(self):
        assert fitness(0.0, 0.0, 1.0, 0.0) == pytest.approx(0.1, abs=1e-15)
        assert fitness(0.0, 0.0, 0.0, 1.0) == pytest.approx(0.9, abs=1e-15)

    def test_precision_recall_ignored(self):
        assert fitness(1.0, 1.0, 0.5, 0.5) == fitness(0.0, 0.0, 0.5, 0.5)

    def test_reference_points(self):
        assert fitness(0.0, 0.0, 0.94, 0.39) == pytest.approx(0.445, abs=1e-12)
        assert fitness(0.0, 0.0, 0.91, 0.38) == pytest.approx(0.433, abs=1e-12)


class TestEvaluateDetections:
    def fixture(self):
        boxes = [
            gt("0", (0.0, 0.0, 10.0, 10.0)),
            gt("0", (20.0, 20.0, 30.0, 30.0)),
            gt("1", (0.0, 0.0, 10.0, 10.0)),
            gt("2", (5.0, 5.0, 15.0, 15.0)),
        ]
        preds = [
            pred("2", (100.0, 100.0, 110.0, 110.0), 0.95),
            pred("0", (0.0, 0.0, 10.0, 10.0), 0.9),
            pred("1", (2.0, 0.0, 12.0, 10.0), 0.85),
            pred("0", (19.0, 20.0, 29.0, 30.0), 0.8),
            pred("0", (0.0, 0.0, 10.0, 10.0), 0.5),
        ]
        return preds, boxes

    def test_report_matches_hand_derivation(self):
        preds, boxes = self.fixture()
        report = evaluate_detections(preds, boxes)
        assert report.precision == 3.0 / 5.0
        assert report.recall == 3.0 / 4.0
        assert report.map50 == 57.0 / 101.0
        assert report.fitness == pytest.approx(
            0.1 * report.map50 + 0.9 * report.map5095, abs=1e-15
        )

    def test_per_threshold_covers_the_range(self):
        preds, boxes = self.fixture()
        report = evaluate_detections(preds, boxes)
        assert tuple(t for t, _ in report.per_threshold) == MAP_THRESHOLDS
        aps = [ap for _, ap in report.per_threshold]
        assert aps == sorted(aps, reverse=True)  # monotone for this data

    def test_map_range_consistent(self):
        preds, boxes = self.fixture()
        map50, map5095 = map_range(preds, boxes)
        report = evaluate_detections(preds, boxes)
        assert (map50, map5095) == (report.map50, report.map5095)

    def test_doc_and_table(self):
        preds, boxes = self.fixture()
        report = evaluate_detections(preds, boxes)
        doc = report.as_doc()
        assert doc["map50"] == report.map50
        assert len(doc["average_precision"]) == len(MAP_THRESHOLDS)
        text = report.human_table()
        assert "fitness" in text
        assert "0.50" in text


class TestGroundTruthCsv:
    def test_read(self, tmp_path):
        p = tmp_path / "gt.csv"
        p.write_text(
            "frame_id,u_min,v_min,u_max,v_max\n"
            "0,0,0,10,10\n"
            "\n"
            "1,5.5,5,15.25,15\n"
        )
        boxes = read_ground_truth(p)
        assert len(boxes) == 2
        assert boxes[1].u_max == 15.25

    def test_bad_header(self, tmp_path):
        p = tmp_path / "gt.csv"
        p.write_text("frame,u0\n")
        with pytest.raises(CsvError):
            read_ground_truth(p)

    def test_degenerate_row_located(self, tmp_path):
        p = tmp_path / "gt.csv"
        p.write_text("frame_id,u_min,v_min,u_max,v_max\n0,5,0,5,10\n")
        with pytest.raises(CsvError) as err:
            read_ground_truth(p)
        assert err.value.row == 2
