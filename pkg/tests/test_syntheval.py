import json
from fractions import Fraction

import numpy as np
import pytest

from vguide.detect import BBox
from vguide.errors import ScriptInvalid, SchemaViolation, TimelineMismatch
from vguide.ingest import Shot, VideoMeta
from vguide.manifest import ActivityManifest, build_manifest
from vguide.rocgraph import Activity
from vguide.syntheval import (EvalReport, GroundTruth, GTActivity, evaluate,
                              ground_truth_from_dict, ground_truth_to_dict,
                              interval_iou, parse_script, render_scenario)

CANVAS = {"width": 320, "height": 180, "background_gray": 235}


def script(events, duration_ms=4000, fps=30):
    return {"canvas": CANVAS, "fps": fps, "duration_ms": duration_ms, "events": events}


def mark(start, end, rect, gray=60, **kw):
    return {"kind": "mark", "start_ms": start, "end_ms": end, "gray": gray,
            "rect": rect, **kw}


def point(start, end, path, radius=6, gray=25):
    return {"kind": "point", "start_ms": start, "end_ms": end, "gray": gray,
            "path": path, "radius": radius}


def sketch(start, end, points, stroke_width=4, gray=10):
    return {"kind": "sketch", "start_ms": start, "end_ms": end, "gray": gray,
            "points": points, "stroke_width": stroke_width}


class TestRender:
    def test_empty_events_background_only(self):
        src, gt = render_scenario(script([]))
        assert gt.activities == []
        frames = list(src)
        assert len(frames) == 120
        assert all((f.pixels == 235).all() for f in frames)

    def test_static_mark_gt_bbox_exact(self):
        src, gt = render_scenario(script([mark(1000, 2000, [10, 10, 50, 20])]))
        assert gt.activities[0].bbox == BBox(10, 10, 50, 20)

    def test_point_sweep_gt_width(self):
        spec = {"canvas": {"width": 700, "height": 100, "background_gray": 235},
                "fps": 30, "duration_ms": 3000,
                "events": [point(100, 2100, [[20, 50], [620, 50]], radius=6)]}
        _, gt = render_scenario(spec)
        assert abs(gt.activities[0].bbox.w - (600 + 2 * 6)) <= 1

    def test_mark_window_half_open(self):
        src, _ = render_scenario(script([mark(1000, 2000, [10, 10, 5, 5])]))
        frames = {f.t_ms: f.pixels for f in src}
        assert (frames[1000][10:15, 10:15] == 60).all()
        assert (frames[2000] == 235).all()  # end_ms excluded

    def test_sketch_progressive_and_persistent(self):
        src, _ = render_scenario(script([sketch(0, 2000, [[10, 50], [300, 50]])]))
        frames = {f.t_ms: f.pixels for f in src}
        early = int((frames[333] == 10).sum())
        late = int((frames[1667] == 10).sum())
        assert 0 < early < late
        # persists after end_ms
        assert (frames[3967] == 10).sum() >= late

    def test_point_erase_and_redraw(self):
        src, _ = render_scenario(script([point(0, 3900, [[20, 90], [300, 90]])]))
        frames = list(src)
        counts = [(f.pixels == 25).sum() for f in frames[:100]]
        first = counts[0]
        assert all(abs(c - first) <= first for c in counts)  # one disc at a time
        assert not np.array_equal(frames[0].pixels, frames[50].pixels)

    def test_deterministic(self):
        spec = script([mark(500, 1500, [5, 5, 30, 30]),
                       point(100, 3900, [[20, 90], [300, 90]])])
        a = [f.pixels.tobytes() for f in render_scenario(spec)[0]]
        b = [f.pixels.tobytes() for f in render_scenario(spec)[0]]
        assert a == b

    def test_gt_matches_rescanned_pixels(self):
        spec = script([point(100, 3900, [[20, 90], [300, 90]], radius=5)])
        src, gt = render_scenario(spec)
        lo_x, hi_x, lo_y, hi_y = 10 ** 9, -1, 10 ** 9, -1
        for f in src:
            ys, xs = np.nonzero(f.pixels != 235)
            if len(xs):
                lo_x, hi_x = min(lo_x, xs.min()), max(hi_x, xs.max())
                lo_y, hi_y = min(lo_y, ys.min()), max(hi_y, ys.max())
        assert gt.activities[0].bbox == BBox(int(lo_x), int(lo_y),
                                             int(hi_x - lo_x + 1), int(hi_y - lo_y + 1))

    def test_annotate_false_renders_without_gt(self):
        spec = script([mark(1000, 2000, [10, 10, 50, 20], annotate=False)])
        src, gt = render_scenario(spec)
        assert gt.activities == []
        frames = {f.t_ms: f.pixels for f in src}
        assert (frames[1000][10:30, 10:60] == 60).all()


class TestScriptValidation:
    def test_unknown_kind(self):
        with pytest.raises(ScriptInvalid, match="event 0"):
            parse_script(script([{"kind": "wiggle", "start_ms": 0, "end_ms": 1,
                                  "gray": 0}]))

    def test_window_outside_duration(self):
        with pytest.raises(ScriptInvalid, match="event 0"):
            parse_script(script([mark(1000, 9000, [0, 0, 5, 5])]))

    def test_gray_equal_to_background(self):
        with pytest.raises(ScriptInvalid):
            parse_script(script([mark(0, 1000, [0, 0, 5, 5], gray=235)]))

    def test_point_path_leaves_canvas(self):
        with pytest.raises(ScriptInvalid, match="event 0"):
            parse_script(script([point(0, 1000, [[2, 2], [50, 50]], radius=6)]))

    def test_rect_outside_canvas(self):
        with pytest.raises(ScriptInvalid):
            parse_script(script([mark(0, 1000, [300, 170, 50, 50])]))

    def test_second_event_named(self):
        with pytest.raises(ScriptInvalid, match="event 1"):
            parse_script(script([mark(0, 1000, [0, 0, 5, 5]),
                                 mark(0, 1000, [0, 0, 0, 5])]))

    def test_bad_annotate_type(self):
        with pytest.raises(ScriptInvalid, match="annotate"):
            parse_script(script([mark(0, 1000, [0, 0, 5, 5], annotate="no")]))


def pred_manifest(activities, duration_frames=120, fps=30):
    meta = VideoMeta(fps=Fraction(fps), width=320, height=180,
                     frame_count=duration_frames)
    return build_manifest(activities, meta, [Shot(0, duration_frames, 0,
                                                  meta.duration_ms)])


def pact(aid, start, end, bbox):
    return Activity(id=aid, node_ids=(0,), bbox=bbox, start_ms=start,
                    end_ms=end, shot_id=0)


class TestEvaluate:
    def test_exact_match(self):
        bbox = BBox(10, 10, 40, 30)
        gt = GroundTruth([GTActivity("mark", 1000, 2000, bbox)], duration_ms=4000)
        rep = evaluate(pred_manifest([pact(0, 1000, 2000, bbox)]), gt)
        assert (rep.precision, rep.recall, rep.f1) == (1.0, 1.0, 1.0)
        assert rep.mean_onset_error_ms == 0.0

    def test_no_predictions(self):
        gt = GroundTruth([GTActivity("mark", 0, 1000, BBox(0, 0, 10, 10))] * 3,
                         duration_ms=4000)
        rep = evaluate(pred_manifest([]), gt)
        assert rep.precision == 1.0 and rep.recall == 0.0 and rep.f1 == 0.0

    def test_low_temporal_iou_unmatched(self):
        bbox = BBox(10, 10, 40, 30)
        gt = GroundTruth([GTActivity("mark", 500, 1500, bbox)], duration_ms=4000)
        rep = evaluate(pred_manifest([pact(0, 0, 1000, bbox)]), gt)
        assert interval_iou(0, 1000, 500, 1500) == pytest.approx(1 / 3)
        assert rep.matches == [] and rep.recall == 0.0

    def test_timeline_mismatch(self):
        gt = GroundTruth([], duration_ms=9000)
        with pytest.raises(TimelineMismatch):
            evaluate(pred_manifest([]), gt)

    def test_one_to_one_matching(self):
        bbox = BBox(10, 10, 40, 30)
        gt = GroundTruth([GTActivity("mark", 1000, 2000, bbox)], duration_ms=4000)
        rep = evaluate(pred_manifest([pact(0, 1000, 2000, bbox),
                                      pact(1, 1050, 2000, bbox)]), gt)
        assert len(rep.matches) == 1
        assert rep.precision == 0.5 and rep.recall == 1.0

    def test_gt_vs_itself_is_perfect(self):
        gts = [GTActivity("mark", 500, 1500, BBox(5, 5, 20, 20)),
               GTActivity("point", 2000, 3500, BBox(100, 60, 40, 40))]
        preds = [pact(k, g.start_ms, g.end_ms, g.bbox) for k, g in enumerate(gts)]
        rep = evaluate(pred_manifest(preds), GroundTruth(gts, duration_ms=4000))
        assert rep.f1 == 1.0

    def test_report_dict_round_trip_fields(self):
        rep = EvalReport(matches=[(0, 0, 1.0, 0.9)], precision=1.0, recall=1.0,
                         f1=1.0, mean_onset_error_ms=12.5)
        doc = rep.to_dict()
        assert doc["matches"][0]["pred_id"] == 0
        assert doc["f1"] == 1.0


class TestGroundTruthJson:
    def test_round_trip(self):
        gt = GroundTruth([GTActivity("mark", 100, 900, BBox(1, 2, 3, 4))],
                         duration_ms=4000)
        back = ground_truth_from_dict(json.loads(json.dumps(ground_truth_to_dict(gt))))
        assert back == gt

    def test_missing_activities(self):
        with pytest.raises(SchemaViolation):
            ground_truth_from_dict({})

    def test_bad_entry_named(self):
        with pytest.raises(SchemaViolation, match=r"activities\[0\]"):
            ground_truth_from_dict({"activities": [{"kind": "mark"}]})
