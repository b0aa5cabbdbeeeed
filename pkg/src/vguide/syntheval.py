"""Scripted scenario rendering with exact ground truth, and detection scoring.

A scenario script is a JSON document:

    {"canvas": {"width": W, "height": H, "background_gray": G},
     "fps": 30, "duration_ms": D,
     "events": [
       {"kind": "point",  "start_ms": a, "end_ms": b, "gray": g,
        "path": [[x, y], ...], "radius": r},
       {"kind": "mark",   "start_ms": a, "end_ms": b, "gray": g,
        "rect": [x, y, w, h]},
       {"kind": "sketch", "start_ms": a, "end_ms": b, "gray": g,
        "points": [[x, y], ...], "stroke_width": s}]}

Any event may carry "annotate": false to render as scene dressing
(for example a hard cut) without entering the ground truth.

Point events are erase-and-redraw: the disc exists only at its current
path position, so consecutive frames leave the trail-ghost diff pattern
the graph merge step is meant to absorb. Marks fill their rectangle for
the whole event window. Sketches reveal their polyline progressively by
arc length and persist afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .detect import BBox
from .errors import ScriptInvalid, TimelineMismatch
from .ingest import Frame, FrameSource, VideoMeta, timestamp_ms
from .manifest import ActivityManifest


@dataclass(frozen=True)
class GTActivity:
    kind: str
    start_ms: int
    end_ms: int
    bbox: BBox


@dataclass(frozen=True)
class GroundTruth:
    activities: list[GTActivity]
    duration_ms: int | None = None


@dataclass(frozen=True)
class EvalReport:
    matches: list[tuple[int, int, float, float]]  # (pred_id, gt_id, t_iou, s_iou)
    precision: float
    recall: float
    f1: float
    mean_onset_error_ms: float

    def to_dict(self) -> dict:
        return {
            "matches": [{"pred_id": p, "gt_id": g,
                         "temporal_iou": round(t, 6), "spatial_iou": round(s, 6)}
                        for p, g, t, s in self.matches],
            "precision": round(self.precision, 6),
            "recall": round(self.recall, 6),
            "f1": round(self.f1, 6),
            "mean_onset_error_ms": round(self.mean_onset_error_ms, 3),
        }


# ---------------------------------------------------------------- scripts


@dataclass(frozen=True)
class ScenarioScript:
    width: int
    height: int
    background_gray: int
    fps: Fraction
    duration_ms: int
    events: list[dict] = field(default_factory=list)


def parse_script(doc: dict) -> ScenarioScript:
    try:
        canvas = doc["canvas"]
        script = ScenarioScript(
            width=int(canvas["width"]), height=int(canvas["height"]),
            background_gray=int(canvas["background_gray"]),
            fps=Fraction(doc["fps"]), duration_ms=int(doc["duration_ms"]),
            events=list(doc.get("events", [])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScriptInvalid(f"malformed script: {exc}") from exc
    _validate_script(script)
    return script


def _validate_script(s: ScenarioScript):
    if s.width <= 0 or s.height <= 0:
        raise ScriptInvalid("canvas dimensions must be positive")
    if not 0 <= s.background_gray <= 255:
        raise ScriptInvalid("background_gray out of range")
    if s.fps <= 0 or s.duration_ms <= 0:
        raise ScriptInvalid("fps and duration_ms must be positive")
    for i, ev in enumerate(s.events):
        where = f"event {i}"
        kind = ev.get("kind")
        if kind not in ("point", "mark", "sketch"):
            raise ScriptInvalid(f"{where}: unknown kind {kind!r}")
        try:
            start, end, gray = int(ev["start_ms"]), int(ev["end_ms"]), int(ev["gray"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ScriptInvalid(f"{where}: {exc}") from exc
        if not (0 <= start < end <= s.duration_ms):
            raise ScriptInvalid(f"{where}: window [{start},{end}] outside video duration")
        if not 0 <= gray <= 255 or gray == s.background_gray:
            raise ScriptInvalid(f"{where}: gray must differ from the background")
        if not isinstance(ev.get("annotate", True), bool):
            raise ScriptInvalid(f"{where}: annotate must be a boolean")
        if kind == "point":
            path = ev.get("path")
            r = ev.get("radius")
            if not path or r is None or r <= 0:
                raise ScriptInvalid(f"{where}: point needs a path and positive radius")
            for x, y in path:
                if not (r <= x <= s.width - 1 - r and r <= y <= s.height - 1 - r):
                    raise ScriptInvalid(f"{where}: path point ({x},{y}) leaves the canvas")
        elif kind == "mark":
            rect = ev.get("rect")
            if not rect or len(rect) != 4:
                raise ScriptInvalid(f"{where}: mark needs rect [x,y,w,h]")
            x, y, w, h = rect
            if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > s.width or y + h > s.height:
                raise ScriptInvalid(f"{where}: rect outside canvas")
        else:
            pts = ev.get("points")
            sw = ev.get("stroke_width")
            if not pts or len(pts) < 2 or sw is None or sw <= 0:
                raise ScriptInvalid(f"{where}: sketch needs >= 2 points and positive stroke_width")
            half = sw / 2
            for x, y in pts:
                if not (half <= x <= s.width - 1 - half and half <= y <= s.height - 1 - half):
                    raise ScriptInvalid(f"{where}: stroke point ({x},{y}) leaves the canvas")


# ---------------------------------------------------------------- rasterizers


def _stamp_disc(canvas: np.ndarray, cx: float, cy: float, r: float, gray: int) -> tuple | None:
    h, w = canvas.shape
    x0, x1 = max(0, int(math.floor(cx - r))), min(w - 1, int(math.ceil(cx + r)))
    y0, y1 = max(0, int(math.floor(cy - r))), min(h - 1, int(math.ceil(cy + r)))
    if x0 > x1 or y0 > y1:
        return None
    yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    hit = (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    if not hit.any():
        return None
    canvas[y0:y1 + 1, x0:x1 + 1][hit] = gray
    ys, xs = np.nonzero(hit)
    return (y0 + ys.min(), y0 + ys.max(), x0 + xs.min(), x0 + xs.max())


def _stamp_segment(canvas: np.ndarray, p0, p1, half: float, gray: int) -> tuple | None:
    h, w = canvas.shape
    x0 = max(0, int(math.floor(min(p0[0], p1[0]) - half)))
    x1 = min(w - 1, int(math.ceil(max(p0[0], p1[0]) + half)))
    y0 = max(0, int(math.floor(min(p0[1], p1[1]) - half)))
    y1 = min(h - 1, int(math.ceil(max(p0[1], p1[1]) + half)))
    if x0 > x1 or y0 > y1:
        return None
    yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    vx, vy = p1[0] - p0[0], p1[1] - p0[1]
    seg_len2 = vx * vx + vy * vy
    if seg_len2 == 0:
        t = np.zeros_like(xx, dtype=float)
    else:
        t = np.clip(((xx - p0[0]) * vx + (yy - p0[1]) * vy) / seg_len2, 0.0, 1.0)
    dist2 = (xx - (p0[0] + t * vx)) ** 2 + (yy - (p0[1] + t * vy)) ** 2
    hit = dist2 <= half * half
    if not hit.any():
        return None
    canvas[y0:y1 + 1, x0:x1 + 1][hit] = gray
    ys, xs = np.nonzero(hit)
    return (y0 + ys.min(), y0 + ys.max(), x0 + xs.min(), x0 + xs.max())


def _polyline_lengths(points) -> list[float]:
    out = [0.0]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        out.append(out[-1] + math.hypot(x1 - x0, y1 - y0))
    return out


def _path_position(points, lengths, frac: float) -> tuple[float, float]:
    total = lengths[-1]
    if total == 0:
        return tuple(points[0])
    target = frac * total
    for k in range(len(points) - 1):
        if target <= lengths[k + 1] or k == len(points) - 2:
            seg = lengths[k + 1] - lengths[k]
            u = 0.0 if seg == 0 else (target - lengths[k]) / seg
            u = min(max(u, 0.0), 1.0)
            x0, y0 = points[k]
            x1, y1 = points[k + 1]
            return (x0 + u * (x1 - x0), y0 + u * (y1 - y0))
    return tuple(points[-1])


class _BoundsAccum:
    def __init__(self):
        self.y0 = self.x0 = None
        self.y1 = self.x1 = None

    def add(self, ext: tuple | None):
        if ext is None:
            return
        y0, y1, x0, x1 = (int(v) for v in ext)
        if self.y0 is None:
            self.y0, self.y1, self.x0, self.x1 = y0, y1, x0, x1
        else:
            self.y0, self.y1 = min(self.y0, y0), max(self.y1, y1)
            self.x0, self.x1 = min(self.x0, x0), max(self.x1, x1)

    def bbox(self) -> BBox | None:
        if self.y0 is None:
            return None
        return BBox(x=self.x0, y=self.y0, w=self.x1 - self.x0 + 1, h=self.y1 - self.y0 + 1)


def _draw_event(canvas: np.ndarray, ev: dict, t_ms: int) -> tuple | None:
    """Paint one event's state at time t_ms; returns the painted extent."""
    kind = ev["kind"]
    start, end = ev["start_ms"], ev["end_ms"]
    gray = ev["gray"]
    if kind == "mark":
        if start <= t_ms < end:
            x, y, w, h = ev["rect"]
            canvas[y:y + h, x:x + w] = gray
            return (y, y + h - 1, x, x + w - 1)
        return None
    if kind == "point":
        if start <= t_ms <= end:  # inclusive: the path completes its travel
            frac = (t_ms - start) / (end - start)
            lengths = _polyline_lengths(ev["path"])
            cx, cy = _path_position(ev["path"], lengths, frac)
            return _stamp_disc(canvas, cx, cy, ev["radius"], gray)
        return None
    # sketch: progressive reveal, persists after end_ms
    if t_ms < start:
        return None
    frac = min(1.0, (t_ms - start) / (end - start))
    pts = ev["points"]
    lengths = _polyline_lengths(pts)
    target = frac * lengths[-1]
    half = ev["stroke_width"] / 2
    acc = _BoundsAccum()
    for k in range(len(pts) - 1):
        if lengths[k] >= target and target < lengths[-1]:
            break
        p0, p1 = pts[k], pts[k + 1]
        seg = lengths[k + 1] - lengths[k]
        if lengths[k + 1] > target and seg > 0:
            u = (target - lengths[k]) / seg
            p1 = (p0[0] + u * (p1[0] - p0[0]), p0[1] + u * (p1[1] - p0[1]))
        acc.add(_stamp_segment(canvas, p0, p1, half, gray))
    ext = acc.bbox()
    return None if ext is None else (ext.y, ext.y + ext.h - 1, ext.x, ext.x + ext.w - 1)


class RenderedSource(FrameSource):
    """Lazy frame source over a scenario script; renders on every iteration."""

    def __init__(self, script: ScenarioScript):
        self.script = script
        n = int(script.duration_ms * script.fps.numerator // (1000 * script.fps.denominator))
        self.meta = VideoMeta(fps=script.fps, width=script.width, height=script.height,
                              frame_count=n)

    def render_frame(self, index: int) -> np.ndarray:
        s = self.script
        t_ms = timestamp_ms(index, s.fps)
        canvas = np.full((s.height, s.width), s.background_gray, dtype=np.uint8)
        for ev in s.events:
            _draw_event(canvas, ev, t_ms)
        return canvas

    def __iter__(self) -> Iterator[Frame]:
        s = self.script
        for i in range(self.meta.frame_count):
            yield Frame(index=i, t_ms=timestamp_ms(i, s.fps), width=s.width,
                        height=s.height, pixels=self.render_frame(i))


def render_scenario(script: ScenarioScript | dict) -> tuple[RenderedSource, GroundTruth]:
    """Rasterize a script and derive ground truth from the rendered pixels.

    Each event's bbox is accumulated from the pixels it actually paints,
    frame by frame, not from the script geometry.
    """
    if isinstance(script, dict):
        script = parse_script(script)
    src = RenderedSource(script)
    scratch = np.zeros((script.height, script.width), dtype=np.uint8)
    accums = [_BoundsAccum() for _ in script.events]
    for i in range(src.meta.frame_count):
        t_ms = timestamp_ms(i, script.fps)
        for ev, acc in zip(script.events, accums):
            acc.add(_draw_event(scratch, ev, t_ms))
    gts = []
    for ev, acc in zip(script.events, accums):
        bbox = acc.bbox()
        if bbox is None:
            raise ScriptInvalid(f"event {script.events.index(ev)}: paints no pixels")
        if not ev.get("annotate", True):
            continue  # scene dressing (e.g. a hard cut), not an annotated activity
        gts.append(GTActivity(kind=ev["kind"], start_ms=int(ev["start_ms"]),
                              end_ms=int(ev["end_ms"]), bbox=bbox))
    return src, GroundTruth(activities=gts, duration_ms=src.meta.duration_ms)


# ---------------------------------------------------------------- evaluation


def interval_iou(a0: int, a1: int, b0: int, b1: int) -> float:
    inter = max(0, min(a1, b1) - max(a0, b0))
    union = max(a1, b1) - min(a0, b0)
    return inter / union if union > 0 else 0.0


def evaluate(pred: ActivityManifest, gt: GroundTruth,
             t_iou: float = 0.5, s_iou: float = 0.3) -> EvalReport:
    """Greedy one-to-one matching of predicted activities to ground truth."""
    from .rocgraph import bbox_iou

    if gt.duration_ms is not None:
        frame_ms = 1000 * pred.video.fps.denominator / pred.video.fps.numerator
        if abs(pred.video.duration_ms - gt.duration_ms) > frame_ms:
            raise TimelineMismatch(
                f"prediction covers {pred.video.duration_ms} ms, ground truth {gt.duration_ms} ms")

    candidates = []
    for p in pred.activities:
        for gi, g in enumerate(gt.activities):
            ti = interval_iou(p.start_ms, p.end_ms, g.start_ms, g.end_ms)
            si = bbox_iou(p.bbox, g.bbox)
            if ti >= t_iou and si >= s_iou:
                candidates.append((-ti, gi, p.id, si))
    candidates.sort()
    matched_pred: set[int] = set()
    matched_gt: set[int] = set()
    matches = []
    for neg_ti, gi, pid, si in candidates:
        if pid in matched_pred or gi in matched_gt:
            continue
        matched_pred.add(pid)
        matched_gt.add(gi)
        matches.append((pid, gi, -neg_ti, si))

    n_pred, n_gt, n_match = len(pred.activities), len(gt.activities), len(matches)
    precision = n_match / n_pred if n_pred else 1.0
    recall = n_match / n_gt if n_gt else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    by_pred = {p.id: p for p in pred.activities}
    onset = [abs(by_pred[pid].start_ms - gt.activities[gi].start_ms)
             for pid, gi, _, _ in matches]
    mean_onset = sum(onset) / len(onset) if onset else 0.0
    return EvalReport(matches=matches, precision=precision, recall=recall,
                      f1=f1, mean_onset_error_ms=mean_onset)


def ground_truth_to_dict(gt: GroundTruth) -> dict:
    doc = {"activities": [
        {"kind": a.kind, "start_ms": a.start_ms, "end_ms": a.end_ms,
         "bbox": {"x": a.bbox.x, "y": a.bbox.y, "w": a.bbox.w, "h": a.bbox.h}}
        for a in gt.activities]}
    if gt.duration_ms is not None:
        doc["duration_ms"] = gt.duration_ms
    return doc


def ground_truth_from_dict(doc: dict) -> GroundTruth:
    from .errors import SchemaViolation
    if not isinstance(doc, dict) or "activities" not in doc:
        raise SchemaViolation("$.activities: missing")
    acts = []
    for k, a in enumerate(doc["activities"]):
        path = f"$.activities[{k}]"
        try:
            bbox = a["bbox"]
            act = GTActivity(kind=str(a["kind"]), start_ms=int(a["start_ms"]),
                             end_ms=int(a["end_ms"]),
                             bbox=BBox(int(bbox["x"]), int(bbox["y"]),
                                       int(bbox["w"]), int(bbox["h"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"{path}: {exc}") from exc
        if act.start_ms < 0 or act.end_ms < act.start_ms:
            raise SchemaViolation(f"{path}: bad time window")
        if act.bbox.w <= 0 or act.bbox.h <= 0 or act.bbox.x < 0 or act.bbox.y < 0:
            raise SchemaViolation(f"{path}.bbox: bad geometry")
        acts.append(act)
    duration = doc.get("duration_ms")
    return GroundTruth(activities=acts, duration_ms=None if duration is None else int(duration))
