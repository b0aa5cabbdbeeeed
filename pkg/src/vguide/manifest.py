"""The engine->player contract: manifest serialization and active-activity selection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .detect import BBox
from .errors import SchemaViolation
from .ingest import Shot, VideoMeta
from .rocgraph import Activity

MANIFEST_VERSION = 1
DEFAULT_LEAD_MS = 1500


@dataclass(frozen=True)
class ActivityManifest:
    video: VideoMeta
    shots: list[Shot]
    activities: list[Activity]
    params: dict = field(default_factory=dict)
    version: int = MANIFEST_VERSION


@dataclass(frozen=True)
class SelectionQuery:
    t_ms: int
    lead_ms: int = DEFAULT_LEAD_MS


def build_manifest(activities: list[Activity], meta: VideoMeta, shots: list[Shot],
                   params: dict | None = None, min_duration_ms: int = 0) -> ActivityManifest:
    """Filter out activities shorter than min_duration_ms, re-sort, renumber."""
    kept = [a for a in activities if a.end_ms - a.start_ms >= min_duration_ms]
    kept.sort(key=lambda a: (a.start_ms, a.shot_id, a.bbox.y, a.bbox.x))
    renumbered = [Activity(id=k, node_ids=a.node_ids, bbox=a.bbox, start_ms=a.start_ms,
                           end_ms=a.end_ms, shot_id=a.shot_id) for k, a in enumerate(kept)]
    return ActivityManifest(video=meta, shots=list(shots), activities=renumbered,
                            params=dict(params or {}))


def select_active(m: ActivityManifest, q: SelectionQuery) -> int | None:
    """Pick the activity for the current playback time, or None.

    Candidates are activities whose window, extended lead_ms earlier,
    contains t_ms; among them the one whose start is nearest wins, ties
    going to the smaller id.
    """
    best = None
    best_key = None
    for a in m.activities:
        if a.start_ms - q.lead_ms <= q.t_ms <= a.end_ms:
            key = (abs(a.start_ms - q.t_ms), a.id)
            if best_key is None or key < best_key:
                best, best_key = a.id, key
    return best


def write_manifest(m: ActivityManifest) -> bytes:
    doc = {
        "version": m.version,
        "video": {
            "width": m.video.width, "height": m.video.height,
            "fps_num": m.video.fps.numerator, "fps_den": m.video.fps.denominator,
            "duration_ms": m.video.duration_ms,
        },
        "shots": [{"start_ms": s.start_ms, "end_ms": s.end_ms} for s in m.shots],
        "params": m.params,
        "activities": [
            {"id": a.id, "shot": a.shot_id, "start_ms": a.start_ms, "end_ms": a.end_ms,
             "bbox": {"x": a.bbox.x, "y": a.bbox.y, "w": a.bbox.w, "h": a.bbox.h}}
            for a in m.activities
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _need(doc: dict, key: str, typ, path: str):
    if key not in doc:
        raise SchemaViolation(f"{path}.{key}: missing")
    v = doc[key]
    if typ is int:
        if not isinstance(v, int) or isinstance(v, bool):
            raise SchemaViolation(f"{path}.{key}: expected integer, got {type(v).__name__}")
    elif not isinstance(v, typ):
        raise SchemaViolation(f"{path}.{key}: expected {typ.__name__}, got {type(v).__name__}")
    return v


def parse_manifest(data: bytes | str) -> ActivityManifest:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"$: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("$: expected object")
    version = _need(doc, "version", int, "$")
    if version != MANIFEST_VERSION:
        raise SchemaViolation(f"$.version: unsupported version {version}")
    v = _need(doc, "video", dict, "$")
    width = _need(v, "width", int, "$.video")
    height = _need(v, "height", int, "$.video")
    fps_num = _need(v, "fps_num", int, "$.video")
    fps_den = _need(v, "fps_den", int, "$.video")
    duration_ms = _need(v, "duration_ms", int, "$.video")
    if width <= 0 or height <= 0:
        raise SchemaViolation("$.video: dimensions must be positive")
    if fps_num <= 0 or fps_den <= 0:
        raise SchemaViolation("$.video: fps must be positive")
    fps = Fraction(fps_num, fps_den)
    # frame_count recovered from duration; duration_ms is authoritative on the wire
    frame_count = round(duration_ms * fps_num / (1000 * fps_den))
    meta = VideoMeta(fps=fps, width=width, height=height, frame_count=frame_count)
    if meta.duration_ms != duration_ms:
        raise SchemaViolation("$.video.duration_ms: inconsistent with fps")

    shots = []
    for k, s in enumerate(_need(doc, "shots", list, "$")):
        path = f"$.shots[{k}]"
        if not isinstance(s, dict):
            raise SchemaViolation(f"{path}: expected object")
        a = _need(s, "start_ms", int, path)
        b = _need(s, "end_ms", int, path)
        if a >= b:
            raise SchemaViolation(f"{path}: start_ms must be < end_ms")
        shots.append(Shot(start_frame=0, end_frame=1, start_ms=a, end_ms=b))

    params = _need(doc, "params", dict, "$")
    activities = []
    prev_key = None
    for k, a in enumerate(_need(doc, "activities", list, "$")):
        path = f"$.activities[{k}]"
        if not isinstance(a, dict):
            raise SchemaViolation(f"{path}: expected object")
        aid = _need(a, "id", int, path)
        shot_id = _need(a, "shot", int, path)
        start_ms = _need(a, "start_ms", int, path)
        end_ms = _need(a, "end_ms", int, path)
        bb = _need(a, "bbox", dict, path)
        x = _need(bb, "x", int, f"{path}.bbox")
        y = _need(bb, "y", int, f"{path}.bbox")
        w = _need(bb, "w", int, f"{path}.bbox")
        h = _need(bb, "h", int, f"{path}.bbox")
        if end_ms < start_ms:
            raise SchemaViolation(f"{path}: end_ms < start_ms")
        if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > width or y + h > height:
            raise SchemaViolation(f"{path}.bbox: outside video dimensions")
        key = (start_ms, aid)
        if prev_key is not None and key < prev_key:
            raise SchemaViolation(f"{path}: activities not sorted by (start_ms, id)")
        prev_key = key
        activities.append(Activity(id=aid, node_ids=(), bbox=BBox(x, y, w, h),
                                   start_ms=start_ms, end_ms=end_ms, shot_id=shot_id))
    return ActivityManifest(video=meta, shots=shots, activities=activities,
                            params=params, version=version)
