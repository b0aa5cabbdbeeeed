"""End-to-end detection: frames in, activity manifest out."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import detect, ingest, rocgraph
from .ingest import FrameSource, Shot, luma_of
from .manifest import ActivityManifest, build_manifest
from .rocgraph import Activity, GraphParams

log = logging.getLogger("vguide")


@dataclass(frozen=True)
class DetectConfig:
    diff_tau: int = detect.DEFAULT_DIFF_TAU
    min_area_frac: float = detect.DEFAULT_MIN_AREA_FRAC
    temporal_ms: int = 3000
    spatial_frac: float = 0.05
    merge_hu: float = 0.5
    same_pos_iou: float = 0.6
    cut_threshold: float = ingest.DEFAULT_CUT_THRESHOLD
    min_shot_frames: int = ingest.DEFAULT_MIN_SHOT_FRAMES
    min_duration_ms: int = 0
    worker_count: int = 0  # 0 = auto
    merge_enabled: bool = True

    def validate(self):
        checks = [
            ("diff_tau", 0 <= self.diff_tau <= 255, "0..255"),
            ("min_area_frac", 0 <= self.min_area_frac <= 1, "0..1"),
            ("temporal_ms", self.temporal_ms > 0, "> 0"),
            ("spatial_frac", 0 < self.spatial_frac <= 1, "(0, 1]"),
            ("merge_hu", self.merge_hu > 0, "> 0"),
            ("same_pos_iou", 0 < self.same_pos_iou <= 1, "(0, 1]"),
            ("cut_threshold", 0 <= self.cut_threshold <= 1, "0..1"),
            ("min_shot_frames", self.min_shot_frames >= 1, ">= 1"),
            ("min_duration_ms", self.min_duration_ms >= 0, ">= 0"),
            ("worker_count", self.worker_count >= 0, ">= 0"),
        ]
        for name, ok, rng in checks:
            if not ok:
                raise ValueError(f"{name}={getattr(self, name)} outside valid range {rng}")

    def graph_params(self) -> GraphParams:
        return GraphParams(temporal_ms=self.temporal_ms, spatial_frac=self.spatial_frac,
                           merge_hu=self.merge_hu, same_pos_iou=self.same_pos_iou)

    def echo(self) -> dict:
        doc = asdict(self)
        del doc["worker_count"]  # execution detail, not a detection parameter
        return doc


def _segment_lumas(source: FrameSource, spans: list[detect.SegmentSpan]) -> dict[int, np.ndarray]:
    """Collect luma planes of every segment endpoint frame in one pass."""
    wanted = set()
    for s in spans:
        wanted.add(s.first_frame)
        wanted.add(s.last_frame)
    lumas = {}
    for frame in source:
        if frame.index in wanted:
            lumas[frame.index] = luma_of(frame)
    return lumas


def detect_activities(source: FrameSource, config: DetectConfig = DetectConfig(),
                      dump_masks: str | None = None,
                      return_graphs: bool = False):
    """Run the full detection pipeline over a frame source.

    Returns an ActivityManifest (plus the per-shot merged graphs when
    return_graphs is set, for the --dump-graph path).
    """
    config.validate()
    meta = source.meta
    shots = ingest.detect_shots(source, cut_threshold=config.cut_threshold,
                                min_shot_frames=config.min_shot_frames)
    log.info("detected %d shot(s) over %d frames", len(shots), meta.frame_count)

    spans = []
    for shot_id, shot in enumerate(shots):
        spans.extend(detect.partition_segments(shot, meta.fps, shot_id=shot_id))
    lumas = _segment_lumas(source, spans)

    def regions_of(span: detect.SegmentSpan) -> list:
        mask = detect.diff_mask(lumas[span.first_frame], lumas[span.last_frame],
                                tau=config.diff_tau)
        if dump_masks:
            _write_pgm(os.path.join(dump_masks, f"shot{span.shot_id}_seg{span.seg_index:03d}.pgm"),
                       mask.astype(np.uint8) * 255)
        return detect.extract_regions(mask, t_ms=span.t_ms,
                                      min_area_frac=config.min_area_frac,
                                      shot_id=span.shot_id, seg_index=span.seg_index)

    workers = config.worker_count or min(8, os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_span = list(pool.map(regions_of, spans))
    else:
        per_span = [regions_of(span) for span in spans]

    rocs_by_shot: dict[int, list] = {}
    for span_regions in per_span:
        for r in span_regions:
            rocs_by_shot.setdefault(r.shot_id, []).append(r)

    frame_diag = math.hypot(meta.width, meta.height)
    segment_ms = detect.segment_duration_ms(meta.fps)
    params = config.graph_params()
    activities: list[Activity] = []
    graphs = []
    for shot_id, shot in enumerate(shots):
        rocs = rocs_by_shot.get(shot_id, [])
        rocs.sort(key=lambda r: (r.seg_index, r.bbox.y, r.bbox.x))
        g = rocgraph.build_graph(rocs, frame_diag, params)
        if config.merge_enabled:
            g = rocgraph.merge_transients(g)
        graphs.append(g)
        for a in rocgraph.extract_activities(g, segment_ms, shot_id=shot_id):
            # keep the span inside the shot: the last segment may be short
            end = min(a.end_ms, shot.end_ms)
            activities.append(Activity(id=a.id, node_ids=a.node_ids, bbox=a.bbox,
                                       start_ms=a.start_ms, end_ms=end, shot_id=shot_id))

    m = build_manifest(activities, meta, shots, params=config.echo(),
                       min_duration_ms=config.min_duration_ms)
    log.info("extracted %d activities", len(m.activities))
    return (m, graphs) if return_graphs else m


def graphs_to_dict(graphs) -> dict:
    return {"shots": [
        {"nodes": [{"id": i, "t_ms": n.t_ms, "area_px": n.area_px,
                    "bbox": {"x": n.bbox.x, "y": n.bbox.y, "w": n.bbox.w, "h": n.bbox.h}}
                   for i, n in enumerate(g.nodes)],
         "edges": [{"i": i, "j": j, "weight": round(w, 6)} for i, j, w in g.edges]}
        for g in graphs]}


def _write_pgm(path: str, img: np.ndarray):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
