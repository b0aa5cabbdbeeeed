"""Region-of-change graph: Hu-moment weights, transient merging, activity extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .detect import BBox, RegionOfChange
from .errors import DegenerateRegion

LOG_FLOOR = 1e-30


@dataclass(frozen=True)
class GraphParams:
    temporal_ms: int = 3000
    spatial_frac: float = 0.05
    merge_hu: float = 0.5
    same_pos_iou: float = 0.6


@dataclass(frozen=True)
class HuSignature:
    h: tuple  # 7 raw Hu invariants
    m: tuple  # 7 log-scaled values sign(h)*log10(max(|h|, 1e-30))


@dataclass
class RocGraph:
    nodes: list[RegionOfChange]
    edges: list[tuple[int, int, float]]  # (i, j, dissimilarity), i < j
    frame_diag: float
    params: GraphParams
    signatures: list[HuSignature] = field(default_factory=list)


@dataclass(frozen=True)
class Activity:
    id: int
    node_ids: tuple
    bbox: BBox
    start_ms: int
    end_ms: int
    shot_id: int


def hu_signature(roc: RegionOfChange) -> HuSignature:
    return hu_from_mask(roc.mask_crop)


def hu_from_mask(mask: np.ndarray) -> HuSignature:
    """Hu's seven invariant moments of a binary mask's set pixels.

    Moments are computed over pixel coordinates of set pixels, then
    centralized, normalized (eta_pq = mu_pq / mu00^(1+(p+q)/2)), and
    combined per Hu's formulas.
    """
    ys, xs = np.nonzero(mask)
    n = ys.size
    if n == 0:
        raise DegenerateRegion("mask has no set pixels")
    x = xs.astype(np.float64)
    y = ys.astype(np.float64)
    xc = x.mean()
    yc = y.mean()
    dx = x - xc
    dy = y - yc

    def mu(p, q):
        return float(np.sum(dx**p * dy**q))

    mu00 = float(n)

    def eta(p, q):
        return mu(p, q) / mu00 ** (1 + (p + q) / 2)

    e20, e02, e11 = eta(2, 0), eta(0, 2), eta(1, 1)
    e30, e03 = eta(3, 0), eta(0, 3)
    e21, e12 = eta(2, 1), eta(1, 2)

    h1 = e20 + e02
    h2 = (e20 - e02) ** 2 + 4 * e11**2
    h3 = (e30 - 3 * e12) ** 2 + (3 * e21 - e03) ** 2
    h4 = (e30 + e12) ** 2 + (e21 + e03) ** 2
    h5 = ((e30 - 3 * e12) * (e30 + e12) * ((e30 + e12) ** 2 - 3 * (e21 + e03) ** 2)
          + (3 * e21 - e03) * (e21 + e03) * (3 * (e30 + e12) ** 2 - (e21 + e03) ** 2))
    h6 = ((e20 - e02) * ((e30 + e12) ** 2 - (e21 + e03) ** 2)
          + 4 * e11 * (e30 + e12) * (e21 + e03))
    h7 = ((3 * e21 - e03) * (e30 + e12) * ((e30 + e12) ** 2 - 3 * (e21 + e03) ** 2)
          - (e30 - 3 * e12) * (e21 + e03) * (3 * (e30 + e12) ** 2 - (e21 + e03) ** 2))

    h = (h1, h2, h3, h4, h5, h6, h7)
    m = tuple(_log_scale(v) for v in h)
    return HuSignature(h=h, m=m)


def _log_scale(v: float) -> float:
    if v > 0:
        return math.log10(max(v, LOG_FLOOR))
    if v < 0:
        return -math.log10(max(-v, LOG_FLOOR))
    return 0.0


def shape_dissimilarity(a: HuSignature, b: HuSignature) -> float:
    """L1 distance between log-scaled Hu signatures."""
    return float(sum(abs(ma - mb) for ma, mb in zip(a.m, b.m)))


def rect_distance(a: BBox, b: BBox) -> float:
    """Minimal Euclidean distance between two axis-aligned boxes; 0 when they intersect."""
    dx = max(0, max(a.x - (b.x + b.w), b.x - (a.x + a.w)))
    dy = max(0, max(a.y - (b.y + b.h), b.y - (a.y + a.h)))
    return math.hypot(dx, dy)


def bbox_iou(a: BBox, b: BBox) -> float:
    ix = max(0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    iy = max(0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = ix * iy
    if inter == 0:
        return 0.0
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


def build_graph(rocs: list[RegionOfChange], frame_diag: float,
                params: GraphParams = GraphParams()) -> RocGraph:
    """Connect regions that are both temporally and spatially close.

    Both bounds are strict: |dt| < temporal_ms and box distance
    < spatial_frac * frame_diag. Edge weight is the Hu-signature
    dissimilarity of the two regions.
    """
    sigs = [hu_signature(r) for r in rocs]
    spatial_bound = params.spatial_frac * frame_diag
    edges = []
    # nodes come pre-sorted by time, so a sliding window prunes far pairs
    for i in range(len(rocs)):
        for j in range(i + 1, len(rocs)):
            if rocs[j].t_ms - rocs[i].t_ms >= params.temporal_ms:
                break
            if rect_distance(rocs[i].bbox, rocs[j].bbox) < spatial_bound:
                edges.append((i, j, shape_dissimilarity(sigs[i], sigs[j])))
    return RocGraph(nodes=list(rocs), edges=edges, frame_diag=frame_diag,
                    params=params, signatures=sigs)


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def merge_transients(g: RocGraph) -> RocGraph:
    """Collapse transient ghosting (e.g. pointer trails) into single nodes.

    A node pair merges when all three hold: the nodes sit in consecutive
    segments, their boxes occupy the same position (IoU >= same_pos_iou),
    and their shapes agree (dissimilarity < merge_hu). Criteria are
    evaluated on the original nodes and merging is transitive, so a ghost
    that persists across several segments collapses in one pass. The
    merged node keeps the earliest timestamp, the union bbox, and the
    union mask; edges are rebuilt from the surviving nodes.
    """
    n = len(g.nodes)
    sigs = g.signatures or [hu_signature(r) for r in g.nodes]
    dsu = _DSU(n)
    order = sorted(range(n), key=lambda i: (g.nodes[i].seg_index, g.nodes[i].bbox.y, g.nodes[i].bbox.x))
    for ai in range(n):
        a = g.nodes[order[ai]]
        for bi in range(ai + 1, n):
            b = g.nodes[order[bi]]
            if b.seg_index - a.seg_index > 1:
                break
            if abs(b.seg_index - a.seg_index) != 1:
                continue
            if bbox_iou(a.bbox, b.bbox) < g.params.same_pos_iou:
                continue
            if shape_dissimilarity(sigs[order[ai]], sigs[order[bi]]) >= g.params.merge_hu:
                continue
            dsu.union(order[ai], order[bi])

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(dsu.find(i), []).append(i)
    if all(len(v) == 1 for v in groups.values()):
        return g

    merged = [_merge_group([g.nodes[i] for i in members]) for members in groups.values()]
    merged.sort(key=lambda r: (r.seg_index, r.bbox.y, r.bbox.x))
    return build_graph(merged, g.frame_diag, g.params)


def _merge_group(members: list[RegionOfChange]) -> RegionOfChange:
    if len(members) == 1:
        return members[0]
    bbox = members[0].bbox
    for m in members[1:]:
        bbox = bbox.union(m.bbox)
    mask = np.zeros((bbox.h, bbox.w), dtype=bool)
    for m in members:
        oy, ox = m.bbox.y - bbox.y, m.bbox.x - bbox.x
        mask[oy:oy + m.bbox.h, ox:ox + m.bbox.w] |= m.mask_crop
    first = min(members, key=lambda m: (m.seg_index, m.t_ms))
    return RegionOfChange(t_ms=first.t_ms, bbox=bbox, area_px=int(mask.sum()),
                          mask_crop=mask, shot_id=first.shot_id, seg_index=first.seg_index)


def extract_activities(g: RocGraph, segment_ms: int, shot_id: int | None = None) -> list[Activity]:
    """One activity per connected component of the graph.

    The activity box is the union of member boxes; its span runs from the
    earliest member timestamp to the latest plus one segment duration
    (the change was observed over that whole segment).
    """
    n = len(g.nodes)
    dsu = _DSU(n)
    for i, j, _ in g.edges:
        dsu.union(i, j)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(dsu.find(i), []).append(i)

    activities = []
    for members in comps.values():
        bbox = g.nodes[members[0]].bbox
        for i in members[1:]:
            bbox = bbox.union(g.nodes[i].bbox)
        ts = [g.nodes[i].t_ms for i in members]
        sid = shot_id if shot_id is not None else g.nodes[members[0]].shot_id
        activities.append(Activity(
            id=-1, node_ids=tuple(sorted(members)), bbox=bbox,
            start_ms=min(ts), end_ms=max(ts) + segment_ms, shot_id=sid))
    activities.sort(key=lambda a: (a.start_ms, a.bbox.y, a.bbox.x))
    return [Activity(id=k, node_ids=a.node_ids, bbox=a.bbox, start_ms=a.start_ms,
                     end_ms=a.end_ms, shot_id=a.shot_id) for k, a in enumerate(activities)]
