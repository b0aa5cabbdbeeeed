"""Segment partitioning, endpoint differencing, and region-of-change extraction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch
from .ingest import Shot, timestamp_ms

DEFAULT_DIFF_TAU = 25
DEFAULT_MIN_AREA_FRAC = 0.0001  # 0.01% of the frame area

# 8-connectivity for region labeling
_STRUCT8 = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class SegmentSpan:
    shot_id: int
    seg_index: int
    first_frame: int  # inclusive
    last_frame: int  # inclusive
    t_ms: int
    n_frames: int


@dataclass(frozen=True)
class BBox:
    x: int
    y: int
    w: int
    h: int

    def union(self, other: "BBox") -> "BBox":
        x0 = min(self.x, other.x)
        y0 = min(self.y, other.y)
        x1 = max(self.x + self.w, other.x + other.w)
        y1 = max(self.y + self.h, other.y + other.h)
        return BBox(x0, y0, x1 - x0, y1 - y0)


@dataclass(frozen=True)
class RegionOfChange:
    t_ms: int
    bbox: BBox
    area_px: int
    mask_crop: np.ndarray  # bool, (bbox.h, bbox.w)
    shot_id: int
    seg_index: int


def segment_length(fps: Fraction) -> int:
    """Frames per segment: up to a third of a second, never fewer than 2."""
    return max(2, fps.numerator // (3 * fps.denominator))


def segment_duration_ms(fps: Fraction) -> int:
    return timestamp_ms(segment_length(fps), Fraction(fps))


def partition_segments(shot: Shot, fps: Fraction, shot_id: int = 0) -> list[SegmentSpan]:
    """Chop a shot into consecutive fixed-length segments.

    A trailing remainder of at least 2 frames becomes a final short
    segment; a 1-frame remainder is dropped (no pair to difference).
    """
    fps = Fraction(fps)
    length = segment_length(fps)
    spans = []
    start = shot.start_frame
    seg_index = 0
    while shot.end_frame - start >= 2:
        end = min(start + length, shot.end_frame)  # exclusive
        if end - start < 2:
            break
        spans.append(SegmentSpan(
            shot_id=shot_id, seg_index=seg_index,
            first_frame=start, last_frame=end - 1,
            t_ms=timestamp_ms(start, fps), n_frames=end - start))
        start = end
        seg_index += 1
    return spans


def diff_mask(first: np.ndarray, last: np.ndarray, tau: int = DEFAULT_DIFF_TAU) -> np.ndarray:
    """Per-pixel |last - first| > tau over two luma planes."""
    if first.shape != last.shape:
        raise DimensionMismatch(f"{first.shape} vs {last.shape}")
    return np.abs(last.astype(np.int16) - first.astype(np.int16)) > tau


def extract_regions(mask: np.ndarray, t_ms: int, min_area_frac: float = DEFAULT_MIN_AREA_FRAC,
                    shot_id: int = 0, seg_index: int = 0) -> list[RegionOfChange]:
    """8-connected regions of set pixels, with small regions filtered out.

    Regions whose pixel count is <= min_area_frac * frame_area are noise
    and dropped. Survivors come back with tight bboxes, ordered by the
    bbox top-left (y, then x).
    """
    frame_area = mask.shape[0] * mask.shape[1]
    cutoff = min_area_frac * frame_area
    labels, n = ndimage.label(mask, structure=_STRUCT8)
    if n == 0:
        return []
    areas = np.bincount(labels.ravel())
    regions = []
    for label_id, slc in enumerate(ndimage.find_objects(labels), start=1):
        area = int(areas[label_id])
        if area <= cutoff:
            continue
        ys, xs = slc
        crop = labels[slc] == label_id
        regions.append(RegionOfChange(
            t_ms=t_ms,
            bbox=BBox(x=int(xs.start), y=int(ys.start),
                      w=int(xs.stop - xs.start), h=int(ys.stop - ys.start)),
            area_px=area, mask_crop=crop, shot_id=shot_id, seg_index=seg_index))
    regions.sort(key=lambda r: (r.bbox.y, r.bbox.x))
    return regions
