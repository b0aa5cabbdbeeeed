"""Frame ingestion: Y4M and image-directory sources, luma conversion, shot splitting.

Sources are re-iterable: each call to __iter__ re-opens the underlying
files, so the pipeline can make multiple passes without buffering frames.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np
from PIL import Image

from .errors import DimensionMismatch, EmptySource, MissingMeta, UnsupportedFormat

DEFAULT_CUT_THRESHOLD = 0.30
DEFAULT_MIN_SHOT_FRAMES = 10


def timestamp_ms(index: int, fps: Fraction) -> int:
    """Millisecond timestamp of frame `index`: round(index * 1000 / fps), half up."""
    num = index * 1000 * fps.denominator
    den = fps.numerator
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class VideoMeta:
    fps: Fraction
    width: int
    height: int
    frame_count: int

    @property
    def duration_ms(self) -> int:
        return timestamp_ms(self.frame_count, self.fps)


@dataclass(frozen=True)
class Frame:
    index: int
    t_ms: int
    width: int
    height: int
    pixels: np.ndarray  # uint8, (H, W) grayscale or (H, W, 3) RGB


@dataclass(frozen=True)
class Shot:
    start_frame: int  # inclusive
    end_frame: int  # exclusive
    start_ms: int
    end_ms: int

    def __post_init__(self):
        assert self.start_frame < self.end_frame


class FrameSource:
    """Re-iterable sequence of frames with known metadata."""

    meta: VideoMeta

    def __iter__(self) -> Iterator[Frame]:  # pragma: no cover - interface
        raise NotImplementedError


class ArraySource(FrameSource):
    """In-memory source over pre-built uint8 arrays (used by the renderer and tests)."""

    def __init__(self, frames: list[np.ndarray], fps: Fraction):
        if not frames:
            raise EmptySource("no frames")
        h, w = frames[0].shape[:2]
        for f in frames[1:]:
            if f.shape[:2] != (h, w):
                raise DimensionMismatch("frame sizes differ mid-stream")
        self._frames = frames
        self.meta = VideoMeta(fps=Fraction(fps), width=w, height=h, frame_count=len(frames))

    def __iter__(self) -> Iterator[Frame]:
        for i, px in enumerate(self._frames):
            yield Frame(index=i, t_ms=timestamp_ms(i, self.meta.fps),
                        width=self.meta.width, height=self.meta.height, pixels=px)


class Y4MSource(FrameSource):
    """Planar YUV4MPEG2 reader, 4:2:0 and mono only.

    Chroma is discarded at decode time: every downstream stage works on
    luma, and the Y' plane already is the BT.601 luma signal.
    """

    def __init__(self, path: str):
        self.path = path
        with open(path, "rb") as fh:
            header = fh.readline()
        if not header.startswith(b"YUV4MPEG2"):
            raise UnsupportedFormat(f"{path}: not a YUV4MPEG2 stream")
        width = height = None
        fps = None
        chroma = "420"  # y4m default when no C tag present
        for token in header.decode("ascii", "replace").split()[1:]:
            tag, val = token[0], token[1:]
            if tag == "W":
                width = int(val)
            elif tag == "H":
                height = int(val)
            elif tag == "F":
                num, den = val.split(":")
                fps = Fraction(int(num), int(den))
            elif tag == "C":
                chroma = val
        if width is None or height is None or fps is None or fps <= 0:
            raise UnsupportedFormat(f"{path}: incomplete YUV4MPEG2 header")
        if chroma.startswith("420"):
            self._chroma_size = (width // 2) * (height // 2) * 2
        elif chroma == "mono":
            self._chroma_size = 0
        else:
            raise UnsupportedFormat(f"{path}: unsupported chroma mode C{chroma}")
        self._header_len = len(header)
        frame_bytes = width * height + self._chroma_size
        count = 0
        size = os.path.getsize(path)
        # Frame marker lines may carry parameters, so count them by scanning.
        with open(path, "rb") as fh:
            fh.seek(self._header_len)
            while True:
                marker = fh.readline()
                if not marker:
                    break
                if not marker.startswith(b"FRAME"):
                    raise UnsupportedFormat(f"{path}: bad frame marker at frame {count}")
                fh.seek(frame_bytes, os.SEEK_CUR)
                count += 1
        self._frame_bytes = frame_bytes
        self.meta = VideoMeta(fps=fps, width=width, height=height, frame_count=count)

    def __iter__(self) -> Iterator[Frame]:
        w, h = self.meta.width, self.meta.height
        with open(self.path, "rb") as fh:
            fh.seek(self._header_len)
            index = 0
            while True:
                marker = fh.readline()
                if not marker:
                    break
                y = np.frombuffer(fh.read(w * h), dtype=np.uint8).reshape(h, w)
                fh.seek(self._chroma_size, os.SEEK_CUR)
                yield Frame(index=index, t_ms=timestamp_ms(index, self.meta.fps),
                            width=w, height=h, pixels=y)
                index += 1


_FRAME_NAME = re.compile(r"frame_(\d{6})\.(png|ppm|pgm)$")


class ImageDirSource(FrameSource):
    """Directory of frame_%06d images plus a meta.json declaring fps."""

    def __init__(self, path: str):
        meta_path = os.path.join(path, "meta.json")
        if not os.path.isfile(meta_path):
            raise MissingMeta(f"{path}: meta.json with fps is required")
        with open(meta_path) as fh:
            doc = json.load(fh)
        if "fps_num" not in doc:
            raise MissingMeta(f"{meta_path}: fps_num missing")
        fps = Fraction(int(doc["fps_num"]), int(doc.get("fps_den", 1)))
        names = {}
        for name in os.listdir(path):
            m = _FRAME_NAME.match(name)
            if m:
                names[int(m.group(1))] = name
        if not names:
            raise EmptySource(f"{path}: no frame_%06d images")
        self._files = [os.path.join(path, names[i]) for i in sorted(names)]
        if sorted(names) != list(range(len(names))):
            raise UnsupportedFormat(f"{path}: frame numbering has gaps")
        first = _load_image(self._files[0])
        h, w = first.shape[:2]
        self.meta = VideoMeta(fps=fps, width=w, height=h, frame_count=len(self._files))

    def __iter__(self) -> Iterator[Frame]:
        w, h = self.meta.width, self.meta.height
        for i, fpath in enumerate(self._files):
            px = _load_image(fpath)
            if px.shape[:2] != (h, w):
                raise DimensionMismatch(f"{fpath}: {px.shape[1]}x{px.shape[0]} != {w}x{h}")
            yield Frame(index=i, t_ms=timestamp_ms(i, self.meta.fps),
                        width=w, height=h, pixels=px)


def _load_image(path: str) -> np.ndarray:
    img = Image.open(path)
    if img.mode not in ("L", "RGB"):
        img = img.convert("RGB")
    return np.asarray(img)


def open_frame_source(path: str, format_hint: str = "auto") -> FrameSource:
    if not os.path.exists(path):
        raise UnsupportedFormat(f"{path}: no such file or directory")
    if format_hint == "auto":
        format_hint = "image_dir" if os.path.isdir(path) else "y4m"
    if format_hint == "y4m":
        return Y4MSource(path)
    if format_hint == "image_dir":
        return ImageDirSource(path)
    raise UnsupportedFormat(f"unknown format hint {format_hint!r}")


def luma_of(frame: Frame) -> np.ndarray:
    """BT.601 luma, uint8 (H, W). Identity for already-grayscale frames."""
    px = frame.pixels
    if px.ndim == 2:
        return px
    y = px[..., 0] * 0.299 + px[..., 1] * 0.587 + px[..., 2] * 0.114
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def detect_shots(source: FrameSource,
                 cut_threshold: float = DEFAULT_CUT_THRESHOLD,
                 min_shot_frames: int = DEFAULT_MIN_SHOT_FRAMES) -> list[Shot]:
    """Split a frame sequence at content cuts.

    A boundary before frame i needs mean(|luma_i - luma_{i-1}|)/255 above
    cut_threshold, a current shot of at least min_shot_frames, and no cut
    candidate immediately before it (a run of consecutive candidates is
    flicker, not a cut). The final shot may be shorter than the minimum.
    """
    fps = source.meta.fps
    n = source.meta.frame_count
    if n == 0:
        raise EmptySource("source yields no frames")
    candidates = np.zeros(n, dtype=bool)
    prev = None
    for frame in source:
        cur = luma_of(frame).astype(np.int16)
        if prev is not None:
            score = float(np.mean(np.abs(cur - prev))) / 255.0
            candidates[frame.index] = score > cut_threshold
        prev = cur

    boundaries = [0]
    for i in range(1, n):
        if candidates[i] and not candidates[i - 1] and i - boundaries[-1] >= min_shot_frames:
            boundaries.append(i)
    boundaries.append(n)
    return [
        Shot(start_frame=a, end_frame=b,
             start_ms=timestamp_ms(a, fps), end_ms=timestamp_ms(b, fps))
        for a, b in zip(boundaries, boundaries[1:])
    ]
