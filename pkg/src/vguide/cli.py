"""Command line entry point: detect | synth | eval | serve."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np
from PIL import Image

from . import pipeline, syntheval
from .errors import SchemaViolation, ScriptInvalid, TimelineMismatch, VguideError
from .ingest import open_frame_source
from .manifest import parse_manifest, write_manifest
from .pipeline import DetectConfig

EXIT_OK = 0
EXIT_BELOW_THRESHOLD = 1
EXIT_BAD_INPUT = 2
EXIT_BAD_FLAG = 3


def _setup_logging():
    level = {"debug": logging.DEBUG, "info": logging.INFO, "warn": logging.WARNING}.get(
        os.environ.get("VG_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vguide",
                                description="Detect instructor activity in presentation videos "
                                            "and serve the accessible player.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect activities and write a manifest")
    d.add_argument("input", help="Y4M file or frame directory")
    d.add_argument("--out", default="manifest.json", help="manifest output path (default: %(default)s)")
    d.add_argument("--format", choices=["auto", "y4m", "image_dir"], default="auto",
                   help="input format (default: %(default)s)")
    d.add_argument("--diff-tau", type=int, default=25,
                   help="grayscale difference threshold 0..255 (default: %(default)s)")
    d.add_argument("--min-area-pct", type=float, default=0.01,
                   help="minimum region area, percent of frame area (default: %(default)s%%)")
    d.add_argument("--temporal-s", type=float, default=3.0,
                   help="temporal closeness bound in seconds (default: %(default)s)")
    d.add_argument("--spatial-pct", type=float, default=5.0,
                   help="spatial closeness bound, percent of frame diagonal (default: %(default)s%%)")
    d.add_argument("--hu-merge", type=float, default=0.5,
                   help="shape dissimilarity threshold for merging (default: %(default)s)")
    d.add_argument("--same-pos-iou", type=float, default=0.6,
                   help="bbox IoU treated as same position (default: %(default)s)")
    d.add_argument("--cut-threshold", type=float, default=0.30,
                   help="shot cut threshold, normalized luma diff (default: %(default)s)")
    d.add_argument("--min-shot-frames", type=int, default=10,
                   help="minimum frames per shot (default: %(default)s)")
    d.add_argument("--min-duration-ms", type=int, default=0,
                   help="drop activities shorter than this (default: %(default)s)")
    d.add_argument("--worker-count", type=int, default=0,
                   help="segment workers, 0 = auto (default: %(default)s)")
    d.add_argument("--no-merge", action="store_true",
                   help="disable transient-node merging (debugging)")
    d.add_argument("--dump-graph", metavar="FILE", help="write the RoC graphs as JSON")
    d.add_argument("--dump-masks", metavar="DIR", help="write per-segment masks as PGM")

    s = sub.add_parser("synth", help="render a scenario script to frames + ground truth")
    s.add_argument("script", help="scenario script JSON")
    s.add_argument("--out", required=True, help="output directory")

    e = sub.add_parser("eval", help="score a manifest against ground truth")
    e.add_argument("pred", help="manifest JSON")
    e.add_argument("gt", help="ground truth JSON")
    e.add_argument("--t-iou", type=float, default=0.5,
                   help="temporal IoU threshold (default: %(default)s)")
    e.add_argument("--s-iou", type=float, default=0.3,
                   help="spatial IoU threshold (default: %(default)s)")
    e.add_argument("--min-f1", type=float, default=0.0,
                   help="exit nonzero when f1 is below this (default: %(default)s)")
    e.add_argument("--report", metavar="FILE", help="also write the report JSON here")

    v = sub.add_parser("serve", help="serve the player, manifest, and video")
    v.add_argument("--manifest", required=True, help="manifest JSON path")
    v.add_argument("--video", required=True, help="video file to serve at /media/video")
    v.add_argument("--assets", default=None,
                   help="player asset directory served at / (default: frontend/dist if present)")
    v.add_argument("--port", type=int, default=8000, help="port (default: %(default)s)")
    v.add_argument("--host", default="127.0.0.1", help="bind address (default: %(default)s)")
    return p


def cmd_detect(args) -> int:
    try:
        config = DetectConfig(
            diff_tau=args.diff_tau,
            min_area_frac=args.min_area_pct / 100.0,
            temporal_ms=round(args.temporal_s * 1000),
            spatial_frac=args.spatial_pct / 100.0,
            merge_hu=args.hu_merge,
            same_pos_iou=args.same_pos_iou,
            cut_threshold=args.cut_threshold,
            min_shot_frames=args.min_shot_frames,
            min_duration_ms=args.min_duration_ms,
            worker_count=args.worker_count,
            merge_enabled=not args.no_merge,
        )
        config.validate()
    except ValueError as exc:
        print(f"vguide detect: invalid flag value: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAG
    try:
        source = open_frame_source(args.input, args.format)
    except VguideError as exc:
        print(f"vguide detect: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    manifest, graphs = pipeline.detect_activities(source, config, dump_masks=args.dump_masks,
                                                  return_graphs=True)
    if args.dump_graph:
        with open(args.dump_graph, "w") as fh:
            json.dump(pipeline.graphs_to_dict(graphs), fh, indent=2, sort_keys=True)
    with open(args.out, "wb") as fh:
        fh.write(write_manifest(manifest))
    print(f"wrote {args.out}: {len(manifest.activities)} activities "
          f"in {len(manifest.shots)} shot(s)")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        with open(args.script) as fh:
            doc = json.load(fh)
        source, gt = syntheval.render_scenario(doc)
    except (OSError, json.JSONDecodeError, ScriptInvalid) as exc:
        print(f"vguide synth: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    os.makedirs(args.out, exist_ok=True)
    for frame in source:
        Image.fromarray(np.asarray(frame.pixels)).save(
            os.path.join(args.out, f"frame_{frame.index:06d}.png"))
    with open(os.path.join(args.out, "meta.json"), "w") as fh:
        json.dump({"fps_num": source.meta.fps.numerator,
                   "fps_den": source.meta.fps.denominator}, fh)
    with open(os.path.join(args.out, "gt.json"), "w") as fh:
        json.dump(syntheval.ground_truth_to_dict(gt), fh, indent=2, sort_keys=True)
    print(f"wrote {source.meta.frame_count} frames and gt.json under {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        with open(args.pred, "rb") as fh:
            pred = parse_manifest(fh.read())
        with open(args.gt) as fh:
            gt = syntheval.ground_truth_from_dict(json.load(fh))
        report = syntheval.evaluate(pred, gt, t_iou=args.t_iou, s_iou=args.s_iou)
    except (OSError, json.JSONDecodeError, SchemaViolation, TimelineMismatch) as exc:
        print(f"vguide eval: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    doc = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    print(doc)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(doc + "\n")
    return EXIT_OK if report.f1 >= args.min_f1 else EXIT_BELOW_THRESHOLD


def cmd_serve(args) -> int:
    from .server import make_server, serve_forever
    for path in (args.manifest, args.video):
        if not os.path.isfile(path):
            print(f"vguide serve: no such file: {path}", file=sys.stderr)
            return EXIT_BAD_INPUT
    assets = args.assets
    if assets is None and os.path.isdir("frontend/dist"):
        assets = "frontend/dist"
    try:
        server = make_server(args.manifest, args.video, assets, args.port, args.host)
    except OSError as exc:
        print(f"vguide serve: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    serve_forever(server)
    return EXIT_OK


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    handler = {"detect": cmd_detect, "synth": cmd_synth,
               "eval": cmd_eval, "serve": cmd_serve}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
