"""Instructor-activity detection for presentation videos, plus the player contract."""

from .detect import BBox, RegionOfChange, diff_mask, extract_regions, partition_segments
from .ingest import Frame, Shot, VideoMeta, detect_shots, luma_of, open_frame_source
from .manifest import (ActivityManifest, SelectionQuery, build_manifest, parse_manifest,
                       select_active, write_manifest)
from .pipeline import DetectConfig, detect_activities
from .rocgraph import (Activity, GraphParams, HuSignature, RocGraph, build_graph,
                       extract_activities, hu_signature, merge_transients,
                       shape_dissimilarity)
from .syntheval import EvalReport, GroundTruth, evaluate, render_scenario

__all__ = [
    "Activity", "ActivityManifest", "BBox", "DetectConfig", "EvalReport", "Frame",
    "GraphParams", "GroundTruth", "HuSignature", "RegionOfChange", "RocGraph",
    "SelectionQuery", "Shot", "VideoMeta", "build_graph", "build_manifest",
    "detect_activities", "detect_shots", "diff_mask", "evaluate", "extract_activities",
    "extract_regions", "hu_signature", "luma_of", "merge_transients",
    "open_frame_source", "parse_manifest", "partition_segments", "render_scenario",
    "select_active", "shape_dissimilarity", "write_manifest",
]
