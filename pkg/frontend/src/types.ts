/** Shared manifest types, mirroring the JSON document served at /api/manifest. */

export interface BBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface VideoInfo {
  width: number;
  height: number;
  fps_num: number;
  fps_den: number;
  duration_ms: number;
}

export interface Shot {
  start_ms: number;
  end_ms: number;
}

export interface Activity {
  id: number;
  shot: number;
  start_ms: number;
  end_ms: number;
  bbox: BBox;
}

export interface Manifest {
  version: number;
  video: VideoInfo;
  shots: Shot[];
  params: Record<string, unknown>;
  activities: Activity[];
}

/** Axis-aligned source rectangle currently shown in the viewport. */
export interface ViewRect {
  x: number;
  y: number;
  w: number;
  h: number;
}
