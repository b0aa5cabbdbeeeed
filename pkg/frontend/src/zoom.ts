/**
 * Zoom state machine.
 *
 * Magnification maps strength to scale = 1 + 3 * strength, so the default
 * strength 0.5 gives 2.5x and the ceiling is 4x. The view is a source-space
 * rectangle centered on the target activity, clamped to the frame, always
 * aspect-preserving. Target changes while zoomed animate over 600 ms / speed
 * with ease-in-out interpolation; with pause_on_zoom, playback auto-pauses
 * at most once per zoom-target change and resumes on play or zoom-out.
 */

import type { Activity, BBox, VideoInfo, ViewRect } from "./types.js";
import type { ZoomSettings } from "./settings.js";

export const TRANSITION_MS = 600;
export const STRENGTH_STEP = 0.05;

export type ZoomEvent =
  | { kind: "toggle_z" }
  | { kind: "arrow_up" }
  | { kind: "arrow_down" }
  | { kind: "new_activity"; id: number | null }
  | { kind: "play" }
  | { kind: "pause" }
  | { kind: "zoom_out" };

export interface Transition {
  from: ViewRect;
  to: ViewRect;
  start_ms: number;
  duration_ms: number;
}

export interface PlayerState {
  t_ms: number;
  playing: boolean;
  zoomed: boolean;
  active_id: number | null;
  /** activity the zoom view is (or was last) locked onto */
  target_id: number | null;
  /** settled view; during a transition, viewAt() interpolates toward it */
  view: ViewRect;
  transition: Transition | null;
  /** true when an auto-pause is armed for the next zoom-target change */
  pending_autopause: boolean;
  /** true while playback is paused by the auto-pause (not by the user) */
  auto_paused: boolean;
}

export function fullFrame(video: VideoInfo): ViewRect {
  return { x: 0, y: 0, w: video.width, h: video.height };
}

export function initialState(video: VideoInfo): PlayerState {
  return {
    t_ms: 0,
    playing: false,
    zoomed: false,
    active_id: null,
    target_id: null,
    view: fullFrame(video),
    transition: null,
    pending_autopause: true,
    auto_paused: false,
  };
}

export function zoomScale(strength: number): number {
  const s = Math.min(1, Math.max(0, strength));
  return 1 + 3 * s;
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

/** Aspect-preserving view of the frame at the given strength, centered as near
 *  (cx, cy) as the frame bounds allow. */
export function viewFor(video: VideoInfo, strength: number, cx: number, cy: number): ViewRect {
  const scale = zoomScale(strength);
  const w = video.width / scale;
  const h = video.height / scale;
  const x = clamp(cx - w / 2, 0, video.width - w);
  const y = clamp(cy - h / 2, 0, video.height - h);
  return { x, y, w, h };
}

function bboxCenter(b: BBox): { cx: number; cy: number } {
  return { cx: b.x + b.w / 2, cy: b.y + b.h / 2 };
}

function easeInOut(p: number): number {
  return p < 0.5 ? 2 * p * p : 1 - 2 * (1 - p) * (1 - p);
}

/** View rectangle to display at wall/clock time nowMs, sampling any running
 *  transition with ease-in-out. */
export function viewAt(state: PlayerState, nowMs: number): ViewRect {
  const tr = state.transition;
  if (!tr || tr.duration_ms <= 0) return state.view;
  const p = (nowMs - tr.start_ms) / tr.duration_ms;
  if (p <= 0) return tr.from;
  if (p >= 1) return tr.to;
  const e = easeInOut(p);
  return {
    x: tr.from.x + (tr.to.x - tr.from.x) * e,
    y: tr.from.y + (tr.to.y - tr.from.y) * e,
    w: tr.from.w + (tr.to.w - tr.from.w) * e,
    h: tr.from.h + (tr.to.h - tr.from.h) * e,
  };
}

export interface ZoomStepResult {
  state: PlayerState;
  zoom: ZoomSettings;
}

function findActivity(activities: readonly Activity[], id: number | null): Activity | null {
  if (id === null) return null;
  return activities.find((a) => a.id === id) ?? null;
}

/** Active activity if any, else the most recently started past activity. */
function zoomTarget(activities: readonly Activity[], state: PlayerState): Activity | null {
  const active = findActivity(activities, state.active_id);
  if (active) return active;
  let best: Activity | null = null;
  for (const a of activities) {
    if (a.start_ms <= state.t_ms && (best === null || a.start_ms > best.start_ms)) {
      best = a;
    }
  }
  return best;
}

function targetView(video: VideoInfo, strength: number, target: Activity | null): ViewRect {
  const { cx, cy } = target
    ? bboxCenter(target.bbox)
    : { cx: video.width / 2, cy: video.height / 2 };
  return viewFor(video, strength, cx, cy);
}

/** Fire the per-target auto-pause if armed, marking it consumed. */
function autopause(state: PlayerState, zs: ZoomSettings): void {
  if (!zs.pause_on_zoom || !state.pending_autopause) return;
  if (state.playing) {
    state.playing = false;
    state.auto_paused = true;
  }
  state.pending_autopause = false;
}

function leaveZoom(state: PlayerState, video: VideoInfo): void {
  state.zoomed = false;
  state.view = fullFrame(video);
  state.transition = null;
  if (state.auto_paused) {
    state.playing = true;
    state.auto_paused = false;
  }
  state.pending_autopause = true;
}

export function zoomStep(
  event: ZoomEvent,
  state: PlayerState,
  zs: ZoomSettings,
  video: VideoInfo,
  activities: readonly Activity[],
): ZoomStepResult {
  const next: PlayerState = { ...state };
  let zoom: ZoomSettings = zs;

  switch (event.kind) {
    case "toggle_z": {
      if (next.zoomed) {
        leaveZoom(next, video);
      } else {
        const target = zoomTarget(activities, next);
        next.zoomed = true;
        next.target_id = target ? target.id : null;
        next.view = targetView(video, zoom.strength, target);
        next.transition = null;
        autopause(next, zoom);
      }
      break;
    }
    case "zoom_out": {
      if (next.zoomed) leaveZoom(next, video);
      break;
    }
    case "arrow_up":
    case "arrow_down": {
      const delta = event.kind === "arrow_up" ? STRENGTH_STEP : -STRENGTH_STEP;
      const strength = clamp(zoom.strength + delta, 0, 1);
      zoom = { ...zoom, strength };
      if (next.zoomed) {
        const target = findActivity(activities, next.target_id);
        next.view = targetView(video, strength, target);
        next.transition = null;
      }
      break;
    }
    case "new_activity": {
      next.active_id = event.id;
      if (next.zoomed && event.id !== null && event.id !== next.target_id) {
        const target = findActivity(activities, event.id);
        const from = viewAt(next, next.t_ms);
        const to = targetView(video, zoom.strength, target);
        next.target_id = event.id;
        next.view = to;
        next.transition = {
          from,
          to,
          start_ms: next.t_ms,
          duration_ms: TRANSITION_MS / zoom.speed,
        };
        next.pending_autopause = zs.pause_on_zoom ? true : next.pending_autopause;
        autopause(next, zoom);
      }
      break;
    }
    case "play": {
      next.playing = true;
      next.auto_paused = false;
      next.pending_autopause = true;
      break;
    }
    case "pause": {
      next.playing = false;
      next.auto_paused = false;
      break;
    }
  }

  return { state: next, zoom };
}
