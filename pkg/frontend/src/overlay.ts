/**
 * Highlight overlay: turns the current activity and highlight settings into
 * plain drawing commands, leaving canvas work to the caller. No highlight is
 * drawn while magnified. Before an activity starts (during the lead window)
 * the highlight renders at half its configured opacity to read as "upcoming".
 */

import type { Activity, BBox } from "./types.js";
import type { HighlightSettings } from "./settings.js";
import type { PlayerState } from "./zoom.js";

export interface ShapeCommand {
  kind: "rect" | "ellipse";
  x: number;
  y: number;
  w: number;
  h: number;
  fill: { color: string; opacity: number };
  border: { color: string; width_px: number };
  /** overall multiplier applied to both fill and border alpha */
  alpha: number;
  filter: "none" | "invert" | "thicken";
}

export interface PointerCommand {
  kind: "pointer";
  style: "cursor" | "hand";
  /** anchor point: the highlight's bottom-right corner, pointing inward */
  x: number;
  y: number;
  scale: number;
  alpha: number;
}

export type OverlayCommand = ShapeCommand | PointerCommand;

export const ANIMATION_MIN_SCALE = 1.0;
export const ANIMATION_MAX_SCALE = 1.12;

/** Oscillation factor in [1.0, 1.12] at 1 Hz times animation_speed. */
export function sizeVariation(tMs: number, speed: number): number {
  const mid = (ANIMATION_MIN_SCALE + ANIMATION_MAX_SCALE) / 2;
  const amp = (ANIMATION_MAX_SCALE - ANIMATION_MIN_SCALE) / 2;
  return mid + amp * Math.sin(2 * Math.PI * speed * (tMs / 1000));
}

function scaleAboutCenter(b: BBox, factor: number): BBox {
  const cx = b.x + b.w / 2;
  const cy = b.y + b.h / 2;
  const w = b.w * factor;
  const h = b.h * factor;
  return { x: cx - w / 2, y: cy - h / 2, w, h };
}

export function renderOverlay(
  state: PlayerState,
  hs: HighlightSettings,
  activity: Activity,
): OverlayCommand[] {
  if (state.zoomed) return [];

  let factor = hs.scale;
  if (hs.animation === "size_variation") {
    factor *= sizeVariation(state.t_ms, hs.animation_speed);
  }
  const box = scaleAboutCenter(activity.bbox, factor);
  const alpha = state.t_ms < activity.start_ms ? 0.5 : 1.0;

  const commands: OverlayCommand[] = [
    {
      kind: hs.shape === "circle" ? "ellipse" : "rect",
      x: box.x,
      y: box.y,
      w: box.w,
      h: box.h,
      fill: { color: hs.fill_color, opacity: hs.fill_opacity },
      border: { color: hs.border_color, width_px: hs.border_width_px },
      alpha,
      filter: hs.filter,
    },
  ];
  if (hs.pointer !== "none") {
    commands.push({
      kind: "pointer",
      style: hs.pointer,
      x: box.x + box.w,
      y: box.y + box.h,
      scale: hs.pointer_scale,
      alpha,
    });
  }
  return commands;
}
