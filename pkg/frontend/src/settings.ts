/**
 * Highlight and magnification settings: defaults, per-field validation,
 * atomic patch application, and persistence (localStorage + JSON export/import).
 */

export type HighlightShape = "box" | "circle";
export type HighlightAnimation = "none" | "size_variation";
export type PointerStyle = "none" | "cursor" | "hand";
export type RegionFilter = "none" | "invert" | "thicken";

export interface HighlightSettings {
  fill_color: string;
  fill_opacity: number;
  border_color: string;
  border_width_px: number;
  shape: HighlightShape;
  scale: number;
  animation: HighlightAnimation;
  animation_speed: number;
  pointer: PointerStyle;
  pointer_scale: number;
  filter: RegionFilter;
}

export interface ZoomSettings {
  strength: number;
  speed: number;
  pause_on_zoom: boolean;
  sharpness: number;
  filter: RegionFilter;
}

export interface Settings {
  highlight: HighlightSettings;
  zoom: ZoomSettings;
}

export function defaultHighlightSettings(): HighlightSettings {
  return {
    fill_color: "yellow",
    fill_opacity: 0.15,
    border_color: "red",
    border_width_px: 4,
    shape: "box",
    scale: 1.0,
    animation: "none",
    animation_speed: 1.0,
    pointer: "hand",
    pointer_scale: 1.0,
    filter: "none",
  };
}

export function defaultZoomSettings(): ZoomSettings {
  return {
    strength: 0.5,
    speed: 1.0,
    pause_on_zoom: false,
    sharpness: 1.0,
    filter: "none",
  };
}

export function defaultSettings(): Settings {
  return { highlight: defaultHighlightSettings(), zoom: defaultZoomSettings() };
}

type Validator = (v: unknown) => string | null;

const isColor: Validator = (v) =>
  typeof v === "string" && v.length > 0 ? null : "must be a non-empty color string";
const inUnit: Validator = (v) =>
  typeof v === "number" && Number.isFinite(v) && v >= 0 && v <= 1 ? null : "must be in [0, 1]";
const nonNegative: Validator = (v) =>
  typeof v === "number" && Number.isFinite(v) && v >= 0 ? null : "must be >= 0";
const positive: Validator = (v) =>
  typeof v === "number" && Number.isFinite(v) && v > 0 ? null : "must be > 0";
const isBool: Validator = (v) => (typeof v === "boolean" ? null : "must be true or false");
const oneOf =
  (options: readonly string[]): Validator =>
  (v) =>
    typeof v === "string" && options.includes(v) ? null : `must be one of ${options.join(", ")}`;

const FILTERS = ["none", "invert", "thicken"] as const;

const HIGHLIGHT_VALIDATORS: Record<keyof HighlightSettings, Validator> = {
  fill_color: isColor,
  fill_opacity: inUnit,
  border_color: isColor,
  border_width_px: nonNegative,
  shape: oneOf(["box", "circle"]),
  scale: positive,
  animation: oneOf(["none", "size_variation"]),
  animation_speed: positive,
  pointer: oneOf(["none", "cursor", "hand"]),
  pointer_scale: positive,
  filter: oneOf(FILTERS),
};

const ZOOM_VALIDATORS: Record<keyof ZoomSettings, Validator> = {
  strength: inUnit,
  speed: positive,
  pause_on_zoom: isBool,
  sharpness: nonNegative,
  filter: oneOf(FILTERS),
};

export interface SettingsPatch {
  highlight?: Partial<HighlightSettings>;
  zoom?: Partial<ZoomSettings>;
}

export interface PatchResult {
  settings: Settings;
  /** field path -> message for each rejected field; valid fields still apply */
  errors: Record<string, string>;
}

function applySection<T extends object>(
  current: T,
  patch: Partial<T> | undefined,
  validators: Record<keyof T, Validator>,
  prefix: string,
  errors: Record<string, string>,
): T {
  const next = { ...current };
  if (!patch) return next;
  for (const key of Object.keys(patch) as (keyof T)[]) {
    const validator = validators[key];
    if (!validator) {
      errors[`${prefix}.${String(key)}`] = "unknown field";
      continue;
    }
    const value = patch[key];
    const problem = validator(value);
    if (problem !== null) {
      errors[`${prefix}.${String(key)}`] = problem;
    } else {
      next[key] = value as T[keyof T];
    }
  }
  return next;
}

/** Apply a partial update; invalid fields are rejected individually. */
export function applySettings(current: Settings, patch: SettingsPatch): PatchResult {
  const errors: Record<string, string> = {};
  const highlight = applySection(current.highlight, patch.highlight, HIGHLIGHT_VALIDATORS, "highlight", errors);
  const zoom = applySection(current.zoom, patch.zoom, ZOOM_VALIDATORS, "zoom", errors);
  return { settings: { highlight, zoom }, errors };
}

/** Minimal storage facade so tests can substitute an in-memory store. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export const SETTINGS_KEY = "vguide.settings";

export function exportSettings(settings: Settings): string {
  return JSON.stringify(settings, null, 2);
}

export interface LoadResult {
  settings: Settings;
  /** non-blocking message when stored/imported data was missing fields or corrupt */
  notice: string | null;
}

/** Parse a settings JSON document, falling back to defaults per invalid field. */
export function importSettings(json: string): LoadResult {
  let parsed: unknown;
  try {
    parsed = JSON.parse(json);
  } catch {
    return { settings: defaultSettings(), notice: "stored settings were unreadable; defaults restored" };
  }
  if (typeof parsed !== "object" || parsed === null) {
    return { settings: defaultSettings(), notice: "stored settings were unreadable; defaults restored" };
  }
  const doc = parsed as SettingsPatch;
  const { settings, errors } = applySettings(defaultSettings(), {
    highlight: doc.highlight,
    zoom: doc.zoom,
  });
  const bad = Object.keys(errors);
  const notice = bad.length > 0 ? `ignored invalid settings: ${bad.join(", ")}` : null;
  return { settings, notice };
}

export function persistSettings(settings: Settings, store: KeyValueStore): void {
  store.setItem(SETTINGS_KEY, exportSettings(settings));
}

export function loadSettings(store: KeyValueStore): LoadResult {
  const raw = store.getItem(SETTINGS_KEY);
  if (raw === null) {
    return { settings: defaultSettings(), notice: null };
  }
  return importSettings(raw);
}
