import { describe, expect, it } from "vitest";
import {
  KeyValueStore,
  applySettings,
  defaultSettings,
  exportSettings,
  importSettings,
  loadSettings,
  persistSettings,
} from "../src/settings.js";

function memoryStore(): KeyValueStore & { map: Map<string, string> } {
  const map = new Map<string, string>();
  return {
    map,
    getItem: (k) => map.get(k) ?? null,
    setItem: (k, v) => void map.set(k, v),
  };
}

describe("defaults", () => {
  it("match the documented defaults", () => {
    const s = defaultSettings();
    expect(s.highlight).toEqual({
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
    });
    expect(s.zoom).toEqual({
      strength: 0.5,
      speed: 1.0,
      pause_on_zoom: false,
      sharpness: 1.0,
      filter: "none",
    });
  });
});

describe("applySettings", () => {
  it("applies valid fields immediately", () => {
    const { settings, errors } = applySettings(defaultSettings(), {
      highlight: { fill_color: "pink" },
    });
    expect(errors).toEqual({});
    expect(settings.highlight.fill_color).toBe("pink");
  });

  it("rejects invalid fields individually while applying the rest", () => {
    const { settings, errors } = applySettings(defaultSettings(), {
      highlight: { fill_opacity: 1.5, border_width_px: 6 },
      zoom: { strength: -0.1, speed: 2.0 },
    });
    expect(Object.keys(errors).sort()).toEqual(["highlight.fill_opacity", "zoom.strength"]);
    expect(settings.highlight.fill_opacity).toBe(0.15);
    expect(settings.highlight.border_width_px).toBe(6);
    expect(settings.zoom.strength).toBe(0.5);
    expect(settings.zoom.speed).toBe(2.0);
  });

  it("rejects invalid enum values and wrong types", () => {
    const { errors } = applySettings(defaultSettings(), {
      highlight: { shape: "triangle" as never, scale: 0 },
      zoom: { pause_on_zoom: "yes" as never },
    });
    expect(Object.keys(errors).sort()).toEqual([
      "highlight.scale",
      "highlight.shape",
      "zoom.pause_on_zoom",
    ]);
  });
});

describe("persistence", () => {
  it("round-trips through the store", () => {
    const store = memoryStore();
    const { settings } = applySettings(defaultSettings(), {
      highlight: { fill_color: "pink", shape: "circle" },
      zoom: { strength: 0.8, pause_on_zoom: true },
    });
    persistSettings(settings, store);
    const loaded = loadSettings(store);
    expect(loaded.settings).toEqual(settings);
    expect(loaded.notice).toBeNull();
  });

  it("returns defaults on a fresh profile", () => {
    const loaded = loadSettings(memoryStore());
    expect(loaded.settings).toEqual(defaultSettings());
    expect(loaded.notice).toBeNull();
  });

  it("falls back to defaults with a notice on corrupt state", () => {
    const store = memoryStore();
    store.setItem("vguide.settings", "{not json");
    const loaded = loadSettings(store);
    expect(loaded.settings).toEqual(defaultSettings());
    expect(loaded.notice).toBeTruthy();
  });

  it("keeps valid fields and notices invalid ones on partial corruption", () => {
    const store = memoryStore();
    store.setItem(
      "vguide.settings",
      JSON.stringify({ highlight: { fill_color: "lime", fill_opacity: 9 } }),
    );
    const loaded = loadSettings(store);
    expect(loaded.settings.highlight.fill_color).toBe("lime");
    expect(loaded.settings.highlight.fill_opacity).toBe(0.15);
    expect(loaded.notice).toContain("highlight.fill_opacity");
  });
});

describe("export/import", () => {
  it("round-trips as a JSON document", () => {
    const { settings } = applySettings(defaultSettings(), {
      highlight: { border_width_px: 2, pointer: "cursor" },
      zoom: { sharpness: 0.3 },
    });
    const imported = importSettings(exportSettings(settings));
    expect(imported.settings).toEqual(settings);
    expect(imported.notice).toBeNull();
  });
});
