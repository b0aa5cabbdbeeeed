/**
 * Browser entry point: wires the video element, overlay canvas, keyboard
 * shortcuts, and the settings panel together. All logic lives in the
 * framework-free modules; this file only does DOM plumbing.
 */

import type { Manifest } from "./types.js";
import {
  Settings,
  SettingsPatch,
  applySettings,
  loadSettings,
  persistSettings,
  exportSettings,
  importSettings,
  defaultSettings,
} from "./settings.js";
import { selectActive, DEFAULT_LEAD_MS } from "./selection.js";
import { PlayerState, ZoomEvent, initialState, viewAt, zoomStep } from "./zoom.js";
import { renderOverlay } from "./overlay.js";
import { invert, thicken } from "./filters.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function showNotice(text: string): void {
  const el = byId<HTMLDivElement>("notice");
  el.textContent = text;
  el.hidden = false;
  window.setTimeout(() => {
    el.hidden = true;
  }, 4000);
}

async function boot(): Promise<void> {
  const manifest: Manifest = await (await fetch("/api/manifest")).json();
  const video = byId<HTMLVideoElement>("video");
  const canvas = byId<HTMLCanvasElement>("overlay");
  const ctx = canvas.getContext("2d")!;
  video.src = "/media/video";
  canvas.width = manifest.video.width;
  canvas.height = manifest.video.height;

  const loaded = loadSettings(window.localStorage);
  if (loaded.notice) showNotice(loaded.notice);
  let settings: Settings = loaded.settings;
  let state: PlayerState = initialState(manifest.video);

  function patch(p: SettingsPatch): void {
    const result = applySettings(settings, p);
    settings = result.settings;
    const bad = Object.keys(result.errors);
    if (bad.length > 0) {
      showNotice(bad.map((k) => `${k}: ${result.errors[k]}`).join("; "));
    }
    persistSettings(settings, window.localStorage);
    bindPanel();
  }

  function step(event: ZoomEvent): void {
    const result = zoomStep(event, state, settings.zoom, manifest.video, manifest.activities);
    state = result.state;
    if (result.zoom !== settings.zoom) {
      settings = { ...settings, zoom: result.zoom };
      persistSettings(settings, window.localStorage);
      bindPanel();
    }
    if (state.playing && video.paused) void video.play();
    if (!state.playing && !video.paused) video.pause();
  }

  document.addEventListener("keydown", (ev) => {
    if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) return;
    if (ev.key === "z" || ev.key === "Z") step({ kind: "toggle_z" });
    else if (ev.key === "ArrowUp") step({ kind: "arrow_up" });
    else if (ev.key === "ArrowDown") step({ kind: "arrow_down" });
    else if (ev.key === " ") {
      step({ kind: state.playing ? "pause" : "play" });
      ev.preventDefault();
    } else return;
    ev.preventDefault();
  });
  video.addEventListener("play", () => {
    if (!state.playing) step({ kind: "play" });
  });
  video.addEventListener("pause", () => {
    if (state.playing) step({ kind: "pause" });
  });

  function drawFrame(): void {
    state = { ...state, t_ms: video.currentTime * 1000 };
    const activeId = selectActive(manifest.activities, state.t_ms, DEFAULT_LEAD_MS);
    if (activeId !== state.active_id) step({ kind: "new_activity", id: activeId });

    const view = viewAt(state, state.t_ms);
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(video, view.x, view.y, view.w, view.h, 0, 0, canvas.width, canvas.height);

    const sx = canvas.width / view.w;
    const sy = canvas.height / view.h;
    if (state.zoomed && settings.zoom.filter !== "none") {
      const img = ctx.getImageData(0, 0, canvas.width, canvas.height);
      if (settings.zoom.filter === "invert") invert(img);
      else thicken(img, [0, 0, 0]);
      ctx.putImageData(img, 0, 0);
    }

    const activity = manifest.activities.find((a) => a.id === state.active_id);
    if (activity) {
      for (const cmd of renderOverlay(state, settings.highlight, activity)) {
        ctx.globalAlpha = cmd.alpha;
        if (cmd.kind === "pointer") {
          ctx.font = `${Math.round(24 * cmd.scale)}px sans-serif`;
          ctx.fillText(cmd.style === "hand" ? "☝" : "↖", (cmd.x - view.x) * sx, (cmd.y - view.y) * sy);
          continue;
        }
        const x = (cmd.x - view.x) * sx;
        const y = (cmd.y - view.y) * sy;
        const w = cmd.w * sx;
        const h = cmd.h * sy;
        ctx.beginPath();
        if (cmd.kind === "ellipse") ctx.ellipse(x + w / 2, y + h / 2, w / 2, h / 2, 0, 0, 2 * Math.PI);
        else ctx.rect(x, y, w, h);
        ctx.globalAlpha = cmd.alpha * cmd.fill.opacity;
        ctx.fillStyle = cmd.fill.color;
        ctx.fill();
        ctx.globalAlpha = cmd.alpha;
        ctx.strokeStyle = cmd.border.color;
        ctx.lineWidth = cmd.border.width_px;
        if (cmd.border.width_px > 0) ctx.stroke();
        if (cmd.filter !== "none") {
          const img = ctx.getImageData(x, y, Math.max(1, w), Math.max(1, h));
          if (cmd.filter === "invert") invert(img);
          else thicken(img, [255, 0, 0]);
          ctx.putImageData(img, x, y);
        }
      }
      ctx.globalAlpha = 1;
    }
    requestAnimationFrame(drawFrame);
  }

  function bindPanel(): void {
    byId<HTMLInputElement>("fill-color").value = settings.highlight.fill_color;
    byId<HTMLInputElement>("fill-opacity").value = String(settings.highlight.fill_opacity);
    byId<HTMLInputElement>("border-color").value = settings.highlight.border_color;
    byId<HTMLInputElement>("border-width").value = String(settings.highlight.border_width_px);
    byId<HTMLSelectElement>("shape").value = settings.highlight.shape;
    byId<HTMLSelectElement>("animation").value = settings.highlight.animation;
    byId<HTMLSelectElement>("pointer").value = settings.highlight.pointer;
    byId<HTMLInputElement>("zoom-strength").value = String(settings.zoom.strength);
    byId<HTMLInputElement>("zoom-speed").value = String(settings.zoom.speed);
    byId<HTMLInputElement>("pause-on-zoom").checked = settings.zoom.pause_on_zoom;
  }

  byId<HTMLInputElement>("fill-color").addEventListener("change", (e) =>
    patch({ highlight: { fill_color: (e.target as HTMLInputElement).value } }),
  );
  byId<HTMLInputElement>("fill-opacity").addEventListener("change", (e) =>
    patch({ highlight: { fill_opacity: Number((e.target as HTMLInputElement).value) } }),
  );
  byId<HTMLInputElement>("border-color").addEventListener("change", (e) =>
    patch({ highlight: { border_color: (e.target as HTMLInputElement).value } }),
  );
  byId<HTMLInputElement>("border-width").addEventListener("change", (e) =>
    patch({ highlight: { border_width_px: Number((e.target as HTMLInputElement).value) } }),
  );
  byId<HTMLSelectElement>("shape").addEventListener("change", (e) =>
    patch({ highlight: { shape: (e.target as HTMLSelectElement).value as "box" | "circle" } }),
  );
  byId<HTMLSelectElement>("animation").addEventListener("change", (e) =>
    patch({ highlight: { animation: (e.target as HTMLSelectElement).value as "none" | "size_variation" } }),
  );
  byId<HTMLSelectElement>("pointer").addEventListener("change", (e) =>
    patch({ highlight: { pointer: (e.target as HTMLSelectElement).value as "none" | "cursor" | "hand" } }),
  );
  byId<HTMLInputElement>("zoom-strength").addEventListener("change", (e) =>
    patch({ zoom: { strength: Number((e.target as HTMLInputElement).value) } }),
  );
  byId<HTMLInputElement>("zoom-speed").addEventListener("change", (e) =>
    patch({ zoom: { speed: Number((e.target as HTMLInputElement).value) } }),
  );
  byId<HTMLInputElement>("pause-on-zoom").addEventListener("change", (e) =>
    patch({ zoom: { pause_on_zoom: (e.target as HTMLInputElement).checked } }),
  );
  byId<HTMLButtonElement>("reset").addEventListener("click", () => {
    settings = defaultSettings();
    persistSettings(settings, window.localStorage);
    bindPanel();
  });
  byId<HTMLButtonElement>("export").addEventListener("click", () => {
    const blob = new Blob([exportSettings(settings)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "player-settings.json";
    a.click();
  });
  byId<HTMLInputElement>("import").addEventListener("change", async (e) => {
    const file = (e.target as HTMLInputElement).files?.[0];
    if (!file) return;
    const result = importSettings(await file.text());
    settings = result.settings;
    if (result.notice) showNotice(result.notice);
    persistSettings(settings, window.localStorage);
    bindPanel();
  });

  bindPanel();
  requestAnimationFrame(drawFrame);
}

void boot();
