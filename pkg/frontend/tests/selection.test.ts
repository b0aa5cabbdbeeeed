import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { selectActive, DEFAULT_LEAD_MS } from "../src/selection.js";
import type { Activity, Manifest } from "../src/types.js";

interface VectorCase {
  name: string;
  t_ms: number;
  lead_ms: number;
  expected: number | null;
}

interface VectorFile {
  description: string;
  manifest: Manifest;
  cases: VectorCase[];
}

const here = dirname(fileURLToPath(import.meta.url));
const vectorPath = join(here, "..", "..", "tests", "vectors", "selection.json");
const vectors: VectorFile = JSON.parse(readFileSync(vectorPath, "utf8"));

describe("selectActive", () => {
  it("replays every shared selection vector", () => {
    expect(vectors.cases.length).toBeGreaterThanOrEqual(20);
    for (const c of vectors.cases) {
      const got = selectActive(vectors.manifest.activities, c.t_ms, c.lead_ms);
      expect(got, c.name).toBe(c.expected);
    }
  });

  it("uses a 1500 ms lead by default", () => {
    expect(DEFAULT_LEAD_MS).toBe(1500);
    const acts: Activity[] = [
      { id: 0, shot: 0, start_ms: 5000, end_ms: 9000, bbox: { x: 0, y: 0, w: 10, h: 10 } },
    ];
    expect(selectActive(acts, 3500)).toBe(0);
    expect(selectActive(acts, 3499)).toBeNull();
  });

  it("treats the end as inclusive and breaks ties by smaller id", () => {
    const acts: Activity[] = [
      { id: 3, shot: 0, start_ms: 1000, end_ms: 4000, bbox: { x: 0, y: 0, w: 10, h: 10 } },
      { id: 5, shot: 0, start_ms: 3000, end_ms: 6000, bbox: { x: 0, y: 0, w: 10, h: 10 } },
    ];
    expect(selectActive(acts, 4000)).toBe(5); // start 3000 is nearer than start 1000
    expect(selectActive(acts, 2000, 0)).toBe(3);
    const tie: Activity[] = [
      { id: 1, shot: 0, start_ms: 1000, end_ms: 4000, bbox: { x: 0, y: 0, w: 10, h: 10 } },
      { id: 2, shot: 0, start_ms: 3000, end_ms: 6000, bbox: { x: 0, y: 0, w: 10, h: 10 } },
    ];
    expect(selectActive(tie, 2000)).toBe(1);
    // end-inclusive boundary
    expect(selectActive(tie, 6000)).toBe(2);
    expect(selectActive(tie, 6001)).toBeNull();
  });
});
