/**
 * Activity selection rule shared with the detection engine.
 *
 * An activity is a candidate at time t when start_ms - lead_ms <= t <= end_ms
 * (end inclusive). Among candidates the one whose start is nearest to t wins;
 * ties go to the smaller id.
 */

import type { Activity } from "./types.js";

export const DEFAULT_LEAD_MS = 1500;

export function selectActive(
  activities: readonly Activity[],
  tMs: number,
  leadMs: number = DEFAULT_LEAD_MS,
): number | null {
  let bestId: number | null = null;
  let bestDist = Infinity;
  for (const a of activities) {
    if (a.start_ms - leadMs <= tMs && tMs <= a.end_ms) {
      const dist = Math.abs(a.start_ms - tMs);
      if (dist < bestDist || (dist === bestDist && (bestId === null || a.id < bestId))) {
        bestDist = dist;
        bestId = a.id;
      }
    }
  }
  return bestId;
}
