// Rectangle marking: a drag on one axis (interval) or spanning several axes
// (block) turns into a mark_rectangle action carrying exact data-coordinate
// bounds. On rejection the offending case ids are surfaced for highlighting;
// on acceptance the covered cases leave the remaining set and views re-render.

import { ApiError, SessionClient } from "./api.js";
import type { ActionDiff } from "./types.js";

export interface RectangleDrag {
  ranges: Record<string, [number, number]>;
  label: string;
}

export function rectangleToAction(drag: RectangleDrag): {
  type: "mark_rectangle";
  params: { ranges: Record<string, [number, number]>; label: string };
} | null {
  const cleaned: Record<string, [number, number]> = {};
  for (const [axis, [lo, hi]] of Object.entries(drag.ranges)) {
    if (lo === hi) continue; // zero-area drags are ignored with a notice
    cleaned[axis] = lo < hi ? [lo, hi] : [hi, lo];
  }
  if (Object.keys(cleaned).length === 0) return null;
  return { type: "mark_rectangle", params: { ranges: cleaned, label: drag.label } };
}

export interface MarkOutcome {
  accepted: boolean;
  diff?: ActionDiff;
  offendingIds?: number[];
  message?: string;
}

export async function submitRectangle(
  client: SessionClient,
  drag: RectangleDrag,
  revision?: number,
): Promise<MarkOutcome> {
  const action = rectangleToAction(drag);
  if (!action) return { accepted: false, message: "zero-area rectangle ignored" };
  try {
    const diff = await client.postAction(action.type, action.params, revision);
    return { accepted: true, diff };
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      return {
        accepted: false,
        offendingIds: parseOffendingIds(err.detail),
        message: err.detail,
      };
    }
    throw err;
  }
}

export function parseOffendingIds(detail: string): number[] {
  const match = detail.match(/offending case ids: \[([^\]]*)\]/);
  if (!match) return [];
  return match[1]
    .split(",")
    .map((s) => Number.parseInt(s.trim(), 10))
    .filter((n) => Number.isFinite(n));
}
