// In-line coordinates: each case is drawn along one horizontal axis as the
// running sum k1*x1, k1*x1 + k2*x2, ...; the final point is the case's score,
// and the decision threshold appears as a vertical line.

import { classColor } from "./colors.js";
import type { DataPayload, ScoresPayload } from "./types.js";
import type { ViewState } from "./view.js";

export interface InlineTrack {
  caseId: number;
  label: string;
  prefix: number[]; // cumulative weighted sums, length = attribute count
  finalPoint: number; // === prefix.at(-1)
  serverScore: number | null;
  color: string;
  selected: boolean;
}

export interface InlineScene {
  tracks: InlineTrack[];
  threshold: number;
  scoreRange: [number, number];
}

export function prefixSums(values: number[], coefficients: number[]): number[] {
  const out: number[] = [];
  let running = 0;
  for (let i = 0; i < coefficients.length; i++) {
    running += coefficients[i] * values[i];
    out.push(running);
  }
  return out;
}

export function buildInlineScene(
  data: DataPayload,
  scores: ScoresPayload,
  view: ViewState,
): InlineScene {
  const coeffs = scores.scorer.coefficients;
  const scoreOf = new Map<number, number>();
  scores.case_ids.forEach((id, i) => scoreOf.set(id, scores.scores[i]));
  const remaining = new Set(data.remaining_ids);

  const tracks: InlineTrack[] = [];
  let lo = scores.threshold;
  let hi = scores.threshold;
  for (let row = 0; row < data.case_ids.length; row++) {
    const id = data.case_ids[row];
    if (!remaining.has(id) || !scoreOf.has(id)) continue;
    if (view.hiddenClasses.has(data.labels[row])) continue;
    const prefix = prefixSums(data.cases[row], coeffs);
    const finalPoint = prefix[prefix.length - 1] ?? 0;
    lo = Math.min(lo, ...prefix, finalPoint);
    hi = Math.max(hi, ...prefix, finalPoint);
    tracks.push({
      caseId: id,
      label: data.labels[row],
      prefix,
      finalPoint,
      serverScore: scoreOf.get(id) ?? null,
      color: classColor(data.labels[row], 0.7),
      selected: view.selection.has(id),
    });
  }
  return { tracks, threshold: scores.threshold, scoreRange: [lo, hi] };
}
