// Score-sorted heatmap table: rows descend by score (stable for ties, so
// equal scores keep their original order), cells are colored by normalized
// value, and the interval boundary cases are flagged. Clicking a row drives
// the shared selection, which every view honors.

import { heatColor } from "./colors.js";
import type { DataPayload, ScoresPayload } from "./types.js";
import type { ViewState } from "./view.js";

export interface HeatmapRow {
  caseId: number;
  label: string;
  score: number;
  cells: { value: number; color: string }[];
  boundary: "c" | "d" | null;
  selected: boolean;
}

export interface HeatmapScene {
  attributes: string[];
  rows: HeatmapRow[];
}

export function buildHeatmapScene(
  data: DataPayload,
  scores: ScoresPayload,
  view: ViewState,
): HeatmapScene {
  const scoreOf = new Map<number, number>();
  scores.case_ids.forEach((id, i) => scoreOf.set(id, scores.scores[i]));

  const axisIdx = view.axisOrder.map((a) => data.attributes.indexOf(a));
  const mins = axisIdx.map((j) => Math.min(...data.cases.map((row) => row[j])));
  const maxs = axisIdx.map((j) => Math.max(...data.cases.map((row) => row[j])));

  const rows: HeatmapRow[] = [];
  for (let row = 0; row < data.case_ids.length; row++) {
    const id = data.case_ids[row];
    if (!scoreOf.has(id)) continue;
    if (view.hiddenClasses.has(data.labels[row])) continue;
    rows.push({
      caseId: id,
      label: data.labels[row],
      score: scoreOf.get(id)!,
      cells: axisIdx.map((j, k) => {
        const span = maxs[k] - mins[k];
        const t = span === 0 ? 0 : (data.cases[row][j] - mins[k]) / span;
        return { value: data.cases[row][j], color: heatColor(t) };
      }),
      boundary: id === scores.case_c ? "c" : id === scores.case_d ? "d" : null,
      selected: view.selection.has(id),
    });
  }
  // stable descending sort on score: JS Array.sort is stable, so ties keep
  // their original (file) order
  rows.sort((p, q) => q.score - p.score);
  return { attributes: [...view.axisOrder], rows };
}
