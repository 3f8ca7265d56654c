// Parallel-coordinates scene: one polyline per visible case with one vertex
// per attribute — no aggregation, sampling, or binning at any data size.
// Scenes are plain data so they can be built and checked without a DOM;
// painting is a separate, thin step.

import { classColor } from "./colors.js";
import type { DataPayload, EnvelopeJson, HyperblockJson } from "./types.js";
import type { ViewState } from "./view.js";

export interface Polyline {
  caseId: number;
  label: string;
  points: number[]; // one value per axis, in axis order
  color: string;
  selected: boolean;
}

export interface AxisBand {
  axis: string;
  lo: number;
  hi: number;
}

export interface ParallelScene {
  axes: string[];
  polylines: Polyline[];
  hyperblockBands: AxisBand[];
  envelope: EnvelopeJson | null;
  renderer: "canvas" | "svg";
}

export const CANVAS_THRESHOLD = 1000;

export function visibleCaseIds(data: DataPayload, view: ViewState): number[] {
  const remaining = new Set(data.remaining_ids);
  const ids: number[] = [];
  for (let i = 0; i < data.case_ids.length; i++) {
    const id = data.case_ids[i];
    if (!remaining.has(id)) continue;
    if (view.hiddenClasses.has(data.labels[i])) continue;
    ids.push(id);
  }
  return ids;
}

export function buildParallelScene(
  data: DataPayload,
  view: ViewState,
  hyperblock: HyperblockJson | null = null,
  envelope: EnvelopeJson | null = null,
): ParallelScene {
  for (const axis of view.axisOrder) {
    if (!data.attributes.includes(axis)) {
      throw new Error(`axis ${axis} not in dataset; view must be reset`);
    }
  }
  const axisIdx = view.axisOrder.map((a) => data.attributes.indexOf(a));
  const rowOf = new Map<number, number>();
  data.case_ids.forEach((id, row) => rowOf.set(id, row));

  const polylines: Polyline[] = [];
  for (const id of visibleCaseIds(data, view)) {
    const row = rowOf.get(id)!;
    polylines.push({
      caseId: id,
      label: data.labels[row],
      points: axisIdx.map((j) => data.cases[row][j]),
      color: classColor(data.labels[row], 0.6),
      selected: view.selection.has(id),
    });
  }

  const bands: AxisBand[] = [];
  if (hyperblock && view.overlays.hyperblock) {
    for (const axis of view.axisOrder) {
      const j = hyperblock.attributes.indexOf(axis);
      if (j >= 0) bands.push({ axis, lo: hyperblock.lo[j], hi: hyperblock.hi[j] });
    }
  }

  return {
    axes: [...view.axisOrder],
    polylines,
    hyperblockBands: bands,
    envelope: view.overlays.envelope ? envelope : null,
    renderer: polylines.length >= CANVAS_THRESHOLD ? "canvas" : "svg",
  };
}
