// Client view state. Selection rectangles live in data coordinates, never
// pixels, so the bounds a user drags are exactly the bounds the server gets.

export type ViewKind = "parallel" | "inline" | "heatmap";

export interface DataRect {
  ranges: Record<string, [number, number]>;
  label: string;
}

export interface OverlayToggles {
  hyperblock: boolean;
  envelope: boolean;
  intervalBand: boolean;
  synthetic: boolean;
}

export interface ViewState {
  active: ViewKind;
  axisOrder: string[];
  normalized: boolean;
  hiddenClasses: Set<string>;
  selection: Set<number>; // case ids highlighted in every view
  rectangles: DataRect[];
  overlays: OverlayToggles;
}

export function initialViewState(attributes: string[], normalized: boolean): ViewState {
  return {
    active: "parallel",
    axisOrder: [...attributes],
    normalized,
    hiddenClasses: new Set(),
    selection: new Set(),
    rectangles: [],
    overlays: { hyperblock: true, envelope: true, intervalBand: true, synthetic: false },
  };
}

export function setAxisOrder(view: ViewState, order: string[]): ViewState {
  const sorted = [...order].sort();
  const current = [...view.axisOrder].sort();
  if (sorted.length !== current.length || sorted.some((a, i) => a !== current[i])) {
    throw new Error(`axis order must be a permutation of ${current.join(",")}`);
  }
  return { ...view, axisOrder: [...order] };
}

export function toggleClass(view: ViewState, label: string): ViewState {
  const hidden = new Set(view.hiddenClasses);
  if (hidden.has(label)) hidden.delete(label);
  else hidden.add(label);
  return { ...view, hiddenClasses: hidden };
}

export function setSelection(view: ViewState, ids: Iterable<number>): ViewState {
  return { ...view, selection: new Set(ids) };
}
