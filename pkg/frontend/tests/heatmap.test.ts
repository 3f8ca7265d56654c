import { describe, expect, it } from "vitest";

import { buildHeatmapScene } from "../src/heatmap.js";
import { initialViewState, setSelection } from "../src/view.js";
import type { DataPayload, ScoresPayload } from "../src/types.js";
import { irisSession } from "./helpers.js";

function tinyData(): DataPayload {
  return {
    revision: 0,
    normalized: true,
    attributes: ["a"],
    case_ids: [0, 1, 2],
    cases: [[0.1], [0.2], [0.3]],
    labels: ["x", "x", "y"],
    remaining_ids: [0, 1, 2],
    axis_order: ["a"],
    hidden_classes: [],
  };
}

function tinyScores(values: number[]): ScoresPayload {
  return {
    revision: 0,
    scorer: {
      coefficients: [1],
      threshold: 0,
      top_class: "y",
      bottom_class: "x",
      provenance: "trained",
    },
    scorer_identity: "t",
    threshold: 0,
    case_ids: [0, 1, 2],
    scores: values,
    case_c: null,
    case_d: null,
  };
}

describe("heatmap scene", () => {
  it("rows descend by score", async () => {
    const client = await irisSession();
    await client.postAction("set_scorer", { top: "Versicolor", bottom: "Virginica" });
    const data = await client.data();
    const scores = await client.scores();
    const view = initialViewState(data.axis_order, data.normalized);
    const scene = buildHeatmapScene(data, scores, view);
    for (let i = 1; i < scene.rows.length; i++) {
      expect(scene.rows[i - 1].score).toBeGreaterThanOrEqual(scene.rows[i].score);
    }
  });

  it("flags the interval boundary cases c and d", async () => {
    const client = await irisSession();
    await client.postAction("set_scorer", { top: "Versicolor", bottom: "Virginica" });
    const scores = await client.scores();
    const overlap = await client.overlap();
    expect(scores.case_c).toBe(overlap.interval.case_c);
    expect(scores.case_d).toBe(overlap.interval.case_d);
    const data = await client.data();
    const view = initialViewState(data.axis_order, data.normalized);
    const scene = buildHeatmapScene(data, scores, view);
    const flagged = scene.rows.filter((r) => r.boundary !== null);
    expect(flagged.map((r) => r.caseId).sort()).toEqual(
      [overlap.interval.case_c!, overlap.interval.case_d!].sort(),
    );
  });

  it("equal scores keep their original order", () => {
    const view = initialViewState(["a"], true);
    const scene = buildHeatmapScene(tinyData(), tinyScores([0.5, 0.5, 0.5]), view);
    expect(scene.rows.map((r) => r.caseId)).toEqual([0, 1, 2]);
  });

  it("selection marks the same case ids across views", () => {
    let view = initialViewState(["a"], true);
    view = setSelection(view, [1]);
    const scene = buildHeatmapScene(tinyData(), tinyScores([0.3, 0.2, 0.1]), view);
    expect(scene.rows.filter((r) => r.selected).map((r) => r.caseId)).toEqual([1]);
  });
});
