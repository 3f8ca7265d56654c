// Page wiring: fetch session data, build scenes, paint, and route
// interactions (rectangle drags, axis reordering, class toggles, undo)
// through the action API with optimistic re-fetch on every revision change.

import { ApiError, SessionClient } from "./api.js";
import { paintInline, paintParallel } from "./canvas.js";
import { buildHeatmapScene } from "./heatmap.js";
import { buildInlineScene } from "./inline.js";
import { submitRectangle } from "./interactions.js";
import { buildParallelScene } from "./parallel.js";
import type { DataPayload, OverlapPayload, ScoresPayload } from "./types.js";
import { initialViewState, setAxisOrder, setSelection, toggleClass, type ViewState } from "./view.js";

const qs = new URLSearchParams(location.search);
const BASE = qs.get("api") ?? `http://${location.hostname}:8600`;
const SESSION = qs.get("session") ?? "default";

interface App {
  client: SessionClient;
  view: ViewState;
  data: DataPayload;
  scores: ScoresPayload | null;
  overlap: OverlapPayload | null;
  revision: number;
  dragStart: { axis: string; value: number } | null;
}

const el = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

async function boot(): Promise<void> {
  const client = new SessionClient(BASE, SESSION);
  const data = await client.data();
  const app: App = {
    client,
    view: initialViewState(data.axis_order, data.normalized),
    data,
    scores: null,
    overlap: null,
    revision: data.revision,
    dragStart: null,
  };
  await refreshScorer(app);
  wire(app);
  render(app);
}

async function refresh(app: App): Promise<void> {
  app.data = await app.client.data(app.view.normalized);
  app.revision = app.data.revision;
  await refreshScorer(app);
  render(app);
}

async function refreshScorer(app: App): Promise<void> {
  try {
    app.scores = await app.client.scores();
    app.overlap = await app.client.overlap();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      app.scores = null;
      app.overlap = null;
    } else {
      throw err;
    }
  }
}

function notice(text: string): void {
  el("notice").textContent = text;
}

function render(app: App): void {
  const canvas = el<HTMLCanvasElement>("stage");
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;

  if (app.view.active === "parallel") {
    let scene;
    try {
      scene = buildParallelScene(
        app.data,
        app.view,
        app.overlap?.hyperblock ?? null,
        app.overlap?.envelope ?? null,
      );
    } catch {
      // stale axis order (e.g. after a data swap): reset the view and retry
      app.view = initialViewState(app.data.axis_order, app.data.normalized);
      notice("axis order no longer matches the data; view was reset");
      scene = buildParallelScene(app.data, app.view, null, null);
    }
    paintParallel(ctx, scene, width, height);
    el("status").textContent =
      `${scene.polylines.length} polylines | renderer hint: ${scene.renderer} | revision ${app.revision}`;
  } else if (app.view.active === "inline" && app.scores) {
    const scene = buildInlineScene(app.data, app.scores, app.view);
    paintInline(ctx, scene, width, height);
    el("status").textContent = `${scene.tracks.length} tracks | threshold ${scene.threshold}`;
  } else if (app.view.active === "heatmap" && app.scores) {
    renderHeatmapTable(app);
  } else {
    ctx.clearRect(0, 0, width, height);
    el("status").textContent = "set a scorer to use this view (action: set_scorer)";
  }
  renderControls(app);
}

function renderHeatmapTable(app: App): void {
  const scene = buildHeatmapScene(app.data, app.scores!, app.view);
  const table = el("heatmap");
  table.innerHTML = "";
  const head = document.createElement("tr");
  ["case", ...scene.attributes, "label", "score", ""].forEach((name) => {
    const th = document.createElement("th");
    th.textContent = name;
    head.appendChild(th);
  });
  table.appendChild(head);
  for (const row of scene.rows) {
    const tr = document.createElement("tr");
    tr.className = row.selected ? "selected" : "";
    const cells = [
      String(row.caseId),
      ...row.cells.map((c) => c.value.toPrecision(4)),
      row.label,
      row.score.toPrecision(5),
      row.boundary ?? "",
    ];
    cells.forEach((text, i) => {
      const td = document.createElement("td");
      td.textContent = text;
      if (i > 0 && i <= row.cells.length) td.style.background = row.cells[i - 1].color;
      tr.appendChild(td);
    });
    tr.onclick = () => {
      app.view = setSelection(app.view, [row.caseId]);
      render(app);
    };
    table.appendChild(tr);
  }
  el("status").textContent = `${scene.rows.length} rows, descending by score`;
}

function renderControls(app: App): void {
  const classes = [...new Set(app.data.labels)].sort();
  const box = el("classes");
  box.innerHTML = "";
  for (const cls of classes) {
    const label = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    input.checked = !app.view.hiddenClasses.has(cls);
    input.onchange = () => {
      app.view = toggleClass(app.view, cls);
      render(app);
    };
    label.appendChild(input);
    label.appendChild(document.createTextNode(cls));
    box.appendChild(label);
  }
  el("axes").textContent = app.view.axisOrder.join(" → ");
}

function wire(app: App): void {
  for (const kind of ["parallel", "inline", "heatmap"] as const) {
    el(`tab-${kind}`).onclick = () => {
      app.view = { ...app.view, active: kind };
      el("heatmap").style.display = kind === "heatmap" ? "table" : "none";
      el<HTMLCanvasElement>("stage").style.display = kind === "heatmap" ? "none" : "block";
      render(app);
    };
  }
  el("undo").onclick = async () => {
    try {
      await app.client.postAction("undo", {}, app.revision);
      await refresh(app);
      notice("undone");
    } catch (err) {
      notice(String(err));
    }
  };
  el("rotate-axes").onclick = async () => {
    const order = [...app.view.axisOrder.slice(1), app.view.axisOrder[0]];
    app.view = setAxisOrder(app.view, order);
    await app.client.postAction("reorder_axes", { order }, app.revision);
    await refresh(app);
  };
  el("mark").onclick = async () => {
    const axis = (el<HTMLInputElement>("mark-axis")).value || app.view.axisOrder[0];
    const lo = Number((el<HTMLInputElement>("mark-lo")).value);
    const hi = Number((el<HTMLInputElement>("mark-hi")).value);
    const label = (el<HTMLInputElement>("mark-label")).value;
    const outcome = await submitRectangle(
      app.client,
      { ranges: { [axis]: [lo, hi] }, label },
      app.revision,
    );
    if (outcome.accepted) {
      notice(`accepted: removed ${outcome.diff?.cases_removed?.length ?? 0} cases`);
      await refresh(app);
    } else {
      if (outcome.offendingIds?.length) {
        app.view = setSelection(app.view, outcome.offendingIds);
        render(app);
      }
      notice(outcome.message ?? "rejected");
    }
  };
}

boot().catch((err) => notice(`failed to start: ${err}`));
