// Canvas painters. Immediate-mode canvas handles the >= 1000-polyline scenes;
// below the threshold an SVG painter would be acceptable, but canvas renders
// both fine so a single code path paints every scene.

import type { InlineScene } from "./inline.js";
import type { ParallelScene } from "./parallel.js";

interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

const M: Margins = { top: 24, right: 24, bottom: 28, left: 36 };

function axisRanges(scene: ParallelScene): [number, number][] {
  return scene.axes.map((_, j) => {
    let lo = Number.POSITIVE_INFINITY;
    let hi = Number.NEGATIVE_INFINITY;
    for (const line of scene.polylines) {
      lo = Math.min(lo, line.points[j]);
      hi = Math.max(hi, line.points[j]);
    }
    for (const band of scene.hyperblockBands) {
      if (band.axis === scene.axes[j]) {
        lo = Math.min(lo, band.lo);
        hi = Math.max(hi, band.hi);
      }
    }
    if (!Number.isFinite(lo) || lo === hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    return [lo, hi];
  });
}

export function paintParallel(
  ctx: CanvasRenderingContext2D,
  scene: ParallelScene,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const k = scene.axes.length;
  const x = (j: number) => M.left + ((width - M.left - M.right) * j) / Math.max(1, k - 1);
  const ranges = axisRanges(scene);
  const y = (j: number, v: number) => {
    const [lo, hi] = ranges[j];
    return height - M.bottom - ((height - M.top - M.bottom) * (v - lo)) / (hi - lo);
  };

  // overlap box band per strip
  ctx.fillStyle = "rgba(120, 120, 120, 0.15)";
  if (scene.hyperblockBands.length === k) {
    for (let j = 0; j < k - 1; j++) {
      const a = scene.hyperblockBands[j];
      const b = scene.hyperblockBands[j + 1];
      ctx.beginPath();
      ctx.moveTo(x(j), y(j, a.hi));
      ctx.lineTo(x(j + 1), y(j + 1, b.hi));
      ctx.lineTo(x(j + 1), y(j + 1, b.lo));
      ctx.lineTo(x(j), y(j, a.lo));
      ctx.closePath();
      ctx.fill();
    }
  }

  // modified envelope outline
  if (scene.envelope) {
    ctx.strokeStyle = "rgba(0, 0, 0, 0.8)";
    ctx.lineWidth = 1.5;
    scene.envelope.strips.forEach((strip, j) => {
      for (const boundary of [strip.upper, strip.lower]) {
        ctx.beginPath();
        boundary.forEach(([t, v], i) => {
          const px = x(j) + (x(j + 1) - x(j)) * t;
          const py = y(j, v) + (y(j + 1, v) - y(j, v)) * t;
          if (i === 0) ctx.moveTo(px, py);
          else ctx.lineTo(px, py);
        });
        ctx.stroke();
      }
    });
  }

  // one polyline per visible case, selected ones on top
  for (const pass of [false, true]) {
    for (const line of scene.polylines) {
      if (line.selected !== pass) continue;
      ctx.strokeStyle = line.selected ? "#000" : line.color;
      ctx.lineWidth = line.selected ? 2.5 : 1;
      ctx.beginPath();
      line.points.forEach((v, j) => {
        if (j === 0) ctx.moveTo(x(0), y(0, v));
        else ctx.lineTo(x(j), y(j, v));
      });
      ctx.stroke();
    }
  }

  // axes and labels
  ctx.strokeStyle = "#555";
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  scene.axes.forEach((axis, j) => {
    ctx.beginPath();
    ctx.moveTo(x(j), M.top);
    ctx.lineTo(x(j), height - M.bottom);
    ctx.stroke();
    ctx.fillText(axis, x(j), height - 8);
  });
}

export function paintInline(
  ctx: CanvasRenderingContext2D,
  scene: InlineScene,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const [lo, hi] = scene.scoreRange;
  const span = hi - lo || 1;
  const x = (v: number) => M.left + ((width - M.left - M.right) * (v - lo)) / span;
  const baseline = height / 2;

  // arcs from point to point along the shared axis
  for (const track of scene.tracks) {
    ctx.strokeStyle = track.selected ? "#000" : track.color;
    ctx.lineWidth = track.selected ? 2 : 1;
    let prev = x(0 >= lo && 0 <= hi ? 0 : lo);
    track.prefix.forEach((value, i) => {
      const next = x(value);
      const radius = Math.abs(next - prev) / 2;
      ctx.beginPath();
      ctx.arc((prev + next) / 2, baseline, radius, Math.PI, 0, i % 2 === 1);
      ctx.stroke();
      prev = next;
    });
    ctx.fillStyle = track.color;
    ctx.beginPath();
    ctx.arc(x(track.finalPoint), baseline, 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }

  // shared axis + threshold line
  ctx.strokeStyle = "#555";
  ctx.beginPath();
  ctx.moveTo(M.left, baseline);
  ctx.lineTo(width - M.right, baseline);
  ctx.stroke();
  ctx.strokeStyle = "orange";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(x(scene.threshold), M.top);
  ctx.lineTo(x(scene.threshold), height - M.bottom);
  ctx.stroke();
}
