import * as fs from "node:fs";
import * as path from "node:path";

import { SessionClient } from "../src/api.js";

export function baseUrl(): string {
  const base = process.env.OB_BASE_URL;
  if (!base) throw new Error("OB_BASE_URL unset; global setup did not run");
  return base;
}

export function irisCsv(): string {
  const file = path.resolve(__dirname, "..", "..", "data", "iris.csv");
  return fs.readFileSync(file, "utf-8");
}

export async function irisSession(normalize = true): Promise<SessionClient> {
  return SessionClient.create(baseUrl(), irisCsv(), "class", normalize);
}

// Deterministic synthetic CSV for size tests: k numeric columns from a tiny
// linear congruential generator plus an alternating two-class label.
export function syntheticCsv(n: number, k = 3): string {
  const header = [...Array(k).keys()].map((j) => `f${j}`).join(",") + ",class";
  const rows: string[] = [header];
  let state = 12345;
  const next = () => {
    state = (state * 1103515245 + 12345) & 0x7fffffff;
    return state / 0x7fffffff;
  };
  for (let i = 0; i < n; i++) {
    const values = [...Array(k).keys()].map(() => next().toFixed(6));
    rows.push(`${values.join(",")},${i % 2 === 0 ? "even" : "odd"}`);
  }
  return rows.join("\n") + "\n";
}
