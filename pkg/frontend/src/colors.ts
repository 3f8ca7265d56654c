// Stable per-class colors: hash the label so a class keeps its hue across
// renders, sessions, and axis shuffles.

export function classColor(label: string, alpha = 1): string {
  let hash = 2166136261;
  for (let i = 0; i < label.length; i++) {
    hash ^= label.charCodeAt(i);
    hash = Math.imul(hash, 16777619);
  }
  const hue = ((hash >>> 0) % 360 + 360) % 360;
  return `hsla(${hue}, 70%, 45%, ${alpha})`;
}

export function heatColor(t: number): string {
  // 0 -> cool blue, 1 -> warm red
  const clamped = Math.max(0, Math.min(1, t));
  const hue = 240 - 240 * clamped;
  return `hsl(${hue}, 80%, 55%)`;
}
