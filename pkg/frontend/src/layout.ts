/** Deterministic circular layout for diagram and skeleton views. */

export interface Point {
  x: number;
  y: number;
}

export interface Layout {
  width: number;
  height: number;
  positions: Map<string, Point>;
}

export function circleLayout(
  ids: string[],
  width = 720,
  height = 520,
  padding = 70,
): Layout {
  const positions = new Map<string, Point>();
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 2 - padding;
  const n = Math.max(ids.length, 1);
  ids.forEach((id, index) => {
    const angle = (2 * Math.PI * index) / n - Math.PI / 2;
    positions.set(id, {
      x: Math.round(cx + radius * Math.cos(angle)),
      y: Math.round(cy + radius * Math.sin(angle)),
    });
  });
  return { width, height, positions };
}
