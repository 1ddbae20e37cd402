/** Pure geometry used by the renderers: circle scaling, label occlusion,
 * and link curves. Kept DOM-free so the UI tests are plain assertions. */

export interface Box {
  x: number; // left
  y: number; // top
  width: number;
  height: number;
}

export interface LabelCandidate {
  label: string;
  x: number; // item center, data coordinates
  y: number;
  size: number;
}

export interface PlacedLabel extends LabelCandidate {
  index: number;
  box: Box;
}

/** Circle area is proportional to size: r = sqrt(size) * unit. */
export function circleRadius(size: number, unit: number): number {
  return Math.sqrt(Math.max(size, 0)) * unit;
}

/** Unit radius such that the largest item gets maxRadius. */
export function radiusUnit(sizes: number[], maxRadius: number): number {
  const top = Math.max(...sizes, 0);
  return top > 0 ? maxRadius / Math.sqrt(top) : 0;
}

export function boxesOverlap(a: Box, b: Box): boolean {
  return (
    a.x < b.x + b.width &&
    b.x < a.x + a.width &&
    a.y < b.y + b.height &&
    b.y < a.y + a.height
  );
}

export interface LabelOptions {
  charWidth: number; // screen px per character
  lineHeight: number; // screen px
  zoom: number; // data-to-screen scale factor
}

/**
 * Occlusion-aware label placement: candidates are taken in descending size
 * order (ties by index) and a label is kept only if its box overlaps no box
 * already placed. Boxes live in data coordinates, so their extent shrinks
 * as zoom grows and previously skipped labels become visible.
 */
export function placeLabels(items: LabelCandidate[], opts: LabelOptions): PlacedLabel[] {
  const order = items
    .map((item, index) => ({ item, index }))
    .sort((a, b) => b.item.size - a.item.size || a.index - b.index);
  const placed: PlacedLabel[] = [];
  for (const { item, index } of order) {
    const width = (item.label.length * opts.charWidth) / opts.zoom;
    const height = opts.lineHeight / opts.zoom;
    const box: Box = {
      x: item.x - width / 2,
      y: item.y - height / 2,
      width,
      height,
    };
    if (placed.some((p) => boxesOverlap(p.box, box))) {
      continue;
    }
    placed.push({ ...item, index, box });
  }
  return placed.sort((a, b) => a.index - b.index);
}

/** Quadratic bezier between two points, bowing sideways. */
export function curvePath(
  x1: number, y1: number, x2: number, y2: number, bend = 0.2,
): string {
  const mx = (x1 + x2) / 2;
  const my = (y1 + y2) / 2;
  const dx = x2 - x1;
  const dy = y2 - y1;
  const cx = mx - dy * bend;
  const cy = my + dx * bend;
  return `M ${x1} ${y1} Q ${cx} ${cy} ${x2} ${y2}`;
}

/** Linear scale mapping [lo, hi] onto [outLo, outHi]; constant mid if degenerate. */
export function linearScale(
  lo: number, hi: number, outLo: number, outHi: number,
): (v: number) => number {
  if (hi === lo) {
    const mid = (outLo + outHi) / 2;
    return () => mid;
  }
  const k = (outHi - outLo) / (hi - lo);
  return (v: number) => outLo + (v - lo) * k;
}
