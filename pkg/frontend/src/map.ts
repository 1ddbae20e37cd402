/** Cluster and term maps: circle area proportional to size, color by
 * group, strongest links as curves, occlusion-aware labels that reveal
 * more as the zoom factor grows. */

import {
  circleRadius,
  curvePath,
  linearScale,
  placeLabels,
  radiusUnit,
  type LabelCandidate,
} from "./geometry.js";
import { CLUSTER_COLORS, clearNode, svgElement } from "./render.js";

export interface MapDatum {
  key: number; // cluster id or term index
  label: string;
  size: number;
  x: number;
  y: number;
  group: number;
}

export interface MapEdge {
  a: number;
  b: number;
  weight: number;
}

export interface MapCallbacks {
  onHover(datum: MapDatum | null, event?: MouseEvent): void;
  onClick(datum: MapDatum): void;
}

const WIDTH = 900;
const HEIGHT = 640;
const MARGIN = 60;
const MAX_RADIUS = 34;
const LINK_FRACTION = 0.35; // strongest links only

export function renderMap(
  container: SVGSVGElement,
  items: MapDatum[],
  edges: MapEdge[],
  zoom: number,
  callbacks: MapCallbacks,
): void {
  clearNode(container);
  container.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  if (items.length === 0) {
    const empty = svgElement("text", {
      x: WIDTH / 2, y: HEIGHT / 2, "text-anchor": "middle", class: "placeholder",
    });
    empty.textContent = "empty map";
    container.appendChild(empty);
    return;
  }
  const xs = items.map((d) => d.x);
  const ys = items.map((d) => d.y);
  const spanX = [Math.min(...xs), Math.max(...xs)] as const;
  const spanY = [Math.min(...ys), Math.max(...ys)] as const;
  const cx = (spanX[0] + spanX[1]) / 2;
  const cy = (spanY[0] + spanY[1]) / 2;
  const halfSpan = Math.max(spanX[1] - spanX[0], spanY[1] - spanY[0], 1e-9) / 2;
  const view = halfSpan / zoom;
  const xScale = linearScale(cx - view, cx + view, MARGIN, WIDTH - MARGIN);
  const yScale = linearScale(cy - view, cy + view, MARGIN, HEIGHT - MARGIN);
  const pixelsPerUnit = (WIDTH - 2 * MARGIN) / (2 * view);
  const unit = radiusUnit(items.map((d) => d.size), MAX_RADIUS);

  const byKey = new Map(items.map((d) => [d.key, d]));
  const sortedEdges = [...edges].sort((a, b) => b.weight - a.weight);
  const keep = Math.max(1, Math.ceil(sortedEdges.length * LINK_FRACTION));
  const maxWeight = sortedEdges.length ? sortedEdges[0].weight : 1;
  for (const edge of sortedEdges.slice(0, keep)) {
    const a = byKey.get(edge.a);
    const b = byKey.get(edge.b);
    if (!a || !b) continue;
    container.appendChild(svgElement("path", {
      d: curvePath(xScale(a.x), yScale(a.y), xScale(b.x), yScale(b.y), 0.12),
      class: "map-link",
      "stroke-width": Math.max(0.6, (3.5 * edge.weight) / maxWeight),
    }));
  }

  for (const datum of items) {
    const circle = svgElement("circle", {
      cx: xScale(datum.x),
      cy: yScale(datum.y),
      r: circleRadius(datum.size, unit),
      fill: CLUSTER_COLORS[(datum.group - 1) % CLUSTER_COLORS.length],
      class: "map-item",
    });
    circle.addEventListener("mouseenter", (e) => callbacks.onHover(datum, e as MouseEvent));
    circle.addEventListener("mouseleave", () => callbacks.onHover(null));
    circle.addEventListener("click", () => callbacks.onClick(datum));
    container.appendChild(circle);
  }

  // labels in data coordinates so occlusion loosens as zoom grows
  const candidates: LabelCandidate[] = items.map((d) => ({
    label: d.label, x: d.x, y: d.y, size: d.size,
  }));
  const placed = placeLabels(candidates, {
    charWidth: 7.5 / pixelsPerUnit,
    lineHeight: 14 / pixelsPerUnit,
    zoom: 1, // zoom already folded into pixelsPerUnit
  });
  for (const label of placed) {
    const text = svgElement("text", {
      x: xScale(label.x),
      y: yScale(label.y) + 4,
      "text-anchor": "middle",
      class: "map-label",
    });
    text.textContent = label.label;
    container.appendChild(text);
  }
}
