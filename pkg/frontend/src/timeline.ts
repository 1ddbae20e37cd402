/** Citation timeline: publications as circles on a year axis (older on
 * top), x from the server's relatedness embedding, curved citation links
 * (darker = direct, lighter = indirect), colors by cluster. */

import { CLUSTER_COLORS, svgElement, clearNode } from "./render.js";
import { curvePath, linearScale } from "./geometry.js";
import type { SliceMember, SliceResponse } from "./types.js";

export interface TimelineCallbacks {
  onHover(member: SliceMember | null, event?: MouseEvent): void;
  onToggleSelect(member: SliceMember): void;
}

const WIDTH = 900;
const HEIGHT = 640;
const MARGIN = 48;

export function renderTimeline(
  container: SVGSVGElement,
  slice: SliceResponse,
  selectedClusters: Set<number>,
  callbacks: TimelineCallbacks,
): void {
  clearNode(container);
  container.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  if (slice.members.length === 0) {
    const empty = svgElement("text", {
      x: WIDTH / 2, y: HEIGHT / 2, "text-anchor": "middle", class: "placeholder",
    });
    empty.textContent = "nothing in scope";
    container.appendChild(empty);
    return;
  }
  const years = slice.members.map((m) => m.year);
  const xs = slice.members.map((m) => m.x);
  // older publications sit at the top
  const yScale = linearScale(Math.min(...years), Math.max(...years), MARGIN, HEIGHT - MARGIN);
  const xScale = linearScale(Math.min(...xs), Math.max(...xs), MARGIN + 30, WIDTH - MARGIN);
  const byId = new Map<string, SliceMember>();
  for (const member of slice.members) {
    byId.set(member.id, member);
  }
  const position = (m: SliceMember) => ({ px: xScale(m.x), py: yScale(m.year) });

  // year axis ticks
  for (const year of new Set(years)) {
    const y = yScale(year);
    const tick = svgElement("text", {
      x: 8, y: y + 4, class: "axis-label",
    });
    tick.textContent = String(year);
    container.appendChild(tick);
  }

  const drawLinks = (pairs: [string, string][], cssClass: string) => {
    for (const [a, b] of pairs) {
      const ma = byId.get(a);
      const mb = byId.get(b);
      if (!ma || !mb) continue;
      const pa = position(ma);
      const pb = position(mb);
      container.appendChild(svgElement("path", {
        d: curvePath(pa.px, pa.py, pb.px, pb.py, 0.15),
        class: cssClass,
      }));
    }
  };
  drawLinks(slice.indirect, "link-indirect");
  drawLinks(slice.direct, "link-direct");

  for (const member of slice.members) {
    const { px, py } = position(member);
    const color = member.cluster === null
      ? "#999"
      : CLUSTER_COLORS[(member.cluster - 1) % CLUSTER_COLORS.length];
    const selected = member.cluster !== null && selectedClusters.has(member.cluster);
    const circle = svgElement("circle", {
      cx: px, cy: py, r: 7,
      fill: color,
      class: selected ? "pub selected" : "pub",
    });
    circle.addEventListener("mouseenter", (e) => callbacks.onHover(member, e as MouseEvent));
    circle.addEventListener("mouseleave", () => callbacks.onHover(null));
    circle.addEventListener("click", () => callbacks.onToggleSelect(member));
    container.appendChild(circle);
    const text = svgElement("text", {
      x: px, y: py - 10, "text-anchor": "middle", class: "pub-label",
    });
    text.textContent = member.label;
    container.appendChild(text);
  }
}
