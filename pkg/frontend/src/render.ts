/** Tiny SVG helpers shared by the views. */

export const CLUSTER_COLORS = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
  "#c26d3f", "#5c9aa6", "#8a62a8", "#b5bd4c", "#d96895",
];

const SVG_NS = "http://www.w3.org/2000/svg";

export function svgElement(
  tag: string, attrs: Record<string, string | number> = {},
): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function clearNode(node: Element): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}
