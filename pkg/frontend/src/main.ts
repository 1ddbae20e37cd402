/** Application shell: search, drill breadcrumbs, timeline, and map views. */

import { HttpApiClient } from "./api.js";
import { renderMap, type MapDatum } from "./map.js";
import { renderTimeline } from "./timeline.js";
import { ExplorerState } from "./state.js";
import type { LevelInfo, SliceMember, SliceResponse } from "./types.js";

type ViewKind = "timeline" | "cluster_map" | "term_map";

const client = new HttpApiClient();
const state = new ExplorerState(client);

const ui = {
  view: "timeline" as ViewKind,
  levels: [] as LevelInfo[],
  colorLevel: 1,
  termCluster: 1,
  zoom: 1,
  selectedClusters: new Set<number>(),
  slice: null as SliceResponse | null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const svg = el<HTMLElement>("scene") as unknown as SVGSVGElement;

function showNotice(message: string): void {
  const notice = el<HTMLDivElement>("notice");
  notice.textContent = message;
  notice.classList.add("visible");
  window.setTimeout(() => notice.classList.remove("visible"), 4000);
}

function renderBreadcrumbs(): void {
  const bar = el<HTMLDivElement>("breadcrumbs");
  const parts = ["all publications"];
  for (const step of state.breadcrumbs) {
    parts.push(`level ${step.level}: cluster ${step.cluster_ids.join("+")}`);
  }
  bar.textContent = parts.join("  >  ") + `   (${state.activeCount} publications)`;
}

function hoverPanel(html: string | null): void {
  const panel = el<HTMLDivElement>("details");
  panel.innerHTML = html ?? "";
}

async function refreshScene(): Promise<void> {
  if (ui.view === "timeline") {
    ui.slice = await client.slice(state.token, 100, ui.colorLevel);
    renderTimeline(svg, ui.slice, ui.selectedClusters, {
      onHover(member: SliceMember | null) {
        hoverPanel(member && [
          `<b>${member.title}</b>`,
          member.authors.join("; "),
          `${member.journal}, ${member.year}`,
          member.cluster === null ? "unassigned" : `cluster ${member.cluster}`,
        ].join("<br>"));
      },
      onToggleSelect(member: SliceMember) {
        if (member.cluster === null) return;
        if (ui.selectedClusters.has(member.cluster)) {
          ui.selectedClusters.delete(member.cluster);
        } else {
          ui.selectedClusters.add(member.cluster);
        }
        if (ui.slice) renderTimeline(svg, ui.slice, ui.selectedClusters, this);
      },
    });
  } else if (ui.view === "cluster_map") {
    const map = await client.map(ui.colorLevel);
    const items: MapDatum[] = map.items.map((item) => ({
      key: item.id, label: item.label, size: item.size,
      x: item.x, y: item.y, group: item.group,
    }));
    renderMap(svg, items, map.links, ui.zoom, {
      async onHover(datum) {
        if (!datum) return hoverPanel(null);
        const summary = await client.summary(ui.colorLevel, datum.key);
        hoverPanel([
          `<b>cluster ${summary.id}</b> (${summary.size} publications)`,
          summary.terms.map((t) => t.term).join("; "),
          summary.journals.map((j) => j.journal).join("; "),
        ].join("<br>"));
      },
      onClick(datum) {
        ui.termCluster = datum.key;
        setView("term_map");
      },
    });
  } else {
    const map = await client.termMap(ui.colorLevel, ui.termCluster);
    const items: MapDatum[] = map.terms.map((term, index) => ({
      key: index, label: term.label, size: term.occurrences,
      x: term.x, y: term.y, group: term.cluster,
    }));
    const links = map.links.map((l) => ({ a: l.a, b: l.b, weight: l.cooccurrences }));
    renderMap(svg, items, links, ui.zoom, {
      onHover(datum) {
        hoverPanel(datum && `<b>${datum.label}</b><br>${datum.size} publications`);
      },
      onClick() { /* term maps have no drill target */ },
    });
  }
}

function setView(view: ViewKind): void {
  ui.view = view;
  for (const kind of ["timeline", "cluster_map", "term_map"] as const) {
    el<HTMLButtonElement>(`tab-${kind}`).classList.toggle("active", kind === view);
  }
  void refreshScene();
}

async function runSearch(): Promise<void> {
  const params: Record<string, string> = {};
  for (const field of ["title", "author", "journal", "year_from", "year_to"]) {
    const value = el<HTMLInputElement>(`search-${field}`).value.trim();
    if (value) params[field] = value;
  }
  const results = el<HTMLDivElement>("search-results");
  if (Object.keys(params).length === 0) {
    results.textContent = "enter at least one criterion";
    return;
  }
  const res = await client.search(params);
  results.innerHTML = `<p>${res.total} publications</p>` + res.results
    .slice(0, 20)
    .map((r) => `<div class="hit"><b>${r.title}</b><br>` +
      `${r.authors.join("; ")} - ${r.journal}, ${r.year}</div>`)
    .join("");
}

async function boot(): Promise<void> {
  const levels = await client.levels();
  ui.levels = levels.levels;
  ui.colorLevel = ui.levels[0]?.level ?? 1;
  const select = el<HTMLSelectElement>("level-select");
  for (const info of ui.levels) {
    const option = document.createElement("option");
    option.value = String(info.level);
    option.textContent = `level ${info.level} (${info.n_clusters} clusters)`;
    select.appendChild(option);
  }
  select.addEventListener("change", () => {
    ui.colorLevel = Number(select.value);
    ui.selectedClusters.clear();
    void refreshScene();
  });

  state.onChange(() => {
    renderBreadcrumbs();
    ui.selectedClusters.clear();
    void refreshScene();
  });
  state.onNotice(showNotice);
  await state.init();

  el<HTMLButtonElement>("tab-timeline").addEventListener("click", () => setView("timeline"));
  el<HTMLButtonElement>("tab-cluster_map").addEventListener("click", () => setView("cluster_map"));
  el<HTMLButtonElement>("tab-term_map").addEventListener("click", () => setView("term_map"));
  el<HTMLButtonElement>("drill-btn").addEventListener("click", () => {
    if (ui.selectedClusters.size === 0) {
      showNotice("click publications to select clusters first");
      return;
    }
    void state.drill(ui.colorLevel, [...ui.selectedClusters].sort((a, b) => a - b));
  });
  el<HTMLButtonElement>("up-btn").addEventListener("click", () => void state.up());
  el<HTMLButtonElement>("search-btn").addEventListener("click", () => void runSearch());
  svg.addEventListener("wheel", (event) => {
    if (ui.view === "timeline") return;
    event.preventDefault();
    const factor = event.deltaY < 0 ? 1.25 : 0.8;
    ui.zoom = Math.min(16, Math.max(1, ui.zoom * factor));
    void refreshScene();
  }, { passive: false });

  renderBreadcrumbs();
  setView("timeline");
}

void boot();
