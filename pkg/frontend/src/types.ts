/** Response shapes of the citescape HTTP API. */

export interface LevelInfo {
  level: number;
  gamma: number;
  min_cluster_size: number;
  n_clusters: number;
  quality: number;
}

export interface LevelsResponse {
  schema_version: string;
  levels: LevelInfo[];
}

export interface StatsResponse {
  schema_version: string;
  publications: number;
  journals: number;
  citation_pairs: number;
  network_edges: number;
  largest_component: number;
}

export interface ClusterInfo {
  id: number;
  size: number;
}

export interface ClustersResponse {
  schema_version: string;
  level: number;
  clusters: ClusterInfo[];
}

export interface PublicationBrief {
  id: string;
  title: string;
  authors: string[];
  journal: string;
  year: number;
  citations: number | null;
}

export interface ClusterSummary {
  schema_version: string;
  level: number;
  id: number;
  size: number;
  terms: { term: string; score: number }[];
  journals: { journal: string; count: number }[];
  most_cited: PublicationBrief | null;
}

export interface MapItem {
  id: number;
  label: string;
  size: number;
  x: number;
  y: number;
  group: number;
}

export interface MapLink {
  a: number;
  b: number;
  weight: number;
}

export interface MapResponse {
  schema_version: string;
  items: MapItem[];
  links: MapLink[];
}

export interface TermMapItem {
  label: string;
  occurrences: number;
  relevance: number;
  cluster: number;
  x: number;
  y: number;
}

export interface TermMapResponse {
  schema_version: string;
  terms: TermMapItem[];
  links: { a: number; b: number; cooccurrences: number }[];
}

export interface DrillStep {
  level: number;
  cluster_ids: number[];
}

export interface SessionState {
  schema_version: string;
  token: string;
  depth: number;
  path: DrillStep[];
  active_count: number;
}

export interface SliceMember {
  id: string;
  label: string;
  year: number;
  x: number;
  cluster: number | null;
  title: string;
  authors: string[];
  journal: string;
}

export interface SliceResponse {
  schema_version: string;
  members: SliceMember[];
  direct: [string, string][];
  indirect: [string, string][];
}

export interface SearchResponse {
  schema_version: string;
  total: number;
  results: PublicationBrief[];
}
