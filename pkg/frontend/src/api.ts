/** Thin fetch client; every displayed number comes through here. */

import type {
  ClustersResponse,
  ClusterSummary,
  LevelsResponse,
  MapResponse,
  SearchResponse,
  SessionState,
  SliceResponse,
  StatsResponse,
  TermMapResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Drill-session operations, separated so state logic is testable offline. */
export interface DrillClient {
  createSession(): Promise<SessionState>;
  drill(token: string, level: number, clusterIds: number[]): Promise<SessionState>;
  up(token: string): Promise<SessionState>;
}

export class HttpApiClient implements DrillClient {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    const body = await res.json().catch(() => ({}));
    if (!res.ok) {
      throw new ApiError(res.status, body.detail ?? res.statusText);
    }
    return body as T;
  }

  stats(): Promise<StatsResponse> {
    return this.request("/stats");
  }

  levels(): Promise<LevelsResponse> {
    return this.request("/levels");
  }

  clusters(level: number): Promise<ClustersResponse> {
    return this.request(`/clusters/${level}`);
  }

  summary(level: number, clusterId: number): Promise<ClusterSummary> {
    return this.request(`/clusters/${level}/${clusterId}/summary`);
  }

  map(level: number): Promise<MapResponse> {
    return this.request(`/map/${level}`);
  }

  termMap(level: number, clusterId: number, minOccurrences?: number): Promise<TermMapResponse> {
    const query = minOccurrences ? `?min_occurrences=${minOccurrences}` : "";
    return this.request(`/termmap/${level}/${clusterId}${query}`);
  }

  createSession(): Promise<SessionState> {
    return this.request("/session", { method: "POST" });
  }

  drill(token: string, level: number, clusterIds: number[]): Promise<SessionState> {
    return this.request(`/session/${token}/drill`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ level, cluster_ids: clusterIds }),
    });
  }

  up(token: string): Promise<SessionState> {
    return this.request(`/session/${token}/up`, { method: "POST" });
  }

  slice(token: string, limit: number, level: number): Promise<SliceResponse> {
    return this.request(`/session/${token}/slice?limit=${limit}&level=${level}`);
  }

  search(params: Record<string, string>): Promise<SearchResponse> {
    const query = new URLSearchParams(params).toString();
    return this.request(`/search?${query}`);
  }
}
