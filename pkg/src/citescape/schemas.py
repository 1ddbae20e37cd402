"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1"


class ApiModel(BaseModel):
    schema_version: str = SCHEMA_VERSION


class ErrorBody(ApiModel):
    detail: str


class RemovedCounts(BaseModel):
    self_citation: int
    duplicate: int
    year_inconsistent: int
    cycle_breaking: int


class StatsResponse(ApiModel):
    publications: int
    journals: int
    citation_pairs: int
    network_edges: int
    removed: RemovedCounts
    largest_component: int


class LevelInfo(BaseModel):
    level: int
    gamma: float
    min_cluster_size: int
    n_clusters: int
    quality: float


class LevelsResponse(ApiModel):
    levels: list[LevelInfo]


class ClusterInfo(BaseModel):
    id: int
    size: int


class ClustersResponse(ApiModel):
    level: int
    clusters: list[ClusterInfo]


class TermScore(BaseModel):
    term: str
    score: float


class JournalCount(BaseModel):
    journal: str
    count: int


class PublicationBrief(BaseModel):
    id: str
    title: str
    authors: list[str]
    journal: str
    year: int
    citations: int | None = None


class ClusterSummaryResponse(ApiModel):
    level: int
    id: int
    size: int
    terms: list[TermScore]
    journals: list[JournalCount]
    most_cited: PublicationBrief | None


class MapItem(BaseModel):
    id: int
    label: str
    size: float
    x: float
    y: float
    group: int


class MapLink(BaseModel):
    a: int
    b: int
    weight: float


class MapResponse(ApiModel):
    items: list[MapItem]
    links: list[MapLink]


class TermMapItem(BaseModel):
    label: str
    occurrences: int
    relevance: float
    cluster: int
    x: float
    y: float


class TermMapLink(BaseModel):
    a: int
    b: int
    cooccurrences: int


class TermMapResponse(ApiModel):
    terms: list[TermMapItem]
    links: list[TermMapLink]


class DrillStep(BaseModel):
    level: int
    cluster_ids: list[int]


class SessionState(ApiModel):
    token: str
    depth: int
    path: list[DrillStep]
    active_count: int


class DrillRequest(BaseModel):
    level: int
    cluster_ids: list[int] = Field(min_length=1)


class SliceMember(BaseModel):
    id: str
    label: str
    year: int
    x: float
    cluster: int | None
    title: str
    authors: list[str]
    journal: str


class SliceResponse(ApiModel):
    members: list[SliceMember]
    direct: list[list[str]]
    indirect: list[list[str]]


class SearchResponse(ApiModel):
    total: int
    results: list[PublicationBrief]
