"""FastAPI service exposing precomputed artifacts to the web UI and scripts.

All artifact state is read-only; GET endpoints are pure and cached, so
identical requests return byte-identical bodies. Drill sessions are
in-memory snapshot stacks keyed by unguessable tokens.
"""

from __future__ import annotations

import secrets
import threading
import time
from functools import lru_cache
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles

from . import explore, layout, reports, terms
from .artifacts import Artifacts
from .citnet import network_stats
from .cluster import ClusteringSolution
from .corpus import corpus_stats
from .errors import EmptyDrillError, EmptyTermMapError, InputError
from .schemas import (
    ClusterInfo,
    ClustersResponse,
    ClusterSummaryResponse,
    DrillRequest,
    DrillStep,
    JournalCount,
    LevelInfo,
    LevelsResponse,
    MapResponse,
    PublicationBrief,
    RemovedCounts,
    SCHEMA_VERSION,
    SearchResponse,
    SessionState,
    SliceResponse,
    StatsResponse,
    TermScore,
    TermMapResponse,
)

SESSION_TTL_SECONDS = 3600.0


class ApiError(Exception):
    def __init__(self, status_code: int, detail: str):
        self.status_code = status_code
        self.detail = detail


class Session:
    def __init__(self, initial: explore.DrillContext):
        self.stack = [initial]
        self.lock = threading.Lock()
        self.last_access = time.monotonic()


class SessionStore:
    def __init__(self, make_initial, ttl: float = SESSION_TTL_SECONDS):
        self._make_initial = make_initial
        self._ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self) -> str:
        token = secrets.token_hex(16)  # 128 random bits
        with self._lock:
            self._purge()
            self._sessions[token] = Session(self._make_initial())
        return token

    def get(self, token: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(token)
            if session is None:
                raise ApiError(404, f"unknown session token {token!r}")
            session.last_access = time.monotonic()
            return session

    def _purge(self):
        deadline = time.monotonic() - self._ttl
        stale = [t for t, s in self._sessions.items() if s.last_access < deadline]
        for token in stale:
            del self._sessions[token]


def create_app(art: Artifacts, *, seed: int = 0, static_dir: str | Path | None = None,
               session_ttl: float = SESSION_TTL_SECONDS) -> FastAPI:
    app = FastAPI(title="citescape", version="0.1.0")
    solutions = {sol.level: sol for sol in art.solutions}
    store = SessionStore(lambda: explore.initial_context(art.components), ttl=session_ttl)

    def get_solution(level: int) -> ClusteringSolution:
        sol = solutions.get(level)
        if sol is None:
            raise ApiError(404, f"unknown level {level}")
        return sol

    def cluster_members(sol: ClusteringSolution, cluster_id: int) -> list[int]:
        if not 1 <= cluster_id <= sol.assignment.k:
            raise ApiError(404, f"unknown cluster {cluster_id} at level {sol.level}")
        return [h for h, label in enumerate(sol.assignment.x) if label == cluster_id - 1]

    @lru_cache(maxsize=1)
    def title_term_index():
        return terms.extract_terms(art.corpus, range(art.corpus.n), "title")

    @lru_cache(maxsize=64)
    def cluster_summary(level: int, cluster_id: int) -> ClusterSummaryResponse:
        sol = get_solution(level)
        cluster_members(sol, cluster_id)  # 404 on unknown ids
        data = reports.cluster_summary(
            art.corpus, art.network, sol, cluster_id, title_term_index()
        )
        return ClusterSummaryResponse(
            level=level,
            id=cluster_id,
            size=data["size"],
            terms=[TermScore(**t) for t in data["terms"]],
            journals=[JournalCount(**j) for j in data["journals"]],
            most_cited=(
                PublicationBrief(**data["most_cited"]) if data["most_cited"] else None
            ),
        )

    @lru_cache(maxsize=16)
    def cluster_map(level: int) -> MapResponse:
        sol = get_solution(level)
        graph = layout.aggregate_clusters(art.network, sol.assignment)
        groups = layout.meta_cluster(graph, gamma=1.0, seed=seed)
        embedding = layout.vos_embed(graph, seed=seed)
        return MapResponse(**_strip_version(layout.map_json(graph, embedding, groups)))

    @lru_cache(maxsize=64)
    def term_map(level: int, cluster_id: int, min_occurrences: int,
                 relevance_fraction: float) -> TermMapResponse:
        sol = get_solution(level)
        members = cluster_members(sol, cluster_id)
        occ = terms.extract_terms(art.corpus, members, "title_and_abstract")
        try:
            tm = terms.build_term_map(
                occ, min_occurrences=min_occurrences,
                relevance_fraction=relevance_fraction, seed=seed,
            )
        except EmptyTermMapError:
            return TermMapResponse(terms=[], links=[])
        return TermMapResponse(**_strip_version(terms.term_map_json(tm)))

    def session_state(token: str, session: Session) -> SessionState:
        context = session.stack[-1]
        return SessionState(
            token=token,
            depth=len(context.path),
            path=[
                DrillStep(level=level, cluster_ids=sorted(c + 1 for c in ids))
                for level, ids in context.path
            ],
            active_count=len(context.active_set),
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return _error(exc.status_code, exc.detail)

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return _error(400, str(exc.errors()[0].get("msg", "malformed request")))

    @app.exception_handler(Exception)
    async def handle_internal(request: Request, exc: Exception):
        return _error(500, "internal error")

    @app.get("/stats", response_model=StatsResponse)
    def stats():
        cs = corpus_stats(art.corpus)
        ns = network_stats(art.network)
        largest = 0
        if art.components.largest is not None:
            largest = art.components.sizes[art.components.largest]
        return StatsResponse(
            publications=cs.n_publications,
            journals=cs.n_journals,
            citation_pairs=cs.n_citation_pairs,
            network_edges=ns.n_edges,
            removed=RemovedCounts(**ns.n_removed_by_reason),
            largest_component=largest,
        )

    @app.get("/levels", response_model=LevelsResponse)
    def levels():
        return LevelsResponse(levels=[
            LevelInfo(
                level=sol.level,
                gamma=sol.params.gamma,
                min_cluster_size=sol.params.min_cluster_size,
                n_clusters=sol.assignment.k,
                quality=sol.quality,
            )
            for sol in art.solutions
        ])

    @app.get("/clusters/{level}", response_model=ClustersResponse)
    def clusters(level: int):
        sol = get_solution(level)
        return ClustersResponse(level=level, clusters=[
            ClusterInfo(id=c + 1, size=size)
            for c, size in enumerate(sol.cluster_sizes)
        ])

    @app.get("/clusters/{level}/{cluster_id}/summary", response_model=ClusterSummaryResponse)
    def summary(level: int, cluster_id: int):
        return cluster_summary(level, cluster_id)

    @app.get("/map/{level}", response_model=MapResponse)
    def map_level(level: int):
        return cluster_map(level)

    @app.get("/termmap/{level}/{cluster_id}", response_model=TermMapResponse)
    def termmap(level: int, cluster_id: int, min_occurrences: int = 15,
                relevance_fraction: float = 0.6):
        if min_occurrences < 1 or not 0 < relevance_fraction <= 1:
            raise ApiError(400, "bad term map parameters")
        return term_map(level, cluster_id, min_occurrences, relevance_fraction)

    @app.post("/session", response_model=SessionState)
    def create_session():
        token = store.create()
        return session_state(token, store.get(token))

    @app.post("/session/{token}/drill", response_model=SessionState)
    def drill(token: str, request: DrillRequest):
        session = store.get(token)
        sol = get_solution(request.level)
        for cid in request.cluster_ids:
            if not 1 <= cid <= sol.assignment.k:
                raise ApiError(404, f"unknown cluster {cid} at level {request.level}")
        with session.lock:
            try:
                context = explore.drill_down(
                    session.stack[-1], sol, {cid - 1 for cid in request.cluster_ids}
                )
            except EmptyDrillError as exc:
                raise ApiError(409, str(exc)) from None
            session.stack.append(context)
            return session_state(token, session)

    @app.post("/session/{token}/up", response_model=SessionState)
    def up(token: str):
        session = store.get(token)
        with session.lock:
            if len(session.stack) > 1:
                session.stack.pop()
            return session_state(token, session)

    @app.get("/session/{token}/slice", response_model=SliceResponse)
    def slice_view(token: str, limit: int = 100, level: int | None = None,
                   max_hops: int = 2):
        if limit < 1 or max_hops < 1:
            raise ApiError(400, "limit and max_hops must be positive")
        session = store.get(token)
        color_level = level if level is not None else (art.levels[0] if art.levels else 1)
        sol = get_solution(color_level)
        with session.lock:
            context = session.stack[-1]
        if not context.active_set:
            return SliceResponse(members=[], direct=[], indirect=[])
        members = explore.top_cited(art.network, context.active_set, limit=limit)
        network_slice = explore.timeline_layout(art.network, members, seed=seed,
                                                max_hops=max_hops)
        return SliceResponse(**_strip_version(
            explore.slice_json(network_slice, art.corpus, sol)
        ))

    @app.get("/search", response_model=SearchResponse)
    def search_endpoint(title: str | None = None, author: str | None = None,
                        journal: str | None = None, year_from: int | None = None,
                        year_to: int | None = None, limit: int = 100):
        year_range = None
        if year_from is not None or year_to is not None:
            year_range = (year_from, year_to)
        try:
            hits = explore.search(
                art.corpus,
                title_substring=title,
                author_substring=author,
                journal_substring=journal,
                year_range=year_range,
            )
        except InputError as exc:
            raise ApiError(400, str(exc)) from None
        return SearchResponse(
            total=len(hits),
            results=[_brief(art, h) for h in hits[:limit]],
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index():
            return RedirectResponse(url="/ui/")

    return app


def _brief(art: Artifacts, handle: int, citations: int | None = None) -> PublicationBrief:
    pub = art.corpus.publications[handle]
    return PublicationBrief(
        id=pub.id,
        title=pub.title,
        authors=list(pub.authors),
        journal=pub.journal,
        year=pub.year,
        citations=citations,
    )


def _strip_version(payload: dict) -> dict:
    return {k: v for k, v in payload.items() if k != "schema_version"}


def _error(status_code: int, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"schema_version": SCHEMA_VERSION, "detail": detail},
    )
