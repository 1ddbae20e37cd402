"""Data-directory conventions and artifact loading for the service and CLI.

The CLI precomputes everything under one directory; `serve` loads it
read-only. Files:

    publications.jsonl  citations.tsv      normalized corpus inputs
    load_report.json                       ingest report
    edges.tsv  removed.tsv                 network exports
    clusters.tsv  run_report.json          clustering solutions
    summary_level_<L>.json                 per-cluster summaries
    map_level_<L>.json                     cluster map
    termmap_level_<L>_cluster_<C>.json     term maps
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .citnet import CitationNetwork, ComponentLabeling, build_network, components
from .cluster import (
    UNASSIGNED,
    Assignment,
    ClusteringParams,
    ClusteringSolution,
)
from .corpus import Corpus, load_corpus_files
from .errors import InputError

PUBLICATIONS_FILE = "publications.jsonl"
CITATIONS_FILE = "citations.tsv"
LOAD_REPORT_FILE = "load_report.json"
EDGES_FILE = "edges.tsv"
REMOVED_FILE = "removed.tsv"
CLUSTERS_FILE = "clusters.tsv"
RUN_REPORT_FILE = "run_report.json"


@dataclass
class Artifacts:
    data_dir: Path
    corpus: Corpus
    network: CitationNetwork
    components: ComponentLabeling
    solutions: list[ClusteringSolution]

    def solution(self, level: int) -> ClusteringSolution:
        for sol in self.solutions:
            if sol.level == level:
                return sol
        raise InputError(f"no clustering solution for level {level}")

    @property
    def levels(self) -> list[int]:
        return [sol.level for sol in self.solutions]


def load_corpus_from_dir(data_dir: str | Path) -> Corpus:
    data_dir = Path(data_dir)
    pubs = data_dir / PUBLICATIONS_FILE
    cits = data_dir / CITATIONS_FILE
    if not pubs.exists() or not cits.exists():
        raise InputError(
            f"no corpus in {data_dir} (expected {PUBLICATIONS_FILE} and {CITATIONS_FILE}; run ingest first)"
        )
    return load_corpus_files(pubs, cits, "jsonl")


def load_solutions(data_dir: str | Path, corpus: Corpus) -> list[ClusteringSolution]:
    data_dir = Path(data_dir)
    clusters_path = data_dir / CLUSTERS_FILE
    report_path = data_dir / RUN_REPORT_FILE
    if not clusters_path.exists() or not report_path.exists():
        raise InputError(
            f"no clustering artifacts in {data_dir} (run the cluster command first)"
        )
    report = json.loads(report_path.read_text(encoding="utf-8"))
    labels_by_level: dict[int, list[int]] = {}
    with open(clusters_path, encoding="utf-8") as stream:
        header = stream.readline().rstrip("\n")
        if header != "publication_id\tlevel\tcluster":
            raise InputError(f"unexpected clusters.tsv header: {header!r}")
        for lineno, line in enumerate(stream, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                pub_id, level_s, cluster_s = line.split("\t")
                level = int(level_s)
                label = UNASSIGNED if cluster_s == "" else int(cluster_s) - 1
            except ValueError:
                raise InputError(f"clusters.tsv line {lineno}: malformed row") from None
            labels = labels_by_level.setdefault(level, [UNASSIGNED] * corpus.n)
            labels[corpus.handle(pub_id)] = label
    solutions = []
    for entry in report["levels"]:
        level = entry["level"]
        if level not in labels_by_level:
            raise InputError(f"run report level {level} missing from clusters.tsv")
        labels = labels_by_level[level]
        k = entry["n_clusters"]
        solutions.append(ClusteringSolution(
            params=ClusteringParams(
                gamma=entry["gamma"],
                min_cluster_size=entry["min_cluster_size"],
                seed=entry["seed"],
                restarts=entry["restarts"],
                max_iterations=entry["max_iterations"],
            ),
            assignment=Assignment(tuple(labels), k),
            quality=entry["quality"],
            cluster_sizes=tuple(entry["cluster_sizes"]),
            penalty_n=entry["penalty_n"],
            level=level,
        ))
    return solutions


def load_artifacts(data_dir: str | Path) -> Artifacts:
    data_dir = Path(data_dir)
    corpus = load_corpus_from_dir(data_dir)
    network = build_network(corpus)
    comp = components(network)
    solutions = load_solutions(data_dir, corpus)
    return Artifacts(data_dir, corpus, network, comp, solutions)


def write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as out:
        json.dump(payload, out, indent=2, ensure_ascii=False)
        out.write("\n")
