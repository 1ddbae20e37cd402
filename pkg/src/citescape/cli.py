"""Command-line pipeline driver.

The heavy steps (ingest, network, cluster, summarize, map, termmap) write
artifacts into a data directory; `serve` loads them read-only and hosts the
HTTP API plus the optional web UI bundle.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import artifacts as art_io
from . import layout, reports, terms
from .citnet import (
    build_network,
    components,
    export_edges_tsv,
    export_removed_tsv,
    network_stats,
)
from .cluster import (
    ClusteringParams,
    export_clusters_tsv,
    multilevel,
    write_run_report,
)
from .corpus import corpus_stats, export_corpus, load_corpus_files
from .errors import CitescapeError, InputError


@click.group()
@click.option(
    "--data-dir",
    envvar="CITESCAPE_DATA_DIR",
    default="data",
    show_default=True,
    type=click.Path(path_type=Path),
    help="Artifact directory (env: CITESCAPE_DATA_DIR).",
)
@click.pass_context
def cli(ctx, data_dir: Path):
    """Cluster citation networks and explore the solutions."""
    ctx.obj = data_dir


@cli.command()
@click.option("--publications", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--citations", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", default="jsonl", show_default=True,
              type=click.Choice(["jsonl", "tsv"]))
@click.pass_obj
def ingest(data_dir: Path, publications: Path, citations: Path, fmt: str):
    """Validate the input files and stage a normalized corpus."""
    corpus = load_corpus_files(publications, citations, fmt)
    stats = corpus_stats(corpus)
    data_dir.mkdir(parents=True, exist_ok=True)
    export_corpus(
        corpus,
        data_dir / art_io.PUBLICATIONS_FILE,
        data_dir / art_io.CITATIONS_FILE,
    )
    art_io.write_json(data_dir / art_io.LOAD_REPORT_FILE, {
        "schema_version": "1",
        "n_publications": stats.n_publications,
        "n_journals": stats.n_journals,
        "n_citation_pairs": stats.n_citation_pairs,
        "dropped_unresolved": corpus.report.dropped_unresolved,
    })
    click.echo(f"publications: {stats.n_publications}")
    click.echo(f"journals: {stats.n_journals}")
    click.echo(f"citation pairs: {stats.n_citation_pairs}")
    click.echo(f"dropped unresolved pairs: {corpus.report.dropped_unresolved}")


@cli.command()
@click.pass_obj
def network(data_dir: Path):
    """Build the acyclic citation network and export it."""
    corpus = art_io.load_corpus_from_dir(data_dir)
    net = build_network(corpus)
    stats = network_stats(net)
    comp = components(net)
    export_edges_tsv(net, corpus, data_dir / art_io.EDGES_FILE)
    export_removed_tsv(net, corpus, data_dir / art_io.REMOVED_FILE)
    click.echo(f"nodes: {stats.n_nodes}")
    click.echo(f"edges kept: {stats.n_edges}")
    for reason, count in sorted(stats.n_removed_by_reason.items()):
        click.echo(f"removed {reason}: {count}")
    largest = comp.sizes[comp.largest] if comp.largest is not None else 0
    click.echo(f"largest component: {largest}")


@cli.command()
@click.option("--gamma", "gammas", multiple=True, type=float, required=True,
              help="Resolution parameter; repeat for multiple levels.")
@click.option("--min-size", "min_sizes", multiple=True, type=int,
              help="Minimum cluster size per level (parallel to --gamma).")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--restarts", default=10, show_default=True, type=int)
@click.option("--max-iterations", default=100, show_default=True, type=int)
@click.pass_obj
def cluster(data_dir: Path, gammas, min_sizes, seed: int, restarts: int,
            max_iterations: int):
    """Compute one clustering solution per --gamma over the largest component."""
    if min_sizes and len(min_sizes) != len(gammas):
        raise InputError(
            f"got {len(min_sizes)} --min-size values for {len(gammas)} --gamma values"
        )
    if not min_sizes:
        min_sizes = tuple(1 for _ in gammas)
    params = [
        ClusteringParams(
            gamma=g, min_cluster_size=m, seed=seed,
            restarts=restarts, max_iterations=max_iterations,
        )
        for g, m in zip(gammas, min_sizes)
    ]
    corpus = art_io.load_corpus_from_dir(data_dir)
    net = build_network(corpus)
    solutions = multilevel(net, params)
    export_clusters_tsv(solutions, corpus, data_dir / art_io.CLUSTERS_FILE)
    write_run_report(solutions, data_dir / art_io.RUN_REPORT_FILE)
    for sol in solutions:
        click.echo(
            f"level {sol.level}: gamma={sol.params.gamma} "
            f"min_size={sol.params.min_cluster_size} "
            f"clusters={sol.assignment.k} Q={sol.quality:.6f}"
        )


@cli.command()
@click.option("--level", "levels", multiple=True, type=int,
              help="Level to summarize; defaults to all.")
@click.option("--top-k", default=5, show_default=True, type=int)
@click.pass_obj
def summarize(data_dir: Path, levels, top_k: int):
    """Write and print per-cluster summaries: size, terms, journals, most cited."""
    art = art_io.load_artifacts(data_dir)
    wanted = list(levels) if levels else art.levels
    occ = terms.extract_terms(art.corpus, range(art.corpus.n), "title")
    for level in wanted:
        sol = art.solution(level)
        summary = reports.level_summary(art.corpus, art.network, sol, occ, top_k)
        art_io.write_json(data_dir / f"summary_level_{level}.json", summary)
        click.echo(f"level {level}:")
        for entry in summary["clusters"]:
            term_list = "; ".join(t["term"] for t in entry["terms"])
            click.echo(f"  cluster {entry['id']} (n={entry['size']}): {term_list}")


@cli.command("map")
@click.option("--level", default=1, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--meta-gamma", default=1.0, show_default=True, type=float)
@click.pass_obj
def map_cmd(data_dir: Path, level: int, seed: int, meta_gamma: float):
    """Aggregate clusters, group them, and lay out the cluster map."""
    art = art_io.load_artifacts(data_dir)
    sol = art.solution(level)
    graph = layout.aggregate_clusters(art.network, sol.assignment)
    groups = layout.meta_cluster(graph, gamma=meta_gamma, seed=seed)
    embedding = layout.vos_embed(graph, seed=seed)
    payload = layout.map_json(graph, embedding, groups)
    out = data_dir / f"map_level_{level}.json"
    art_io.write_json(out, payload)
    click.echo(f"map: {len(payload['items'])} clusters, "
               f"{len(payload['links'])} links, {groups.k} groups -> {out}")


@cli.command()
@click.option("--level", default=1, show_default=True, type=int)
@click.option("--cluster", "cluster_id", required=True, type=int,
              help="1-based cluster id at the chosen level.")
@click.option("--min-occurrences", default=15, show_default=True, type=int)
@click.option("--relevance-fraction", default=0.6, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_obj
def termmap(data_dir: Path, level: int, cluster_id: int, min_occurrences: int,
            relevance_fraction: float, seed: int):
    """Build the term co-occurrence map of one cluster."""
    art = art_io.load_artifacts(data_dir)
    sol = art.solution(level)
    if not 1 <= cluster_id <= sol.assignment.k:
        raise InputError(f"unknown cluster {cluster_id} at level {level}")
    members = [
        h for h, label in enumerate(sol.assignment.x) if label == cluster_id - 1
    ]
    occ = terms.extract_terms(art.corpus, members, "title_and_abstract")
    tm = terms.build_term_map(
        occ, min_occurrences=min_occurrences,
        relevance_fraction=relevance_fraction, seed=seed,
    )
    out = data_dir / f"termmap_level_{level}_cluster_{cluster_id}.json"
    art_io.write_json(out, terms.term_map_json(tm))
    click.echo(f"term map: {len(tm.terms)} terms, {len(tm.links)} links -> {out}")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--static-dir", default=None, type=click.Path(path_type=Path),
              help="Web UI bundle to serve under /ui.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_obj
def serve(data_dir: Path, host: str, port: int, static_dir: Path | None, seed: int):
    """Serve the HTTP API over the precomputed artifacts."""
    import uvicorn

    from .service import create_app

    art = art_io.load_artifacts(data_dir)
    app = create_app(art, seed=seed, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


def cli_run(argv) -> int:
    """Run the CLI; 0 on success, 1 on input errors, 2 on internal errors."""
    try:
        cli.main(args=list(argv), prog_name="citescape", standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except CitescapeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        click.echo(f"internal error: {exc}", err=True)
        return 2


def main():
    sys.exit(cli_run(sys.argv[1:]))


if __name__ == "__main__":
    main()
