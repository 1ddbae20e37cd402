"""Publication corpus: loading, validation, statistics, and file exports.

A corpus is the universe the rest of the pipeline operates on. Publications
get dense integer handles in file order; citation pairs are stored as handle
pairs and kept verbatim (duplicates, self citations and year inconsistencies
are cleaned later when the citation network is built).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Literal

from .errors import InputError

YEAR_MIN = 1500
YEAR_MAX = 2100

PublicationFormat = Literal["jsonl", "tsv"]

_TSV_HEADER = ["id", "year", "journal", "title", "abstract", "authors"]


@dataclass(frozen=True)
class Publication:
    """One bibliographic record."""

    id: str
    title: str
    authors: tuple[str, ...]
    journal: str
    year: int
    abstract: str | None = None

    def __post_init__(self):
        if not self.id:
            raise InputError("publication id must be nonempty")
        if not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise InputError(
                f"year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}] for id {self.id!r}"
            )


@dataclass(frozen=True)
class LoadReport:
    n_publications: int
    n_citation_pairs: int
    dropped_unresolved: int


@dataclass(frozen=True)
class CorpusStats:
    n_publications: int
    n_journals: int
    n_citation_pairs: int


@dataclass
class Corpus:
    """Loaded publications plus resolved citation pairs.

    Handles are 0..n-1 in file order. citation_pairs reference handles.
    """

    publications: list[Publication]
    citation_pairs: list[tuple[int, int]]
    id_index: dict[str, int]
    report: LoadReport = field(compare=False, default=LoadReport(0, 0, 0))

    @property
    def n(self) -> int:
        return len(self.publications)

    def handle(self, pub_id: str) -> int:
        try:
            return self.id_index[pub_id]
        except KeyError:
            raise InputError(f"unknown publication id {pub_id!r}") from None


def _text_lines(source: IO) -> Iterable[str]:
    """Yield decoded lines from a byte or text stream."""
    first = source.read(0)
    if isinstance(first, bytes):
        source = io.TextIOWrapper(source, encoding="utf-8")
    return source


def _parse_jsonl_publication(line: str, lineno: int) -> Publication:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InputError(f"publications line {lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise InputError(f"publications line {lineno}: expected an object")
    try:
        pub_id = obj["id"]
        title = obj["title"]
        authors = obj["authors"]
        journal = obj["journal"]
        year = obj["year"]
    except KeyError as exc:
        raise InputError(f"publications line {lineno}: missing key {exc.args[0]!r}") from None
    abstract = obj.get("abstract")
    if (
        not isinstance(pub_id, str)
        or not isinstance(title, str)
        or not isinstance(journal, str)
        or not isinstance(year, int)
        or isinstance(year, bool)
        or not isinstance(authors, list)
        or not all(isinstance(a, str) for a in authors)
        or not (abstract is None or isinstance(abstract, str))
    ):
        raise InputError(f"publications line {lineno}: field with wrong type")
    try:
        return Publication(
            id=pub_id,
            title=title,
            authors=tuple(authors),
            journal=journal,
            year=year,
            abstract=abstract,
        )
    except InputError as exc:
        raise InputError(f"publications line {lineno}: {exc}") from None


def _parse_tsv_publication(line: str, lineno: int) -> Publication:
    cols = line.split("\t")
    if len(cols) != len(_TSV_HEADER):
        raise InputError(
            f"publications line {lineno}: expected {len(_TSV_HEADER)} columns, got {len(cols)}"
        )
    pub_id, year_s, journal, title, abstract, authors_s = cols
    try:
        year = int(year_s)
    except ValueError:
        raise InputError(f"publications line {lineno}: year {year_s!r} is not an integer") from None
    authors = tuple(a for a in authors_s.split("; ") if a)
    try:
        return Publication(
            id=pub_id,
            title=title,
            authors=authors,
            journal=journal,
            year=year,
            abstract=abstract or None,
        )
    except InputError as exc:
        raise InputError(f"publications line {lineno}: {exc}") from None


def load_corpus(
    publications_source: IO,
    citations_source: IO,
    format: PublicationFormat = "jsonl",
) -> Corpus:
    """Load publications and resolved citation id pairs into a Corpus.

    Citation pairs referencing ids absent from the publication file are
    dropped and counted in the returned corpus's load report. Malformed
    lines and duplicate ids raise InputError.
    """
    if format not in ("jsonl", "tsv"):
        raise InputError(f"unknown format {format!r} (expected 'jsonl' or 'tsv')")

    publications: list[Publication] = []
    id_index: dict[str, int] = {}
    lines = _text_lines(publications_source)
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        if format == "tsv" and not header_seen:
            if [c.strip() for c in line.split("\t")] != _TSV_HEADER:
                raise InputError(
                    f"publications line {lineno}: expected header {chr(9).join(_TSV_HEADER)!r}"
                )
            header_seen = True
            continue
        if format == "jsonl":
            pub = _parse_jsonl_publication(line, lineno)
        else:
            pub = _parse_tsv_publication(line, lineno)
        if pub.id in id_index:
            raise InputError(f"duplicate publication id {pub.id!r}")
        id_index[pub.id] = len(publications)
        publications.append(pub)
    if format == "tsv" and not header_seen:
        raise InputError("publications file is empty, header row required")

    citation_pairs: list[tuple[int, int]] = []
    dropped = 0
    for lineno, raw in enumerate(_text_lines(citations_source), start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise InputError(f"citations line {lineno}: expected 2 columns, got {len(cols)}")
        citing, cited = cols
        if citing in id_index and cited in id_index:
            citation_pairs.append((id_index[citing], id_index[cited]))
        else:
            dropped += 1

    report = LoadReport(
        n_publications=len(publications),
        n_citation_pairs=len(citation_pairs),
        dropped_unresolved=dropped,
    )
    return Corpus(publications, citation_pairs, id_index, report)


def load_corpus_files(
    publications_path: str | Path,
    citations_path: str | Path,
    format: PublicationFormat = "jsonl",
) -> Corpus:
    with open(publications_path, "rb") as pubs, open(citations_path, "rb") as cits:
        return load_corpus(pubs, cits, format)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Exact counts. Journal identity is trimmed, case-folded string equality."""
    journals = {p.journal.strip().casefold() for p in corpus.publications}
    journals.discard("")
    return CorpusStats(
        n_publications=corpus.n,
        n_journals=len(journals),
        n_citation_pairs=len(corpus.citation_pairs),
    )


def publication_jsonl_line(pub: Publication) -> str:
    obj: dict = {"id": pub.id, "title": pub.title}
    if pub.abstract is not None:
        obj["abstract"] = pub.abstract
    obj["authors"] = list(pub.authors)
    obj["journal"] = pub.journal
    obj["year"] = pub.year
    return json.dumps(obj, ensure_ascii=False)


def export_corpus(corpus: Corpus, publications_path: str | Path, citations_path: str | Path) -> None:
    """Write publications.jsonl and citations.tsv preserving handle order.

    Reloading the written files yields an identical corpus.
    """
    with open(publications_path, "w", encoding="utf-8") as out:
        for pub in corpus.publications:
            out.write(publication_jsonl_line(pub) + "\n")
    with open(citations_path, "w", encoding="utf-8") as out:
        pubs = corpus.publications
        for citing, cited in corpus.citation_pairs:
            out.write(f"{pubs[citing].id}\t{pubs[cited].id}\n")
