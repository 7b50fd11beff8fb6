"""CSV file formats and corpus loading.

All files are UTF-8 CSV with a header row and LF line endings:

  edges.csv         citing_id,cited_id  (one row per citation instance)
  docs.csv          id,venue,year,doc_type,cites,authors
                    (authors ';'-separated, byline order)
  journal_matrix.csv  journal,<j1>,...,<jn>,pubs  (square count block)
  rank_records.csv  journal,year,indexed,tc_rank,if_rank  (empty = unranked)
  profile.csv       cites  (one count per row)

In strict mode any malformed row aborts the load; otherwise bad rows
are skipped and enumerated in the load report with line numbers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .graph import CitationGraph, DocType, DocumentRecord, JournalCitationMatrix, build_graph
from .metrics import CitationProfile
from .study import RankRecord

_TRUE = {"true", "1", "yes", "y"}
_FALSE = {"false", "0", "no", "n"}


@dataclass
class CorpusBundle:
    """In-memory corpus plus the warnings collected while loading it."""

    graph: CitationGraph | None = None
    matrix: JournalCitationMatrix | None = None
    rank_records: list[RankRecord] = field(default_factory=list)
    profile: CitationProfile | None = None
    warnings: list[str] = field(default_factory=list)


class _RowReader:
    """CSV row iterator that validates the header and tracks line numbers."""

    def __init__(self, path: Path, expected_header: list[str], strict: bool):
        self.path = path
        self.strict = strict
        self.warnings: list[str] = []
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != expected_header:
            raise DataError(
                f"{path}: expected header {','.join(expected_header)!r}, "
                f"got {','.join(rows[0]) if rows else '<empty file>'!r}"
            )
        self.header = rows[0]
        self.rows = rows[1:]

    def complain(self, lineno: int, message: str) -> None:
        note = f"{self.path}:{lineno}: {message}"
        if self.strict:
            raise DataError(note)
        self.warnings.append(note)

    def __iter__(self):
        for lineno, row in enumerate(self.rows, 2):
            if not row or all(not cell for cell in row):
                continue
            yield lineno, row


def _read_edges_with_lines(
    path: Path, strict: bool
) -> tuple[list[tuple[int, str, str]], list[str]]:
    reader = _RowReader(path, ["citing_id", "cited_id"], strict)
    edges: list[tuple[int, str, str]] = []
    for lineno, row in reader:
        if len(row) != 2 or not row[0] or not row[1]:
            reader.complain(lineno, f"malformed edge row {row!r}")
            continue
        edges.append((lineno, row[0], row[1]))
    return edges, reader.warnings


def read_edges(path: Path, strict: bool = False) -> tuple[list[tuple[str, str]], list[str]]:
    rows, warnings = _read_edges_with_lines(path, strict)
    return [(citing, cited) for _, citing, cited in rows], warnings


def read_docs(path: Path, strict: bool = False) -> tuple[list[DocumentRecord], list[str]]:
    reader = _RowReader(path, ["id", "venue", "year", "doc_type", "cites", "authors"], strict)
    docs: list[DocumentRecord] = []
    seen: set[str] = set()
    for lineno, row in reader:
        if len(row) != 6:
            reader.complain(lineno, f"expected 6 fields, got {len(row)}")
            continue
        doc_id, venue, year_s, type_s, cites_s, authors_s = row
        try:
            doc = DocumentRecord(
                id=doc_id,
                venue=venue,
                year=int(year_s),
                doc_type=DocType(type_s) if type_s else DocType.OTHER,
                cites=int(cites_s) if cites_s else 0,
                authors=tuple(a.strip() for a in authors_s.split(";") if a.strip()),
            )
        except (ValueError, DataError) as exc:
            reader.complain(lineno, str(exc))
            continue
        if doc.id in seen:
            reader.complain(lineno, f"duplicate document id {doc.id!r}")
            continue
        seen.add(doc.id)
        docs.append(doc)
    return docs, reader.warnings


def read_rank_records(path: Path, strict: bool = False) -> tuple[list[RankRecord], list[str]]:
    reader = _RowReader(path, ["journal", "year", "indexed", "tc_rank", "if_rank"], strict)
    records: list[RankRecord] = []

    def parse_rank(text: str) -> int | None:
        return int(text) if text else None

    for lineno, row in reader:
        if len(row) != 5 or not row[0]:
            reader.complain(lineno, f"malformed rank row {row!r}")
            continue
        flag = row[2].strip().casefold()
        if flag not in _TRUE | _FALSE:
            reader.complain(lineno, f"indexed flag must be true/false, got {row[2]!r}")
            continue
        try:
            records.append(
                RankRecord(
                    journal=row[0],
                    year=int(row[1]),
                    indexed=flag in _TRUE,
                    tc_rank=parse_rank(row[3]),
                    if_rank=parse_rank(row[4]),
                )
            )
        except (ValueError, DataError) as exc:
            reader.complain(lineno, str(exc))
    return records, reader.warnings


def read_profile(path: Path, strict: bool = False) -> tuple[CitationProfile, list[str]]:
    reader = _RowReader(path, ["cites"], strict)
    counts: list[int] = []
    for lineno, row in reader:
        try:
            count = int(row[0])
            if count < 0:
                raise ValueError("negative count")
        except ValueError:
            reader.complain(lineno, f"bad citation count {row[0]!r}")
            continue
        counts.append(count)
    return CitationProfile(tuple(counts)), reader.warnings


def read_journal_matrix(path: Path) -> JournalCitationMatrix:
    """Read a square journal-to-journal count matrix (always strict)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) < 3 or rows[0][0] != "journal" or rows[0][-1] != "pubs":
        raise DataError(f"{path}: header must be journal,<journal...>,pubs")
    journals = tuple(rows[0][1:-1])
    if len(set(journals)) != len(journals):
        raise DataError(f"{path}: duplicate journal names in header")
    n = len(journals)
    counts = np.zeros((n, n), dtype=np.int64)
    pubs = np.zeros(n, dtype=np.int64)
    seen: set[str] = set()
    index = {j: i for i, j in enumerate(journals)}
    for lineno, row in enumerate(rows[1:], 2):
        if not row or all(not cell for cell in row):
            continue
        if len(row) != n + 2:
            raise DataError(f"{path}:{lineno}: expected {n + 2} fields, got {len(row)}")
        name = row[0]
        if name not in index:
            raise DataError(f"{path}:{lineno}: journal {name!r} not in header")
        if name in seen:
            raise DataError(f"{path}:{lineno}: duplicate row for journal {name!r}")
        seen.add(name)
        try:
            counts[index[name]] = [int(cell) for cell in row[1:-1]]
            pubs[index[name]] = int(row[-1])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
    missing = set(journals) - seen
    if missing:
        raise DataError(f"{path}: missing rows for journals {sorted(missing)}")
    return JournalCitationMatrix(journals=journals, counts=counts, pubs=pubs)


def load_corpus(
    edges: Path | None = None,
    docs: Path | None = None,
    matrix: Path | None = None,
    ranks: Path | None = None,
    profile: Path | None = None,
    strict: bool = False,
    allow_self_loops: bool = False,
) -> CorpusBundle:
    """Load and cross-validate a corpus from its files.

    A graph is built when an edges and/or docs file is given. With both
    present, edge endpoints lacking a document record are an error in
    strict mode (the row is named) and a warning otherwise.
    """
    if not any((edges, docs, matrix, ranks, profile)):
        raise DataError("no input files given")
    bundle = CorpusBundle()

    edge_rows: list[tuple[int, str, str]] = []
    doc_rows: list[DocumentRecord] = []
    if edges is not None:
        edge_rows, warnings = _read_edges_with_lines(edges, strict)
        bundle.warnings.extend(warnings)
    if docs is not None:
        doc_rows, warnings = read_docs(docs, strict)
        bundle.warnings.extend(warnings)
    if edges is not None or docs is not None:
        if edges is not None and docs is not None:
            known = {d.id for d in doc_rows}
            for lineno, citing, cited in edge_rows:
                dangling = [x for x in (citing, cited) if x not in known]
                if dangling:
                    note = (
                        f"{edges}:{lineno}: edge ({citing},{cited}) references "
                        f"unknown document id(s) {', '.join(dangling)}"
                    )
                    if strict:
                        raise DataError(note)
                    bundle.warnings.append(note)
        if not allow_self_loops:
            kept = []
            for lineno, citing, cited in edge_rows:
                if citing == cited:
                    note = f"{edges}:{lineno}: self-loop on {citing!r} skipped"
                    if strict:
                        raise DataError(note)
                    bundle.warnings.append(note)
                    continue
                kept.append((lineno, citing, cited))
            edge_rows = kept
        bundle.graph = build_graph(
            [(citing, cited) for _, citing, cited in edge_rows],
            doc_rows,
            allow_self_loops=allow_self_loops,
        )

    if matrix is not None:
        bundle.matrix = read_journal_matrix(matrix)
    if ranks is not None:
        records, warnings = read_rank_records(ranks, strict)
        bundle.rank_records = records
        bundle.warnings.extend(warnings)
    if profile is not None:
        prof, warnings = read_profile(profile, strict)
        bundle.profile = prof
        bundle.warnings.extend(warnings)
    return bundle


def write_edges(graph: CitationGraph, path: Path) -> None:
    """Write the edge list, one row per citation instance, sorted."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["citing_id", "cited_id"])
        for citing, cited, mult in graph.edges:
            for _ in range(mult):
                writer.writerow([citing, cited])


def write_docs(graph: CitationGraph, path: Path) -> None:
    """Write the document records sorted by id."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "venue", "year", "doc_type", "cites", "authors"])
        for doc_id in sorted(graph.metadata):
            doc = graph.metadata[doc_id]
            writer.writerow(
                [doc.id, doc.venue, doc.year, doc.doc_type.value, doc.cites, ";".join(doc.authors)]
            )


def write_journal_matrix(matrix: JournalCitationMatrix, path: Path) -> None:
    """Write a journal matrix in the journal,<journal...>,pubs layout."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["journal", *matrix.journals, "pubs"])
        for i, journal in enumerate(matrix.journals):
            writer.writerow([journal, *matrix.counts[i].tolist(), int(matrix.pubs[i])])
