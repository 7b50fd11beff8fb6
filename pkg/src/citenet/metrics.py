"""Classical size-dependent and size-corrected measures: total cites,
two-year impact factor, and the h-index."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DataError, UndefinedMetricError
from .graph import CitationGraph, DocType, JournalCitationMatrix, TimeWindow


@dataclass(frozen=True)
class ImpactFactorInput:
    """Numerator and denominator of a two-year impact factor: citations
    received in the cite year to items from the two source years, over
    the number of such items."""

    cites_to_window: int
    items_in_window: int

    def __post_init__(self) -> None:
        if self.cites_to_window < 0:
            raise DataError("cites_to_window must be >= 0")
        if self.items_in_window < 1:
            raise DataError("items_in_window must be >= 1 (zero-item journals are excluded)")


@dataclass(frozen=True)
class CitationProfile:
    """Citation counts of one author's publications, in any order."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if any(c < 0 for c in self.counts):
            raise DataError("citation counts must be nonnegative")

    def __len__(self) -> int:
        return len(self.counts)


class ProfileSummary(NamedTuple):
    """Summary of an author's h-core (the h most-cited publications)."""

    h_index: int
    max_cites: int
    cites_range: int
    total_cites: int


def total_cites(
    source: CitationGraph | JournalCitationMatrix,
    journal: str,
    window: TimeWindow | None = None,
) -> int:
    """Raw citations received by ``journal``.

    From a graph: references made in ``window.cite_year`` to the
    journal's documents, with no cap on the cited item's age (this is
    the annual cited count, so old classics keep contributing). From a
    matrix: the journal's column sum, under whatever window the matrix
    was aggregated with (``window`` is not consulted).
    """
    if isinstance(source, JournalCitationMatrix):
        return int(source.citation_totals()[source.index(journal)])

    if window is None:
        raise DataError("total_cites from a graph needs a window (its cite_year is used)")
    meta = source.metadata
    if journal not in source.journals():
        raise DataError(f"unknown journal {journal!r}")
    total = 0
    for citing, cited, mult in source.edges:
        citing_doc = meta.get(citing)
        if citing_doc is None or citing_doc.year != window.cite_year:
            continue
        cited_doc = meta.get(cited)
        if cited_doc is not None and cited_doc.venue == journal:
            total += mult
    return total


def impact_factor(inp: ImpactFactorInput) -> float:
    """Citations to the two-year window divided by items published in it."""
    return inp.cites_to_window / inp.items_in_window


def impact_factor_from_graph(
    graph: CitationGraph,
    journal: str,
    cite_year: int,
    doc_types: Iterable[DocType] | None = None,
) -> float:
    """Two-year impact factor computed from a document graph.

    Items are the journal's documents from the two preceding years
    (all doc types by default; pass ``doc_types`` to restrict the
    countable set, which filters numerator and denominator alike).
    Citations are references to those items made in ``cite_year``.
    Raises :class:`UndefinedMetricError` when the journal published
    nothing in the window, e.g. a journal whose cited material is all
    old superclassics; callers exclude it rather than report 0.
    """
    if journal not in graph.journals():
        raise DataError(f"unknown journal {journal!r}")
    window = TimeWindow.two_year(cite_year)
    allowed = set(doc_types) if doc_types is not None else None
    meta = graph.metadata

    items = {
        doc.id
        for doc in meta.values()
        if doc.venue == journal
        and window.covers_source(doc.year)
        and (allowed is None or doc.doc_type in allowed)
    }
    if not items:
        raise UndefinedMetricError(
            f"journal {journal!r} published no countable items in "
            f"{window.source_years[0]}-{window.source_years[1]}"
        )

    cites = 0
    for citing, cited, mult in graph.edges:
        if cited not in items:
            continue
        citing_doc = meta.get(citing)
        if citing_doc is not None and citing_doc.year == cite_year:
            cites += mult
    return impact_factor(ImpactFactorInput(cites, len(items)))


def h_index(profile: CitationProfile | Sequence[int]) -> int:
    """Largest h such that at least h publications have >= h citations each."""
    counts = profile.counts if isinstance(profile, CitationProfile) else tuple(profile)
    ranked = sorted(counts, reverse=True)
    h = 0
    for i, c in enumerate(ranked, 1):
        if c >= i:
            h = i
        else:
            break
    return h


def profile_summary(profile: CitationProfile | Sequence[int]) -> ProfileSummary:
    """h-index plus max / range / total cites over the h-core.

    The cites range is max minus min over the h most-cited publications
    (the h-core); an empty profile summarizes to all zeros.
    """
    counts = profile.counts if isinstance(profile, CitationProfile) else tuple(profile)
    h = h_index(counts)
    if h == 0:
        return ProfileSummary(0, 0, 0, 0)
    core = sorted(counts, reverse=True)[:h]
    return ProfileSummary(h, core[0], core[0] - core[-1], sum(core))


def journal_cite_counts(graph: CitationGraph, cite_year: int) -> dict[str, int]:
    """Citations received per journal from references made in ``cite_year``
    (no cap on cited-item age). Journals receiving none report 0."""
    meta = graph.metadata
    counts = dict.fromkeys(graph.journals(), 0)
    for citing, cited, mult in graph.edges:
        citing_doc = meta.get(citing)
        if citing_doc is None or citing_doc.year != cite_year:
            continue
        cited_doc = meta.get(cited)
        if cited_doc is not None and cited_doc.venue:
            counts[cited_doc.venue] += mult
    return counts


def journal_article_counts(graph: CitationGraph, year: int) -> dict[str, int]:
    """Documents published per journal in ``year``."""
    counts = dict.fromkeys(graph.journals(), 0)
    for doc in graph.metadata.values():
        if doc.venue and doc.year == year:
            counts[doc.venue] += 1
    return counts


def journal_reference_counts(graph: CitationGraph, year: int) -> dict[str, int]:
    """References given per journal by documents published in ``year``."""
    meta = graph.metadata
    counts = dict.fromkeys(graph.journals(), 0)
    for citing, _, mult in graph.edges:
        citing_doc = meta.get(citing)
        if citing_doc is not None and citing_doc.venue and citing_doc.year == year:
            counts[citing_doc.venue] += mult
    return counts


def normalize_author(name: str) -> str:
    """Whitespace- and case-normalized form used for exact name matching."""
    return " ".join(name.split()).casefold()


def profile_from_graph(graph: CitationGraph, author: str) -> CitationProfile:
    """Citation profile of an author from graph in-degrees.

    A closed-corpus variant of the externally supplied counts: each
    publication's count is its in-degree in the graph. Name matching is
    exact after whitespace/case normalization.
    """
    wanted = normalize_author(author)
    counts = [
        graph.in_degree(doc.id)
        for doc in graph.metadata.values()
        if any(normalize_author(a) == wanted for a in doc.authors)
    ]
    if not counts:
        raise DataError(f"no documents authored by {author!r}")
    return CitationProfile(tuple(counts))
