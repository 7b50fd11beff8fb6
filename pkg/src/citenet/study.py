"""Validation-study harness: stratified sampling, rank-bucket tables,
total-cites vs impact-factor comparison, authorship-position tables,
and rank correlations.

Tables carry typed cells plus per-column format codes so reports render
deterministically: counts as integers, percentages to one decimal
(half-up, so 31.25 -> 31.3), medians as the midpoint of even-sized sets
(reported as x.5).
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from statistics import median as _median

import numpy as np

from .errors import DataError, UndefinedMetricError
from .graph import DocType, DocumentRecord
from .metrics import normalize_author

Cell = str | int | float | None

# StudyTable column format codes (interpreted by reports.format_cell):
# s text, d integer, p percent (1 decimal), m median (integer or x.5),
# f fixed 3 decimals, g general number.


class RankBucket(Enum):
    """JCR-style rank bands."""

    TOP_500 = "top-500"
    FROM_501_TO_1000 = "501-1000"
    BELOW_1000 = "below-1000"
    NOT_INDEXED = "not-indexed"


class AuthorshipClass(Enum):
    """Byline-position bands."""

    PRIMARY = "primary"
    SECOND_TO_FIFTH = "2nd-5th"
    SIXTH_TO_TENTH = "6th-10th"
    ELEVENTH_OR_LOWER = "11th+"


@dataclass(frozen=True)
class RankRecord:
    """A journal's external ranking for one year, by total cites and by
    impact factor. Absent ranks mean not indexed or unranked that year."""

    journal: str
    year: int
    indexed: bool = True
    tc_rank: int | None = None
    if_rank: int | None = None

    def __post_init__(self) -> None:
        for label, rank in (("tc_rank", self.tc_rank), ("if_rank", self.if_rank)):
            if rank is not None and rank < 1:
                raise DataError(f"{label} must be >= 1 when present, got {rank}")

    def rank_for(self, measure: str) -> int | None:
        if measure == "tc":
            return self.tc_rank
        if measure == "if":
            return self.if_rank
        raise DataError(f"unknown measure {measure!r}; use 'tc' or 'if'")


@dataclass(frozen=True)
class StudyTable:
    """A rendered-ready table: one row per subject, typed cells, format
    codes per column, optional summary lines and footnotes."""

    title: str
    columns: tuple[str, ...]
    formats: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]
    summary: tuple[tuple[str, Cell], ...] = ()
    footnotes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.formats) != len(self.columns):
            raise DataError("one format code per column required")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DataError(f"row {row!r} does not match the column count")

    def column(self, name: str) -> list[Cell]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def row_for(self, subject: str) -> tuple[Cell, ...]:
        for row in self.rows:
            if row[0] == subject:
                return row
        raise DataError(f"no row for subject {subject!r}")


def percent(count: int, denominator: int) -> float | None:
    """count/denominator as a percentage, half-up to one decimal.

    Half-up (not banker's) rounding: 93.75 -> 93.8, 31.25 -> 31.3.
    Returns None when the denominator is zero (undefined, rendered
    blank).
    """
    if denominator == 0:
        return None
    value = Decimal(count * 100) / Decimal(denominator)
    return float(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def midpoint_median(values: Sequence[int | float]) -> float | None:
    """Median with even-sized sets reported as the midpoint (x.5)."""
    if not values:
        return None
    return float(_median(values))


def stratified_every_kth(
    docs: Sequence[DocumentRecord], k: int, offset: int | None = None, seed: int | None = None
) -> list[DocumentRecord]:
    """Every k-th document starting from the most cited.

    ``docs`` must already be sorted by cites descending (ties by id);
    positions 1, 1+k, 1+2k, ... are taken, so the top item always leads
    and the sample has ceil(n/k) items. Pass ``seed`` for the randomized
    variant that draws the starting offset from [0, k).
    """
    if k < 1:
        raise DataError(f"sampling interval must be >= 1, got {k}")
    keys = [(-d.cites, d.id) for d in docs]
    if keys != sorted(keys):
        raise DataError("documents are not sorted by cites descending (ties by id)")
    if offset is None:
        offset = random.Random(seed).randrange(k) if seed is not None else 0
    if not 0 <= offset < k:
        raise DataError(f"offset must be in [0, {k}), got {offset}")
    return list(docs[offset::k])


def bucket(rank: int | None) -> RankBucket:
    """Band a rank: <=500, 501-1000, >1000, or not indexed (absent)."""
    if rank is None:
        return RankBucket.NOT_INDEXED
    if rank < 1:
        raise DataError(f"rank must be >= 1, got {rank}")
    if rank <= 500:
        return RankBucket.TOP_500
    if rank <= 1000:
        return RankBucket.FROM_501_TO_1000
    return RankBucket.BELOW_1000


def resolve_rank_records(
    docs: Sequence[DocumentRecord], records: Iterable[RankRecord]
) -> list[tuple[DocumentRecord, RankRecord | None]]:
    """Pair each document with the rank record for (venue, publication
    year), or None when there is no such record (treated as not
    indexed)."""
    by_key = {(r.journal, r.year): r for r in records}
    return [(doc, by_key.get((doc.venue, doc.year))) for doc in docs]


Samples = Mapping[str, Sequence[tuple[DocumentRecord, "RankRecord | None"]]]


def rank_bucket_table(samples_by_subject: Samples, measure: str) -> StudyTable:
    """Per-subject rank-bucket counts/percentages and median rank.

    Percentages are over the items indexed for the measure (rank
    present); unresolved or unranked items count toward the sample size
    only. The median is over the indexed ranks.
    """
    if measure not in ("tc", "if"):
        raise DataError(f"unknown measure {measure!r}; use 'tc' or 'if'")
    if not samples_by_subject:
        raise DataError("no samples given")
    rows = []
    for subject, sample in samples_by_subject.items():
        if not sample:
            raise DataError(f"empty sample for subject {subject!r}")
        ranks = []
        for _, record in sample:
            rank = record.rank_for(measure) if record is not None and record.indexed else None
            if rank is not None:
                ranks.append(rank)
        tallies = {b: 0 for b in RankBucket}
        for rank in ranks:
            tallies[bucket(rank)] += 1
        indexed = len(ranks)
        rows.append(
            (
                subject,
                len(sample),
                tallies[RankBucket.TOP_500],
                percent(tallies[RankBucket.TOP_500], indexed),
                tallies[RankBucket.FROM_501_TO_1000],
                percent(tallies[RankBucket.FROM_501_TO_1000], indexed),
                tallies[RankBucket.BELOW_1000],
                percent(tallies[RankBucket.BELOW_1000], indexed),
                midpoint_median(ranks),
            )
        )
    label = measure.upper()
    return StudyTable(
        title=f"Journal rank buckets by {label} in year of publication",
        columns=(
            "Subject",
            "Sample Size",
            "Top 500",
            "% Top 500",
            "Ranked 501-1000",
            "% Ranked 501-1000",
            "Below 1000",
            "% Below 1000",
            "Median Rank",
        ),
        formats=("s", "d", "d", "p", "d", "p", "d", "p", "m"),
        rows=tuple(rows),
        footnotes=(
            f"Percentages and median are over items with a {label} rank; "
            "items without one count toward the sample size only.",
        ),
    )


def tc_vs_if_comparison(samples_by_subject: Samples) -> StudyTable:
    """Per-subject share of items whose total-cites rank beats their
    impact-factor rank (numerically smaller = higher standing; ties do
    not count as higher). The percentage is over items carrying both
    ranks; items lacking either are excluded from it and reported."""
    if not samples_by_subject:
        raise DataError("no samples given")
    rows = []
    for subject, sample in samples_by_subject.items():
        if not sample:
            raise DataError(f"empty sample for subject {subject!r}")
        indexed = 0
        both = 0
        higher = 0
        for _, record in sample:
            if record is None or not record.indexed:
                continue
            indexed += 1
            if record.tc_rank is None or record.if_rank is None:
                continue
            both += 1
            if record.tc_rank < record.if_rank:
                higher += 1
        rows.append(
            (
                subject,
                len(sample),
                indexed,
                len(sample) - indexed,
                percent(indexed, len(sample)),
                higher,
                percent(higher, both),
            )
        )
    return StudyTable(
        title="Total-cites rank vs impact-factor rank in year of publication",
        columns=(
            "Subject",
            "Sample Size",
            "Indexed",
            "Not Indexed",
            "% Indexed",
            "Higher by TC",
            "% Higher by TC",
        ),
        formats=("s", "d", "d", "d", "p", "d", "p"),
        rows=tuple(rows),
        footnotes=(
            "% Higher by TC is over indexed items carrying both ranks; "
            "not-indexed items are excluded from the percentage.",
        ),
    )


def authorship_position(doc: DocumentRecord, author: str) -> tuple[int, AuthorshipClass]:
    """1-based byline position of ``author`` and its class band.

    Name matching is exact after whitespace/case normalization; no
    fuzzy matching is attempted.
    """
    wanted = normalize_author(author)
    for position, name in enumerate(doc.authors, 1):
        if normalize_author(name) == wanted:
            if position == 1:
                return position, AuthorshipClass.PRIMARY
            if position <= 5:
                return position, AuthorshipClass.SECOND_TO_FIFTH
            if position <= 10:
                return position, AuthorshipClass.SIXTH_TO_TENTH
            return position, AuthorshipClass.ELEVENTH_OR_LOWER
    raise DataError(f"author {author!r} not in the byline of document {doc.id!r}")


def authorship_table(
    docs_by_subject: Mapping[str, Sequence[DocumentRecord]],
    authors: Mapping[str, str],
    reviews_only: bool = False,
) -> StudyTable:
    """Per-subject authorship-position pattern.

    Each subject's documents must be sorted by cites descending (their
    1-based positions are the cites ranks). With ``reviews_only`` the
    table covers just review-type documents and adds their rank
    positions; pass the full document list in that case rather than a
    sample. The summary line is the overall share of primary
    authorship.
    """
    if not docs_by_subject:
        raise DataError("no documents given")
    rows = []
    total_works = 0
    total_primary = 0
    for subject, docs in docs_by_subject.items():
        try:
            author = authors[subject]
        except KeyError:
            raise DataError(f"no author name configured for subject {subject!r}") from None
        considered: list[tuple[int, DocumentRecord]] = [
            (position, doc)
            for position, doc in enumerate(docs, 1)
            if not reviews_only or doc.doc_type is DocType.REVIEW
        ]
        if not considered:
            raise DataError(f"no documents to classify for subject {subject!r}")
        tallies = {c: 0 for c in AuthorshipClass}
        author_counts = []
        for _, doc in considered:
            _, klass = authorship_position(doc, author)
            tallies[klass] += 1
            author_counts.append(len(doc.authors))
        size = len(considered)
        total_works += size
        total_primary += tallies[AuthorshipClass.PRIMARY]
        row: tuple[Cell, ...] = (
            subject,
            size,
            *(
                (midpoint_median([rank for rank, _ in considered]),)
                if reviews_only
                else (f"{min(author_counts)} to {max(author_counts)}",)
            ),
            midpoint_median(author_counts),
            tallies[AuthorshipClass.PRIMARY],
            percent(tallies[AuthorshipClass.PRIMARY], size),
            tallies[AuthorshipClass.SECOND_TO_FIFTH],
            percent(tallies[AuthorshipClass.SECOND_TO_FIFTH], size),
            tallies[AuthorshipClass.SIXTH_TO_TENTH],
            percent(tallies[AuthorshipClass.SIXTH_TO_TENTH], size),
            tallies[AuthorshipClass.ELEVENTH_OR_LOWER],
            percent(tallies[AuthorshipClass.ELEVENTH_OR_LOWER], size),
        )
        rows.append(row)

    shared = (
        "Primary",
        "% Primary",
        "2nd to 5th",
        "% 2nd to 5th",
        "6th to 10th",
        "% 6th to 10th",
        "11th and Lower",
        "% 11th and Lower",
    )
    if reviews_only:
        title = "Authorship pattern of review articles"
        columns = ("Subject", "Reviews", "Cites Rank Median", "Authors Median", *shared)
        formats = ("s", "d", "m", "m", "d", "p", "d", "p", "d", "p", "d", "p")
        summary_label = "Overall % primary author of review articles"
    else:
        title = "Authorship pattern of sampled works"
        columns = ("Subject", "Sample Size", "Authors Range", "Authors Median", *shared)
        formats = ("s", "d", "s", "m", "d", "p", "d", "p", "d", "p", "d", "p")
        summary_label = "Overall % primary author of works"
    return StudyTable(
        title=title,
        columns=columns,
        formats=formats,
        rows=tuple(rows),
        summary=((summary_label, percent(total_primary, total_works)),),
    )


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties given the average of their positions."""
    order = np.lexsort((values,))
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def rank_correlation(
    xs: Sequence[float], ys: Sequence[float], method: str = "pearson"
) -> float:
    """Pearson or Spearman correlation coefficient.

    Spearman converts both lists to average ranks (ties averaged) and
    applies Pearson. Raises :class:`UndefinedMetricError` when either
    side has zero variance.
    """
    if method not in ("pearson", "spearman"):
        raise DataError(f"unknown method {method!r}; use 'pearson' or 'spearman'")
    if len(xs) != len(ys):
        raise DataError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 3:
        raise DataError(f"need at least 3 pairs, got {len(xs)}")
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DataError("inputs must be finite")
    if method == "spearman":
        x = _average_ranks(x)
        y = _average_ranks(y)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedMetricError("correlation undefined: an input has zero variance")
    return float((dx @ dy) / math.sqrt(sx * sy))
