"""Citation-network analytics: link-based ranking measures (PageRank,
hubs/authorities, journal influence weights), classical journal metrics
(total cites, impact factor, h-index), concentration analysis
(Bradford zones, share curves), and a validation-study harness."""

from .concentration import (
    BradfordPartition,
    BradfordZone,
    RankedCounts,
    ShareCurve,
    bradford_partition,
    count_above_threshold,
    journals_for_share,
    share_curve,
    stability_overlap,
)
from .errors import CitenetError, DataError, UndefinedMetricError
from .formats import (
    CorpusBundle,
    load_corpus,
    write_docs,
    write_edges,
    write_journal_matrix,
)
from .graph import (
    CitationGraph,
    DocType,
    DocumentRecord,
    JournalCitationMatrix,
    TimeWindow,
    aggregate_to_journal_matrix,
    build_graph,
)
from .metrics import (
    CitationProfile,
    ImpactFactorInput,
    ProfileSummary,
    h_index,
    impact_factor,
    impact_factor_from_graph,
    journal_article_counts,
    journal_cite_counts,
    journal_reference_counts,
    profile_from_graph,
    profile_summary,
    total_cites,
)
from .ranking import (
    InfluenceResult,
    PageRankParams,
    ScoreVector,
    hits,
    influence_metrics,
    influence_per_publication,
    influence_weights,
    pagerank,
    total_influence,
)
from .study import (
    AuthorshipClass,
    RankBucket,
    RankRecord,
    StudyTable,
    authorship_position,
    authorship_table,
    bucket,
    rank_bucket_table,
    rank_correlation,
    resolve_rank_records,
    stratified_every_kth,
    tc_vs_if_comparison,
)

__version__ = "0.1.0"

__all__ = [
    "AuthorshipClass",
    "BradfordPartition",
    "BradfordZone",
    "CitationGraph",
    "CitationProfile",
    "CitenetError",
    "CorpusBundle",
    "DataError",
    "DocType",
    "DocumentRecord",
    "ImpactFactorInput",
    "InfluenceResult",
    "JournalCitationMatrix",
    "PageRankParams",
    "ProfileSummary",
    "RankBucket",
    "RankRecord",
    "RankedCounts",
    "ScoreVector",
    "ShareCurve",
    "StudyTable",
    "TimeWindow",
    "UndefinedMetricError",
    "aggregate_to_journal_matrix",
    "authorship_position",
    "authorship_table",
    "bradford_partition",
    "bucket",
    "build_graph",
    "count_above_threshold",
    "h_index",
    "hits",
    "impact_factor",
    "impact_factor_from_graph",
    "influence_metrics",
    "influence_per_publication",
    "influence_weights",
    "journal_article_counts",
    "journal_cite_counts",
    "journal_reference_counts",
    "journals_for_share",
    "load_corpus",
    "pagerank",
    "profile_from_graph",
    "profile_summary",
    "rank_bucket_table",
    "rank_correlation",
    "resolve_rank_records",
    "share_curve",
    "stability_overlap",
    "stratified_every_kth",
    "tc_vs_if_comparison",
    "total_cites",
    "total_influence",
    "write_docs",
    "write_edges",
    "write_journal_matrix",
]
