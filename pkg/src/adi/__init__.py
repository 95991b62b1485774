"""Abbreviation definition identification: extraction, reranking, evaluation."""

from adi.extract import (
    Candidate,
    DefinitionPattern,
    DefinitionSite,
    Document,
    NBestList,
    SfLfPair,
    extract_pairs,
    find_definition_sites,
    generate_nbest,
)
from adi.suffix_index import (
    SuffixIndex,
    build_index,
    count_occurrences,
    definition_freq,
    load_index,
    save_index,
)
from adi.reranker import (
    FeatureSet,
    FeatureVector,
    ModelCoefficients,
    RerankedList,
    ScoredCandidate,
    charmatch,
    featurize,
    preset,
    rerank,
    score,
)
from adi.training import TrainingInstance, train
from adi.evaluation import (
    CharmatchReport,
    ConfidenceReport,
    EvalReport,
    GoldSet,
    RankHistogram,
    charmatch_conditional,
    confidence_summary,
    evaluate,
    normalize_pair,
    rank_histogram,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "CharmatchReport",
    "ConfidenceReport",
    "DefinitionPattern",
    "DefinitionSite",
    "Document",
    "EvalReport",
    "FeatureSet",
    "FeatureVector",
    "GoldSet",
    "ModelCoefficients",
    "NBestList",
    "RankHistogram",
    "RerankedList",
    "ScoredCandidate",
    "SfLfPair",
    "SuffixIndex",
    "TrainingInstance",
    "build_index",
    "charmatch",
    "charmatch_conditional",
    "confidence_summary",
    "count_occurrences",
    "definition_freq",
    "evaluate",
    "extract_pairs",
    "featurize",
    "find_definition_sites",
    "generate_nbest",
    "load_index",
    "normalize_pair",
    "preset",
    "rank_histogram",
    "rerank",
    "save_index",
    "score",
    "train",
]
