"""Rule-based entity coreference resolution for shallow-annotated documents."""

from .alias import NameRecord, is_acronym, is_alias, resolve_names
from .document import (
    Document,
    DomainError,
    FormatError,
    RegionKind,
    SentencePos,
    Span,
    accessible_region,
    parse_document,
    read_document,
    sentence_distance,
)
from .estimator import CoreferenceResolver
from .mentions import DetType, DiscourseEntity, Mention, build_mentions, derive_features, detect_pleonastic, merge, new_entity
from .ontology import (
    TOP,
    ModifierLexicon,
    NumberValue,
    Ontology,
    SortHierarchy,
    SortRelation,
    load_ontology,
    load_sorts,
    modifier_consistent,
    number_consistent,
    sort_relation,
)
from .resolver import ResolutionConfig, ResolutionOutcome, collect, filter_candidates, is_anaphoric, order, resolve_document
from .scorer import ChainSet, key_chains, muc_score, per_type_report

__version__ = "0.1.0"

__all__ = [
    "ChainSet", "CoreferenceResolver", "DetType", "DiscourseEntity", "Document", "DomainError", "FormatError",
    "Mention", "ModifierLexicon", "NameRecord", "NumberValue", "Ontology", "RegionKind",
    "ResolutionConfig", "ResolutionOutcome", "SentencePos", "SortHierarchy", "SortRelation",
    "Span", "TOP", "accessible_region", "build_mentions", "collect", "derive_features",
    "detect_pleonastic", "filter_candidates", "is_acronym", "is_alias", "is_anaphoric",
    "key_chains", "load_ontology", "load_sorts", "merge", "modifier_consistent", "muc_score",
    "new_entity", "number_consistent", "order", "parse_document", "per_type_report",
    "read_document", "resolve_document", "resolve_names", "sentence_distance", "sort_relation",
]
