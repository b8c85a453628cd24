"""Estimator-style front end: configure, ``fit`` (load knowledge), ``predict`` chains."""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .document import Document, parse_document, read_document
from .ontology import Ontology, load_heads, load_modifiers, load_names, load_sorts
from .resolver import Resolution, ResolutionConfig, resolve_document
from .scorer import ChainSet, key_chains, muc_score, pool_reports

__all__ = ["CoreferenceResolver", "check_documents", "config_keys"]

def config_keys() -> tuple[str, ...]:
    """Names of the ``ResolutionConfig`` fields settable from outside."""
    return tuple(f.name for f in fields(ResolutionConfig) if f.name != "pleonastic_patterns")


def check_documents(X) -> list[Document]:
    """Coerce ``X`` to a list of documents.

    Accepts a single document or an iterable whose items are ``Document``
    objects, paths to corpus files, or raw corpus text.
    """
    if isinstance(X, (Document, str, Path)):
        X = [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected documents, got {type(X).__name__}") from None
    docs = []
    for item in items:
        if isinstance(item, Document):
            docs.append(item)
        elif isinstance(item, Path):
            docs.append(read_document(item))
        elif isinstance(item, str):
            docs.append(parse_document(item) if item.lstrip().startswith("<") else read_document(item))
        else:
            raise TypeError(f"cannot read a document from {type(item).__name__}")
    return docs


class CoreferenceResolver(BaseEstimator):
    """Rule-based coreference resolver with the MUC-6 settings as defaults.

    ``fit`` does no learning; it loads the sort hierarchy and lexicons
    (``sorts``, ``heads``, ``modifiers``, ``names``: paths or file contents)
    or takes a ready ``ontology``.  When none of these is given the bundled
    business-news lexicons are used, unless ``bundled_ontology`` is false;
    once any file is given, the missing ones are empty.

    >>> from corefie.resources import airline_article
    >>> est = CoreferenceResolver().fit()
    >>> chains = est.predict([airline_article()])[0]
    >>> chains.same_chain("m1", "m2")
    True
    """

    def __init__(
        self,
        window_definite=10,
        window_pronoun=3,
        window_possessive=None,
        soft_window=False,
        destructive=True,
        disable_sort_filter=False,
        disable_number_filter=False,
        disable_modifier_filter=False,
        disable_window=False,
        case_normalize_names=False,
        headline_antecedents=True,
        appositives=True,
        acronym_min_len=2,
        org_sort_name="organization",
        person_sort_name="person",
        location_sort_name="location",
        sorts=None,
        heads=None,
        modifiers=None,
        names=None,
        ontology=None,
        bundled_ontology=True,
    ):
        self.window_definite = window_definite
        self.window_pronoun = window_pronoun
        self.window_possessive = window_possessive
        self.soft_window = soft_window
        self.destructive = destructive
        self.disable_sort_filter = disable_sort_filter
        self.disable_number_filter = disable_number_filter
        self.disable_modifier_filter = disable_modifier_filter
        self.disable_window = disable_window
        self.case_normalize_names = case_normalize_names
        self.headline_antecedents = headline_antecedents
        self.appositives = appositives
        self.acronym_min_len = acronym_min_len
        self.org_sort_name = org_sort_name
        self.person_sort_name = person_sort_name
        self.location_sort_name = location_sort_name
        self.sorts = sorts
        self.heads = heads
        self.modifiers = modifiers
        self.names = names
        self.ontology = ontology
        self.bundled_ontology = bundled_ontology

    def _config(self) -> ResolutionConfig:
        params = self.get_params()
        return ResolutionConfig(**{k: params[k] for k in config_keys()})

    def _ontology(self) -> Ontology:
        if self.ontology is not None:
            if not isinstance(self.ontology, Ontology):
                raise TypeError("ontology must be an Ontology instance")
            return self.ontology
        from . import resources

        given = (self.sorts, self.heads, self.modifiers, self.names)
        bundled = self.bundled_ontology and all(g is None for g in given)
        files = ("biz.sorts", "biz.heads", "biz.modifiers", "biz.names")
        loaders = (load_sorts, load_heads, load_modifiers, load_names)
        parts = []
        for source, name, loader in zip(given, files, loaders):
            if source is None:
                source = resources.read_data(name) if bundled else ""
            parts.append(loader(source))
        return Ontology(*parts)

    def fit(self, X=None, y=None):
        """Validate the settings and load the ontology; ``X`` and ``y`` are ignored."""
        self.config_ = self._config()
        self.ontology_ = self._ontology()
        return self

    def resolve(self, X) -> list[Resolution]:
        """Full resolution results (chains, outcomes, decision trace) per document."""
        check_is_fitted(self, ("config_", "ontology_"))
        return [resolve_document(d, self.config_, self.ontology_) for d in check_documents(X)]

    def predict(self, X) -> list[ChainSet]:
        return [r.chains for r in self.resolve(X)]

    def score(self, X, y: Sequence[ChainSet] | None = None) -> float:
        """Link-based F1 pooled over all documents.

        Key chains come from ``y`` or, when omitted, from the documents'
        gold attributes.
        """
        results = self.resolve(X)
        keys: Iterable[ChainSet] = y if y is not None else [key_chains(r.mentions) for r in results]
        keys = list(keys)
        if len(keys) != len(results):
            raise ValueError(f"got {len(keys)} key chain sets for {len(results)} documents")
        return pool_reports(muc_score(r.chains, k) for r, k in zip(results, keys)).f1
