"""Bundled ontology files and the annotated example article."""

from __future__ import annotations

from importlib import resources

from .document import Document, parse_document
from .ontology import Ontology, load_ontology

__all__ = ["biz_ontology", "data_path", "airline_article", "read_data"]


def data_path(name: str):
    return resources.files("corefie") / "data" / name


def read_data(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def biz_ontology() -> Ontology:
    """The business-news sort hierarchy, head, modifier and name lexicons."""
    return load_ontology(
        read_data("biz.sorts"), read_data("biz.heads"), read_data("biz.modifiers"), read_data("biz.names"),
    )


def airline_article() -> Document:
    """The annotated airline-mediation article with gold chains."""
    return parse_document(read_data("airline_article.sgm"))
