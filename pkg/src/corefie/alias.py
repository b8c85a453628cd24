"""Proper-name coreference by alias and acronym matching."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DESIGNATORS",
    "HONORIFICS",
    "NameMatch",
    "NameRecord",
    "is_acronym",
    "is_alias",
    "name_tokens",
    "resolve_names",
    "types_compatible",
]

HONORIFICS = frozenset({"mr.", "mrs.", "ms.", "dr.", "mr", "mrs", "ms", "dr", "miss", "prof."})
DESIGNATORS = frozenset({"inc.", "inc", "corp.", "corp", "co.", "co", "&", "ltd.", "ltd"})
NAME_TYPES = ("PERSON", "LOCATION", "ORGANIZATION", "UNKNOWN")


@dataclass
class NameRecord:
    """A name already seen in the document.

    ``key`` orders records by recency of mention; ``sort`` is the sort of the
    entity the name belongs to.
    """

    eid: int
    tokens: tuple[str, ...]
    name_type: str = "UNKNOWN"
    key: tuple = ()
    sort: str | None = None
    mention_id: str | None = None

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a name needs at least one token")
        if self.name_type not in NAME_TYPES:
            raise ValueError(f"bad name type {self.name_type!r}")


@dataclass(frozen=True)
class NameMatch:
    mention_id: str
    target_eid: int
    how: str  # exact, alias or acronym


def name_tokens(surface: str, case_normalize: bool = False) -> tuple[str, ...]:
    """Whitespace tokens with leading honorifics removed."""
    tokens = surface.split()
    while len(tokens) > 1 and tokens[0].lower() in HONORIFICS:
        tokens = tokens[1:]
    if case_normalize:
        tokens = [t.lower() for t in tokens]
    return tuple(tokens)


def _is_subsequence(short: Sequence[str], full: Sequence[str]) -> bool:
    it = iter(full)
    return all(any(tok == f for f in it) for tok in short)


def is_alias(short: Sequence[str], full: Sequence[str]) -> bool:
    """``short`` is a proper, in-order token selection from ``full``.

    Corporate designators on the full side may be skipped, so "Hormel" is an
    alias of "Hormel & Co." as well as of "Geo. A. Hormel & Co.".
    """
    if not short or not full or tuple(short) == tuple(full):
        return False
    core = [t for t in full if t.lower() not in DESIGNATORS] or list(full)
    return _is_subsequence(short, core)


def is_acronym(short: str, full: Sequence[str], min_len: int = 2) -> bool:
    """``short`` spells an in-order selection of the initials of ``full``."""
    if len(short) < min_len or not short.isalpha() or not short.isupper():
        return False
    initials = [t[0].upper() for t in full if t and t[0].isalpha()]
    return _is_subsequence(list(short), initials)


def types_compatible(a: str, b: str) -> bool:
    return a == "UNKNOWN" or b == "UNKNOWN" or a == b


def resolve_names(
    mentions: Iterable,
    registry: list[NameRecord],
    *,
    entity_of,
    name_type_of,
    case_normalize: bool = False,
    acronym_min_len: int = 2,
    sorts_compatible=lambda a, b: True,
) -> list[NameMatch]:
    """Match each new name in a sentence against names seen before it.

    ``mentions`` are the sentence's proper-name mentions, left to right.
    Each is appended to ``registry`` after matching, so later names in the
    same sentence can match earlier ones.  ``entity_of`` maps a mention id to
    its current entity id; ``name_type_of`` gives a mention's name type.
    Ties go to an exact match first, then to the most recent mention.
    """
    matches: list[NameMatch] = []
    for m in mentions:
        raw = name_tokens(m.surface)
        tokens = name_tokens(m.surface, case_normalize)
        mtype = name_type_of(m)
        own = entity_of(m.id)
        best = None
        for rec in registry:
            rtoks = tuple(t.lower() for t in rec.tokens) if case_normalize else rec.tokens
            if tokens == rtoks:
                how = "exact"
            elif is_alias(tokens, rtoks):
                how = "alias"
            elif len(raw) == 1 and is_acronym(raw[0], rec.tokens, acronym_min_len):
                how = "acronym"
            else:
                continue
            if not types_compatible(mtype, rec.name_type) or not sorts_compatible(m.sort, rec.sort):
                continue
            rank = (how == "exact", rec.key)
            if best is None or rank > best[0]:
                best = (rank, rec, how)
        target = own
        if best is not None:
            _, rec, how = best
            if mtype == "UNKNOWN":
                mtype = rec.name_type
            if rec.eid != own:
                matches.append(NameMatch(m.id, rec.eid, how))
                target = rec.eid
        registry.append(NameRecord(target, raw, mtype, m.key, m.sort, m.id))
    return matches
