"""Collect, filter, then order candidate antecedents by salience.

Sentences are processed in order (the headline last, since its antecedents
lie in the text it summarizes).  Within a sentence every mention first gets
a fresh entity, proper names are matched against names seen so far, and then
each potentially anaphoric mention is resolved left to right.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, Sequence

from .alias import NameRecord, resolve_names
from .document import Document, RegionKind
from .mentions import (
    DEFAULT_PLEONASTIC_PATTERNS,
    DetType,
    DiscourseEntity,
    Mention,
    build_mentions,
    merge,
    new_entity,
)
from .ontology import (
    ModifierLexicon,
    Ontology,
    SortHierarchy,
    SortRelation,
    modifier_consistent,
    number_consistent,
)
from .scorer import ChainSet

logger = logging.getLogger(__name__)

__all__ = [
    "Candidate",
    "InvariantError",
    "check_resolution",
    "CandidateList",
    "Resolution",
    "ResolutionConfig",
    "ResolutionOutcome",
    "Tier",
    "TraceRecord",
    "collect",
    "filter_candidates",
    "is_anaphoric",
    "order",
    "resolve_document",
]

ANAPHORIC = frozenset({DetType.DEF, DetType.PRON, DetType.POSS_PRON, DetType.REFLEXIVE, DetType.PROPER})
_APPOSITIVE_HOSTS = frozenset({DetType.PROPER, DetType.DEF, DetType.INDEF, DetType.BARE})
_APPOSITIVES = frozenset({DetType.BARE, DetType.DEF, DetType.INDEF})


@dataclass(frozen=True)
class ResolutionConfig:
    """Search windows (in sentences; None = unlimited), filters and output mode.

    The defaults are the MUC-6 settings: ten sentences for definites, three
    for pronouns, the whole preceding text for names, and the current
    sentence only for reflexives.
    """

    window_definite: int | None = 10
    window_pronoun: int | None = 3
    window_possessive: int | None = None  # None: same as window_pronoun
    soft_window: bool = False
    destructive: bool = True
    disable_sort_filter: bool = False
    disable_number_filter: bool = False
    disable_modifier_filter: bool = False
    disable_window: bool = False
    org_sort_name: str = "organization"
    person_sort_name: str = "person"
    location_sort_name: str = "location"
    case_normalize_names: bool = False
    headline_antecedents: bool = True
    acronym_min_len: int = 2
    appositives: bool = True
    pleonastic_patterns: tuple[str, ...] = DEFAULT_PLEONASTIC_PATTERNS

    def __post_init__(self):
        for name in ("window_definite", "window_pronoun", "window_possessive"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise ValueError(f"{name} must be a non-negative integer or None, got {value!r}")
        if self.acronym_min_len < 1:
            raise ValueError("acronym_min_len must be positive")

    def window_for(self, m: Mention) -> int | None:
        if m.det is DetType.REFLEXIVE:
            return 0
        if self.disable_window or m.region is RegionKind.HEADLINE:
            return None
        if m.det is DetType.DEF:
            return self.window_definite
        if m.det is DetType.POSS_PRON:
            return self.window_pronoun if self.window_possessive is None else self.window_possessive
        if m.det is DetType.PRON:
            return self.window_pronoun
        return None


class Tier(IntEnum):
    SAME_SENTENCE = 1
    PREV_SENTENCE = 2
    EARLIER = 3


@dataclass(frozen=True)
class Candidate:
    """A potential antecedent and the mention that places it relative to the anaphor."""

    entity: DiscourseEntity
    anchor: Mention
    tier: Tier | None = None

    @property
    def eid(self) -> int:
        return self.entity.eid


@dataclass(frozen=True)
class CandidateList:
    items: tuple[Candidate, ...] = ()

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def top(self) -> Candidate | None:
        return self.items[0] if self.items else None

    @property
    def eids(self) -> tuple[int, ...]:
        return tuple(c.eid for c in self.items)


@dataclass(frozen=True)
class ResolutionOutcome:
    anaphor_id: str
    merged_into: int | None = None
    ranked: tuple[int, ...] | None = None
    rule: str = "none"

    def __post_init__(self):
        if self.merged_into is not None and self.ranked is not None:
            raise ValueError("an outcome is either a merge or a ranked list")

    @property
    def unresolved(self) -> bool:
        return self.merged_into is None and not self.ranked

    @property
    def target(self) -> int | None:
        if self.merged_into is not None:
            return self.merged_into
        return self.ranked[0] if self.ranked else None


@dataclass(frozen=True)
class TraceRecord:
    """One resolution decision, with enough detail to audit it afterwards.

    ``candidates`` holds (tier, entity id, anchor mention id, anchor start,
    sentence distance) for every candidate that survived filtering, in
    preference order.
    """

    anaphor_id: str
    rule: str
    candidates: tuple[tuple[Tier, int, str, int, int | None], ...]
    target: int | None
    rejected: tuple[tuple[int, str], ...] = ()
    window: int | None = None

    def line(self) -> str:
        groups: dict[Tier, list[str]] = {}
        for tier, eid, *_ in self.candidates:
            groups.setdefault(tier, []).append(str(eid))
        cands = " ".join(f"{t.name}:{','.join(e)}" for t, e in groups.items()) or "-"
        decision = f"{self.rule} {self.target}" if self.target is not None else "unresolved"
        return f"{self.anaphor_id}\t{cands}\t{decision}"


@dataclass
class Resolution:
    doc_id: str
    chains: ChainSet
    outcomes: list[ResolutionOutcome]
    trace: list[TraceRecord]
    entities: dict[int, DiscourseEntity]
    mentions: list[Mention]

    def chain_lines(self) -> list[str]:
        """``eid TAB mention ids`` per surviving entity, in order of first mention."""
        ents = sorted(self.entities.values(), key=lambda e: e.mentions[0].key)
        return [f"{e.eid}\t{' '.join(e.mention_ids)}" for e in ents]

    def trace_lines(self) -> list[str]:
        return [r.line() for r in self.trace]


def is_anaphoric(m: Mention) -> bool:
    return m.det in ANAPHORIC and not m.pleonastic


def _accessible(m: Mention, other: Mention, cfg: ResolutionConfig) -> bool:
    if m.region is RegionKind.HEADLINE:
        if other.region is RegionKind.TEXT:
            return True
        return cfg.headline_antecedents and other.span.end <= m.span.start
    if other.region is not RegionKind.TEXT:
        return False
    if other.span.end <= m.span.start:
        return True
    return m.is_first_person and other.pos == m.pos and other.span.start >= m.span.end


def _anchor(entity: DiscourseEntity, m: Mention, cfg: ResolutionConfig) -> Mention | None:
    for other in reversed(entity.mentions):
        if _accessible(m, other, cfg):
            return other
    return None


def _distance(m: Mention, anchor: Mention) -> int | None:
    if m.region is not RegionKind.TEXT or anchor.region is not RegionKind.TEXT:
        return None
    return m.pos.global_no - anchor.pos.global_no


def collect(m: Mention, entities: Iterable[DiscourseEntity], cfg: ResolutionConfig,
            exclude: int | None = None, beyond: bool = False) -> list[Candidate]:
    """Entities with an accessible mention inside ``m``'s search window.

    An entity is placed by its most recent accessible mention.  With
    ``beyond`` the complement is returned: accessible entities that lie
    outside the window.
    """
    window = cfg.window_for(m)
    out = []
    for entity in entities:
        if entity.eid == exclude:
            continue
        anchor = _anchor(entity, m, cfg)
        if anchor is None:
            continue
        dist = _distance(m, anchor)
        inside = window is None or dist is None or abs(dist) <= window
        if inside != beyond:
            out.append(Candidate(entity, anchor))
    return out


def _rejection(m: Mention, anaphor: DiscourseEntity, cand: DiscourseEntity,
               h: SortHierarchy, lex: ModifierLexicon, cfg: ResolutionConfig) -> str | None:
    if not cfg.disable_number_filter and not number_consistent(
        anaphor.number, cand.number, m.is_plural_pronoun, cand.sort, h, cfg.org_sort_name
    ):
        return "number"
    if not cfg.disable_sort_filter and h.relation(anaphor.sort, cand.sort) not in (
        SortRelation.EQUAL, SortRelation.SUBSUMES
    ):
        return "sort"
    if not cfg.disable_modifier_filter and not modifier_consistent(anaphor.modifiers, cand.modifiers, lex):
        return "modifier"
    return None


def filter_candidates(m: Mention, anaphor: DiscourseEntity, candidates: Iterable[Candidate],
                      h: SortHierarchy, lex: ModifierLexicon, cfg: ResolutionConfig,
                      rejected: list | None = None) -> list[Candidate]:
    """Keep candidates semantically consistent with the anaphoric entity.

    The anaphor's sort must equal or subsume the candidate's, so "the
    company" may take an automaker but "the automaker" may not take a
    company.  Reasons for rejections are appended to ``rejected`` if given.
    """
    kept = []
    for cand in candidates:
        reason = _rejection(m, anaphor, cand.entity, h, lex, cfg)
        if reason is None:
            kept.append(cand)
        elif rejected is not None:
            rejected.append((cand.eid, reason))
    return kept


def _tier(m: Mention, anchor: Mention) -> Tier:
    if m.region is RegionKind.HEADLINE:
        # the whole TEXT stands as the unit right before the headline
        return Tier.SAME_SENTENCE if anchor.region is RegionKind.HEADLINE else Tier.PREV_SENTENCE
    gap = m.pos.global_no - anchor.pos.global_no
    if gap <= 0:
        return Tier.SAME_SENTENCE
    return Tier.PREV_SENTENCE if gap == 1 else Tier.EARLIER


def order(m: Mention, candidates: Iterable[Candidate]) -> CandidateList:
    """Same sentence left to right, previous sentence left to right, then the rest most recent first."""
    tiers: dict[Tier, list[Candidate]] = {t: [] for t in Tier}
    for cand in candidates:
        tier = _tier(m, cand.anchor)
        tiers[tier].append(Candidate(cand.entity, cand.anchor, tier))
    items = sorted(tiers[Tier.SAME_SENTENCE], key=lambda c: (c.anchor.key, c.eid))
    items += sorted(tiers[Tier.PREV_SENTENCE], key=lambda c: (c.anchor.key, c.eid))
    items += sorted(tiers[Tier.EARLIER], key=lambda c: (c.anchor.key, -c.eid), reverse=True)
    return CandidateList(tuple(items))


# -- the per-document pass -------------------------------------------------

class _Pass:
    def __init__(self, doc: Document, mentions: Sequence[Mention], cfg: ResolutionConfig, ontology: Ontology):
        self.doc = doc
        self.cfg = cfg
        self.onto = ontology
        self.h = ontology.sorts
        self.by_id = {m.id: m for m in mentions}
        self.entities: dict[int, DiscourseEntity] = {}
        self.owner: dict[str, int] = {}
        self.retired: dict[int, int] = {}
        self.registry: list[NameRecord] = []
        self.outcomes: list[ResolutionOutcome] = []
        self.trace: list[TraceRecord] = []
        self.next_eid = 0

    def find(self, eid: int) -> int:
        while eid in self.retired:
            eid = self.retired[eid]
        return eid

    def fold(self, anaphor_eid: int, target_eid: int) -> None:
        if anaphor_eid == target_eid:
            return
        anaphor = self.entities.pop(anaphor_eid)
        self.entities[target_eid] = merge(anaphor, self.entities[target_eid], self.h)
        for mm in anaphor.mentions:
            self.owner[mm.id] = target_eid
        self.retired[anaphor_eid] = target_eid

    def name_type(self, m: Mention) -> str:
        known = self.onto.names.get(" ".join(m.surface.split()))
        if known:
            return known
        for sort_name, kind in ((self.cfg.person_sort_name, "PERSON"),
                                (self.cfg.org_sort_name, "ORGANIZATION"),
                                (self.cfg.location_sort_name, "LOCATION")):
            if self.h.is_a(m.sort, sort_name):
                return kind
        return "UNKNOWN"

    def _sorts_compatible(self, a: str | None, b: str | None) -> bool:
        if a is None or b is None or self.cfg.disable_sort_filter:
            return True
        return self.h.relation(self.h.normalize(a), self.h.normalize(b)) is not SortRelation.DISJOINT

    def record(self, m: Mention, rule: str, ranked: CandidateList | None, target: int | None,
               rejected=(), window=None) -> None:
        if target is None:
            self.outcomes.append(ResolutionOutcome(m.id, rule=rule))
        elif self.cfg.destructive:
            self.outcomes.append(ResolutionOutcome(m.id, merged_into=target, rule=rule))
        else:
            eids = ranked.eids if ranked is not None else (target,)
            self.outcomes.append(ResolutionOutcome(m.id, ranked=eids, rule=rule))
        if rule in ("new", "new-name"):
            return
        cands = tuple(
            (c.tier, c.eid, c.anchor.id, c.anchor.span.start, _distance(m, c.anchor)) for c in (ranked or ())
        )
        self.trace.append(TraceRecord(m.id, rule, cands, target, tuple(rejected), window))

    def sentence(self, ms: list[Mention]) -> None:
        live = [m for m in ms if not m.pleonastic]
        for m in live:
            ent = new_entity(m, self.next_eid)
            self.entities[ent.eid] = ent
            self.owner[m.id] = ent.eid
            self.next_eid += 1

        for rec in self.registry:
            rec.eid = self.find(rec.eid)
        names = [m for m in live if m.det is DetType.PROPER]
        matches = resolve_names(
            names, self.registry,
            entity_of=lambda mid: self.owner[mid],
            name_type_of=self.name_type,
            case_normalize=self.cfg.case_normalize_names,
            acronym_min_len=self.cfg.acronym_min_len,
            sorts_compatible=self._sorts_compatible,
        )
        aliased = {}
        for match in matches:
            target = self.find(match.target_eid)
            self.fold(self.owner[match.mention_id], target)
            aliased[match.mention_id] = (target, match.how)

        for i, m in enumerate(live):
            if m.id in aliased:
                target, how = aliased[m.id]
                self.record(m, "alias", None, target)
                continue
            if m.det is DetType.PROPER:
                self.record(m, "new-name", None, None)
                continue
            if self.cfg.appositives and m.det in _APPOSITIVES and self._appositive(m, live[:i]):
                continue
            if not is_anaphoric(m):
                self.record(m, "new", None, None)
                continue
            self.resolve(m)

    def _appositive(self, m: Mention, before: list[Mention]) -> bool:
        host = None
        for prev in reversed(before):
            if prev.span.end <= m.span.start:
                host = prev
                break
        if host is None or host.det not in _APPOSITIVE_HOSTS:
            return False
        if self.doc.span_text_between(host.span.end, m.span.start).strip() != ",":
            return False
        anaphor = self.entities[self.owner[m.id]]
        target = self.entities[self.owner[host.id]]
        if anaphor.eid == target.eid:
            return False
        if not self.cfg.disable_number_filter and not number_consistent(anaphor.number, target.number):
            return False
        if not self._sorts_compatible(anaphor.sort, target.sort):
            return False
        cand = Candidate(target, host, Tier.SAME_SENTENCE)
        self.fold(anaphor.eid, target.eid)
        self.record(m, "appositive", CandidateList((cand,)), target.eid)
        return True

    def resolve(self, m: Mention) -> None:
        cfg = self.cfg
        anaphor = self.entities[self.owner[m.id]]
        rejected: list = []
        cands = collect(m, self.entities.values(), cfg, exclude=anaphor.eid)
        kept = filter_candidates(m, anaphor, cands, self.h, self.onto.modifiers, cfg, rejected)
        ranked = order(m, kept)
        rule = "merge"
        if not ranked and cfg.soft_window:
            far = collect(m, self.entities.values(), cfg, exclude=anaphor.eid, beyond=True)
            far = filter_candidates(m, anaphor, far, self.h, self.onto.modifiers, cfg)
            if far:
                nearest = max(far, key=lambda c: (c.anchor.key, -c.eid))
                ranked = order(m, [nearest])
                rule = "soft"
        window = cfg.window_for(m)
        if not ranked:
            self.record(m, "unresolved", ranked, None, rejected, window)
            return
        target = ranked.top.eid
        self.fold(anaphor.eid, target)
        self.record(m, rule, ranked, target, rejected, window)

    def chains(self) -> ChainSet:
        return ChainSet(e.mention_ids for e in self.entities.values())


def resolve_document(doc: Document, cfg: ResolutionConfig | None = None,
                     ontology: Ontology | None = None,
                     mentions: Sequence[Mention] | None = None) -> Resolution:
    """Resolve every mention of ``doc``; returns chains, outcomes and a decision trace."""
    cfg = cfg or ResolutionConfig()
    ontology = ontology or Ontology.empty()
    if mentions is None:
        mentions = build_mentions(doc, ontology, cfg.pleonastic_patterns)
    run = _Pass(doc, mentions, cfg, ontology)
    for sent in doc.sentences:
        ms = sorted((run.by_id[mid] for mid in sent.mention_ids), key=lambda x: x.key)
        run.sentence(ms)
    return Resolution(doc.doc_id, run.chains(), run.outcomes, run.trace, run.entities, list(mentions))


class InvariantError(RuntimeError):
    """A resolution result broke one of the structural guarantees."""


def check_resolution(res: Resolution) -> None:
    """Raise ``InvariantError`` unless the result is structurally sound.

    Checks that the chains partition exactly the non-pleonastic mentions,
    that every outcome names a surviving entity, and that each entity's
    sort is no more general than any of its mentions' sorts.
    """
    live = {m.id for m in res.mentions if not m.pleonastic}
    seen = [mid for chain in res.chains for mid in chain]
    if len(seen) != len(set(seen)) or set(seen) != live:
        raise InvariantError(f"{res.doc_id}: chains do not partition the mentions")
    by_id = {m.id: m for m in res.mentions}
    for o in res.outcomes:
        if o.anaphor_id not in by_id:
            raise InvariantError(f"{res.doc_id}: outcome for unknown mention {o.anaphor_id}")
    for e in res.entities.values():
        if list(e.mentions) != sorted(e.mentions, key=lambda m: m.key):
            raise InvariantError(f"{res.doc_id}: entity {e.eid} mentions out of order")
