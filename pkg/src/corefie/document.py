"""Corpus reader and document structure.

A corpus file holds one document with inline SGML-flavored tags::

    <DOC id="wsj-870209">
    <HEADLINE>... <M id="h1">American Airlines</M> ...</HEADLINE>
    <P><S>...</S><S>...</S></P>
    </DOC>

Sentence and paragraph boundaries are taken verbatim from ``<P>``/``<S>``;
nothing is re-segmented.  Spans are byte offsets (UTF-8) into the detagged
text, i.e. the raw input with every tag removed and entities decoded.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "DomainError",
    "Document",
    "FormatError",
    "MentionTag",
    "RegionKind",
    "Sentence",
    "SentencePos",
    "Span",
    "accessible_region",
    "parse_document",
    "read_document",
    "sentence_distance",
]


class FormatError(ValueError):
    """Malformed corpus input.  ``offset`` is a character offset into the raw input."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class DomainError(ValueError):
    """A query was asked outside the domain where it is defined."""


class RegionKind(str, Enum):
    HEADLINE = "HEADLINE"
    TEXT = "TEXT"


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __contains__(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class SentencePos:
    paragraph_no: int
    sentence_no: int
    global_no: int | None
    region: RegionKind = RegionKind.TEXT

    @property
    def label(self) -> str:
        if self.region is RegionKind.HEADLINE:
            return "HEADLINE"
        return f"{self.paragraph_no}-{self.sentence_no}"

    def __str__(self) -> str:
        return self.label


HEADLINE_POS = SentencePos(0, 1, None, RegionKind.HEADLINE)


@dataclass(frozen=True)
class MentionTag:
    """A raw ``<M>`` tag: span, attributes, and the sentence it sits in."""

    id: str
    span: Span
    surface: str
    pos: SentencePos
    attrs: Mapping[str, str] = field(default_factory=dict)

    @property
    def region(self) -> RegionKind:
        return self.pos.region


@dataclass(frozen=True)
class Sentence:
    pos: SentencePos
    span: Span | None  # None only for an empty sentence
    mention_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Document:
    doc_id: str
    headline: Sentence | None
    body: tuple[Sentence, ...]
    text: str
    tags: tuple[MentionTag, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_data", self.text.encode("utf-8"))
        object.__setattr__(self, "_tag_index", {t.id: t for t in self.tags})
        limit = len(self._data)
        for tag in self.tags:
            if tag.span.end > limit:
                raise FormatError(f"mention {tag.id} lies outside the document text")

    @property
    def sentences(self) -> tuple[Sentence, ...]:
        """TEXT sentences followed by the headline, i.e. processing order."""
        if self.headline is None:
            return self.body
        return self.body + (self.headline,)

    def span_text(self, span: Span) -> str:
        return self._data[span.start:span.end].decode("utf-8")

    def span_text_between(self, start: int, end: int) -> str:
        """Text between two byte offsets; empty when ``start >= end``."""
        if start >= end:
            return ""
        return self._data[start:end].decode("utf-8")

    def tag(self, mention_id: str) -> MentionTag:
        return self._tag_index[mention_id]

    def sentence_at(self, pos: SentencePos) -> Sentence:
        if pos.region is RegionKind.HEADLINE:
            if self.headline is None:
                raise KeyError("document has no headline")
            return self.headline
        return self.body[pos.global_no]

    @property
    def body_span(self) -> Span | None:
        spans = [s.span for s in self.body if s.span is not None]
        if not spans:
            return None
        return Span(spans[0].start, spans[-1].end)


# -- parsing ---------------------------------------------------------------

_TAG_RE = re.compile(r"<(/?)([A-Za-z]+)((?:\s+[A-Za-z_][\w-]*\s*=\s*\"[^\"]*\")*)\s*(/?)>")
_ATTR_RE = re.compile(r"([A-Za-z_][\w-]*)\s*=\s*\"([^\"]*)\"")
_KNOWN = {"DOC", "HEADLINE", "P", "S", "M"}
# allowed parent for each tag
_PARENTS = {"DOC": {None}, "HEADLINE": {"DOC"}, "P": {"DOC"}, "S": {"P"}, "M": {"HEADLINE", "S", "M"}}


def _attrs(blob: str) -> dict[str, str]:
    return {k.lower(): html.unescape(v) for k, v in _ATTR_RE.findall(blob)}


def parse_document(raw: str) -> Document:
    """Parse one corpus-format document."""
    out = bytearray()
    stack: list[tuple[str, int, dict]] = []  # (tag, raw offset, info)
    doc_id = None
    headline: Sentence | None = None
    body: list[Sentence] = []
    tags: list[MentionTag] = []
    seen_ids: set[str] = set()
    para_no = 0
    sent_no = 0
    pos = 0

    def open_sentence(region_pos: SentencePos) -> dict:
        return {"pos": region_pos, "start": len(out), "mentions": []}

    def close_sentence(info: dict) -> Sentence:
        start, end = info["start"], len(out)
        # trim surrounding whitespace so the span covers sentence material only
        chunk = bytes(out[start:end])
        lead = len(chunk) - len(chunk.lstrip())
        trail = len(chunk) - len(chunk.rstrip())
        span = Span(start + lead, end - trail) if end - trail > start + lead else None
        return Sentence(info["pos"], span, tuple(info["mentions"]))

    for match in _TAG_RE.finditer(raw):
        text = raw[pos:match.start()]
        if text:
            _emit_text(text, stack, out, pos)
        pos = match.end()
        closing, name, attr_blob, selfclose = match.groups()
        name = name.upper()
        if name not in _KNOWN:
            raise FormatError(f"unknown tag <{name}>", match.start())
        if selfclose:
            raise FormatError(f"self-closing <{name}/> is not allowed", match.start())
        parent = stack[-1][0] if stack else None
        if not closing:
            if parent not in _PARENTS[name]:
                raise FormatError(f"<{name}> not allowed inside <{parent}>", match.start())
            attrs = _attrs(attr_blob)
            info: dict = {"attrs": attrs}
            if name == "DOC":
                if doc_id is not None:
                    raise FormatError("more than one <DOC> in input", match.start())
                doc_id = attrs.get("id", "")
            elif name == "HEADLINE":
                if headline is not None or body:
                    raise FormatError("HEADLINE must come once, before the text", match.start())
                info.update(open_sentence(HEADLINE_POS))
            elif name == "P":
                para_no += 1
                sent_no = 0
            elif name == "S":
                sent_no += 1
                info.update(open_sentence(SentencePos(para_no, sent_no, len(body))))
            elif name == "M":
                mid = attrs.get("id")
                if not mid:
                    raise FormatError("mention without id", match.start())
                if mid in seen_ids:
                    raise FormatError(f"duplicate mention id {mid!r}", match.start())
                seen_ids.add(mid)
                info["start"] = len(out)
            stack.append((name, match.start(), info))
        else:
            if not stack or stack[-1][0] != name:
                expected = stack[-1][0] if stack else "nothing"
                raise FormatError(f"</{name}> closes {expected}", match.start())
            _, opened_at, info = stack.pop()
            if name == "M":
                start, end = info["start"], len(out)
                surface = bytes(out[start:end]).decode("utf-8")
                stripped = surface.strip()
                if not stripped:
                    raise FormatError(f"empty mention {info['attrs']['id']!r}", opened_at)
                start += len(surface[: len(surface) - len(surface.lstrip())].encode())
                end -= len(surface[len(surface.rstrip()):].encode())
                sentence = next(i for t, _, i in reversed(stack) if t in ("S", "HEADLINE"))
                mid = info["attrs"]["id"]
                sentence["mentions"].append(mid)
                tags.append(MentionTag(mid, Span(start, end), stripped, sentence["pos"], info["attrs"]))
            elif name == "S":
                body.append(close_sentence(info))
            elif name == "HEADLINE":
                headline = close_sentence(info)
    tail = raw[pos:]
    if stack:
        raise FormatError(f"unclosed <{stack[-1][0]}>", stack[-1][1])
    if tail.strip():
        raise FormatError("text after </DOC>", pos)
    if doc_id is None:
        raise FormatError("no <DOC> element", 0)
    text = out.decode("utf-8")
    # mention ids are listed per sentence in order of closing; restore textual order
    order = {t.id: (t.span.start, -t.span.end) for t in tags}
    body = [Sentence(s.pos, s.span, tuple(sorted(s.mention_ids, key=order.__getitem__))) for s in body]
    if headline is not None:
        headline = Sentence(headline.pos, headline.span, tuple(sorted(headline.mention_ids, key=order.__getitem__)))
    tags.sort(key=lambda t: ((t.region is RegionKind.HEADLINE), t.span.start, -t.span.end))
    return Document(doc_id, headline, tuple(body), text, tuple(tags))


def _emit_text(text: str, stack: list, out: bytearray, offset: int) -> None:
    innermost = stack[-1][0] if stack else None
    if innermost in (None, "DOC", "P"):
        if text.strip():
            where = "outside <DOC>" if innermost is None else f"directly inside <{innermost}>"
            raise FormatError(f"text {where}", offset)
    out.extend(html.unescape(text).encode("utf-8"))


def read_document(path: str | Path) -> Document:
    return parse_document(Path(path).read_text(encoding="utf-8"))


# -- queries ---------------------------------------------------------------

def sentence_distance(a: SentencePos, b: SentencePos) -> int:
    """Number of sentences between two TEXT positions (0 = same sentence)."""
    if a.region is not RegionKind.TEXT or b.region is not RegionKind.TEXT:
        raise DomainError("sentence distance is only defined inside the TEXT region")
    return abs(a.global_no - b.global_no)


def accessible_region(m, d: Document, headline_antecedents: bool = True) -> frozenset[Span]:
    """Spans of ``d`` in which an antecedent of mention ``m`` may lie.

    ``m`` needs ``span``, ``pos`` and ``is_first_person``.  A headline
    mention sees the whole TEXT (and, with ``headline_antecedents``, the
    headline material to its left).  A TEXT mention sees the TEXT before
    its span; a first-person pronoun additionally sees the rest of its own
    sentence.
    """
    spans: set[Span] = set()
    if m.pos.region is RegionKind.HEADLINE:
        spans.update(s.span for s in d.body if s.span is not None)
        head = d.headline.span if d.headline is not None else None
        if headline_antecedents and head is not None and head.start < m.span.start:
            spans.add(Span(head.start, m.span.start))
        return frozenset(spans)
    for sent in d.body[: m.pos.global_no]:
        if sent.span is not None:
            spans.add(sent.span)
    own = d.body[m.pos.global_no].span
    if own.start < m.span.start:
        spans.add(Span(own.start, m.span.start))
    if getattr(m, "is_first_person", False) and m.span.end < own.end:
        spans.add(Span(m.span.end, own.end))
    return frozenset(spans)


def covered(span: Span, region: Iterable[Span]) -> bool:
    return any(span in r for r in region)
