"""Mentions, their surface-derived features, and merged discourse entities."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .document import Document, FormatError, RegionKind, SentencePos, Span
from .ontology import TOP, NumberValue, Ontology, SortHierarchy

logger = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_PLEONASTIC_PATTERNS",
    "DetType",
    "DiscourseEntity",
    "FeatureError",
    "Features",
    "Mention",
    "Person",
    "build_mentions",
    "derive_features",
    "detect_pleonastic",
    "merge",
    "new_entity",
]


class FeatureError(ValueError):
    pass


class DetType(str, Enum):
    DEF = "DEF"
    INDEF = "INDEF"
    PRON = "PRON"
    POSS_PRON = "POSS_PRON"
    REFLEXIVE = "REFLEXIVE"
    PROPER = "PROPER"
    BARE = "BARE"
    QUANT = "QUANT"
    POSS = "POSS"  # possessed nominal: "its pilots", "American's attendants"

    @property
    def is_pronoun(self) -> bool:
        return self in (DetType.PRON, DetType.POSS_PRON, DetType.REFLEXIVE)


class Person(str, Enum):
    FIRST = "FIRST"
    SECOND = "SECOND"
    THIRD = "THIRD"


# closed-class pronouns: surface -> (det, person, number)
_F, _S, _T = Person.FIRST, Person.SECOND, Person.THIRD
PRONOUNS: dict[str, tuple[DetType, Person, str]] = {}
for _words, _det, _person, _num in [
    ("i me", DetType.PRON, _F, "SG"),
    ("we us", DetType.PRON, _F, "PL"),
    ("you", DetType.PRON, _S, "UNKNOWN"),
    ("he him she it this that", DetType.PRON, _T, "SG"),
    ("they them these those", DetType.PRON, _T, "PL"),
    ("my mine", DetType.POSS_PRON, _F, "SG"),
    ("our ours", DetType.POSS_PRON, _F, "PL"),
    ("your yours", DetType.POSS_PRON, _S, "UNKNOWN"),
    ("his her hers its", DetType.POSS_PRON, _T, "SG"),
    ("their theirs", DetType.POSS_PRON, _T, "PL"),
    ("myself", DetType.REFLEXIVE, _F, "SG"),
    ("ourselves", DetType.REFLEXIVE, _F, "PL"),
    ("yourself", DetType.REFLEXIVE, _S, "SG"),
    ("yourselves", DetType.REFLEXIVE, _S, "PL"),
    ("himself herself itself", DetType.REFLEXIVE, _T, "SG"),
    ("themselves", DetType.REFLEXIVE, _T, "PL"),
]:
    for _w in _words.split():
        PRONOUNS[_w] = (_det, _person, _num)

_DEFINITE = {"the", "this", "that", "these", "those"}
_INDEFINITE = {"a", "an"}
_QUANTIFIERS = {"every": "SG", "each": "SG", "any": "UNKNOWN", "all": "PL", "some": "UNKNOWN",
                "several": "PL", "many": "PL", "few": "PL", "both": "PL", "most": "PL"}
_COMPARATIVE = {"more", "less", "fewer"}
_POSSESSIVE_DET = {"my", "our", "your", "his", "her", "its", "their"}
_PREPOSITIONS = {"of", "for", "with", "in", "on", "at", "from", "to", "by", "against",
                 "over", "under", "about", "who", "which", "that", "representing"}
_NAME_GLUE = {"of", "and", "&", "the", "de", "for"}
_IRREGULAR_PLURALS = {"people", "men", "women", "children", "police", "staff", "feet", "teeth"}
_NOT_PLURAL = ("ss", "us", "is", "news")

NUMBER_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6, "seven": 7, "eight": 8,
    "nine": 9, "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50, "sixty": 60, "seventy": 70,
    "eighty": 80, "ninety": 90, "hundred": 100, "thousand": 1000, "dozen": 12,
}

_PUNCT = "\"'`.,;:!?()[]{}"


def _bare(token: str) -> str:
    token = token.strip(_PUNCT + "’‘“”")
    if token.lower().endswith(("'s", "’s")):
        token = token[:-2]
    return token.rstrip("'’")


def _numeral(token: str) -> int | None:
    token = _bare(token).lower()
    if token in NUMBER_WORDS:
        return NUMBER_WORDS[token]
    digits = token.replace(",", "")
    if digits.isdigit():
        return int(digits)
    return None


def _is_capitalized(token: str) -> bool:
    token = _bare(token)
    return bool(token) and token[0].isupper()


@dataclass(frozen=True)
class Features:
    det: DetType
    number: NumberValue
    head: str
    sort: str
    modifiers: tuple[str, ...] = ()
    person: Person | None = None


def derive_features(
    surface: str,
    context: str = "",
    ontology: Ontology | None = None,
    sentence_initial: bool = False,
) -> Features:
    """Guess the determiner type, number, head, sort and modifiers of a mention.

    ``context`` is the sentence the mention occurs in; it is only consulted
    for possessive marking right after the mention.  ``sentence_initial``
    stops a lone capitalized first word from being read as a name.
    """
    tokens = surface.split()
    if not tokens:
        raise FeatureError("empty mention surface")
    ontology = ontology or Ontology.empty()
    words = [_bare(t) for t in tokens]
    low = [w.lower() for w in words]

    if len(tokens) == 1 and low[0] in PRONOUNS:
        det, person, num = PRONOUNS[low[0]]
        return Features(det, NumberValue(num), low[0], ontology.heads.lookup(low[0]), (), person)

    # determiner
    rest = 1
    number: NumberValue | None = None
    first = low[0]
    squashed = re.sub(r"\s+", " ", surface.strip())
    if squashed in ontology.names:
        det, rest = DetType.PROPER, 0
    elif first in _DEFINITE and len(tokens) > 1:
        det = DetType.DEF
        if len(tokens) > 2 and _numeral(tokens[1]) is not None:
            number = NumberValue.exact(_numeral(tokens[1])) if _numeral(tokens[1]) > 1 else NumberValue("SG")
    elif first in _INDEFINITE and len(tokens) > 1:
        det = DetType.INDEF
    elif first in _QUANTIFIERS and len(tokens) > 1:
        det, number = DetType.QUANT, NumberValue(_QUANTIFIERS[first])
    elif first in _COMPARATIVE and len(low) > 2 and low[1] == "than":
        det, rest, number = DetType.QUANT, 2, NumberValue("PL")
    elif _numeral(tokens[0]) is not None and len(tokens) > 1:
        det, number = DetType.QUANT, NumberValue.exact(_numeral(tokens[0]))
    elif first in _POSSESSIVE_DET and len(tokens) > 1:
        det = DetType.POSS
    elif any(t.endswith(("'s", "’s", "s'")) for t in tokens[:-1]):
        det, rest = DetType.POSS, 0
    elif _looks_like_name(words, sentence_initial):
        det, rest = DetType.PROPER, 0
    else:
        det, rest = DetType.BARE, 0

    # head: last token before a post-modifier, else the last token
    body = list(range(rest, len(tokens)))
    head_idx = body[-1] if body else len(tokens) - 1
    for i in body[1:]:
        if low[i] in _PREPOSITIONS:
            head_idx = i - 1
            break
    head = low[head_idx]
    if not head:
        raise FeatureError(f"no head in {surface!r}")

    modifiers = [low[i] for i in body if i < head_idx and low[i] and _numeral(tokens[i]) is None]
    post = [low[i] for i in body if i > head_idx and low[i]]
    if post:
        modifiers.append(" ".join(post))
    if det is DetType.PROPER:
        modifiers = []

    if number is None:
        number = _head_number(head, det)
    sort = TOP
    if det is DetType.PROPER:
        sort = ontology.heads.lookup(squashed.lower())
    if sort == TOP:
        sort = ontology.heads.lookup(head)
    return Features(det, number, head, sort, tuple(modifiers), None)


def _looks_like_name(words: Sequence[str], sentence_initial: bool) -> bool:
    content = [w for w in words if w and w.lower() not in _NAME_GLUE]
    if not content or not all(_is_capitalized(w) for w in content):
        return False
    if sentence_initial and len(content) == 1:
        return False
    return True


def _head_number(head: str, det: DetType) -> NumberValue:
    if det is DetType.PROPER:
        return NumberValue("SG")
    if head in _IRREGULAR_PLURALS:
        return NumberValue("PL")
    if head.endswith("s") and not head.endswith(_NOT_PLURAL) and len(head) > 3:
        return NumberValue("PL")
    return NumberValue("SG")


# -- pleonastic "it" -------------------------------------------------------

_BE = r"(?:is|was|'s|will\s+be|would\s+be|could\s+be|might\s+be|may\s+be|has\s+been|had\s+been)"
DEFAULT_PLEONASTIC_PATTERNS: tuple[str, ...] = (
    # it is/was <adjective> that/to
    rf"^it\s+{_BE}\s+(?:not\s+)?(?:\w+ly\s+)?[a-z-]+\s+(?:that|to|whether|if)\b",
    # raising verbs
    r"^it\s+(?:seems|seemed|appears|appeared|turns\s+out|turned\s+out|happens|happened)\b",
    # weather and time
    rf"^it\s+{_BE}\s+(?:raining|snowing|sunny|cloudy|foggy|cold|hot|warm|dark|light|late|early|noon|midnight|time)\b",
    r"^it\s+(?:rains|rained|snows|snowed|drizzles|drizzled)\b",
)


def detect_pleonastic(m, context: str, patterns: Sequence[str] = DEFAULT_PLEONASTIC_PATTERNS) -> bool:
    """True when an "it" mention is non-referential in ``context``.

    ``context`` is the sentence text starting at the mention itself.
    """
    surface = m if isinstance(m, str) else m.surface
    det = None if isinstance(m, str) else m.det
    if surface.strip().lower() != "it" or det not in (None, DetType.PRON):
        return False
    ctx = re.sub(r"\s+", " ", context.strip().lower())
    return any(re.search(p, ctx) for p in patterns)


# -- mentions --------------------------------------------------------------

@dataclass(frozen=True)
class Mention:
    id: str
    det: DetType
    number: NumberValue
    head: str
    sort: str
    modifiers: tuple[str, ...]
    span: Span
    pos: SentencePos
    surface: str
    person: Person | None = None
    pleonastic: bool = False
    gold: str | None = None
    goldrel: str = "ident"

    @property
    def region(self) -> RegionKind:
        return self.pos.region

    @property
    def is_first_person(self) -> bool:
        return self.person is Person.FIRST and self.det.is_pronoun

    @property
    def is_plural_pronoun(self) -> bool:
        return self.det.is_pronoun and self.number.grammatical == "PL"

    @property
    def key(self) -> tuple[int, int, int]:
        """Processing order: TEXT before HEADLINE, then left to right, outer first."""
        return (self.region is RegionKind.HEADLINE, self.span.start, -self.span.end)

    def __str__(self):
        return f"{self.id}:{self.surface!r}@{self.pos}"


_GOLDRELS = {"ident", "subset", "part", "member"}


def build_mentions(doc: Document, ontology: Ontology | None = None,
                   pleonastic_patterns: Sequence[str] = DEFAULT_PLEONASTIC_PATTERNS) -> list[Mention]:
    """Turn a document's mention tags into mentions, in processing order.

    Tag attributes (det, num, head, min, sort) override derived features.
    """
    ontology = ontology or Ontology.empty()
    out = []
    for tag in doc.tags:
        sent = doc.sentence_at(tag.pos)
        sentence_initial = sent.span is not None and tag.span.start == sent.span.start
        context = doc.span_text(Span(sent.span.start, sent.span.end)) if sent.span else tag.surface
        try:
            feats = derive_features(tag.surface, context, ontology, sentence_initial)
        except FeatureError as exc:
            raise FormatError(f"mention {tag.id}: {exc}") from None
        attrs = tag.attrs
        det, number, head, sort, person = feats.det, feats.number, feats.head, feats.sort, feats.person
        try:
            if "det" in attrs:
                det = DetType(attrs["det"].upper())
            if "num" in attrs:
                number = NumberValue.parse(attrs["num"])
        except ValueError as exc:
            raise FormatError(f"mention {tag.id}: {exc}") from None
        if "head" in attrs or "min" in attrs:
            head = (attrs.get("head") or attrs["min"].split()[-1]).lower()
            if "num" not in attrs and feats.number.kind != "EXACT":
                number = _head_number(head, det)
            if "sort" not in attrs and feats.det is not DetType.PROPER:
                sort = ontology.heads.lookup(head)
        if "sort" in attrs:
            sort = attrs["sort"]
            if sort not in ontology.sorts:
                logger.warning("mention %s: unknown sort %r, using TOP", tag.id, sort)
                sort = TOP
        if det.is_pronoun and person is None:
            person = PRONOUNS.get(tag.surface.lower(), (None, Person.THIRD, None))[1]
        if not det.is_pronoun:
            person = None
        goldrel = attrs.get("goldrel", "ident").lower()
        if goldrel not in _GOLDRELS:
            raise FormatError(f"mention {tag.id}: bad goldrel {goldrel!r}")
        mention = Mention(
            id=tag.id, det=det, number=number, head=head, sort=sort,
            modifiers=feats.modifiers, span=tag.span, pos=tag.pos, surface=tag.surface,
            person=person, gold=attrs.get("gold") or None, goldrel=goldrel,
        )
        if det is DetType.PRON:
            following = doc.span_text(Span(tag.span.start, sent.span.end))
            if detect_pleonastic(mention, following, pleonastic_patterns):
                mention = replace(mention, pleonastic=True)
        out.append(mention)
    out.sort(key=lambda m: m.key)
    return out


# -- entities --------------------------------------------------------------

@dataclass(frozen=True)
class DiscourseEntity:
    eid: int
    mentions: tuple[Mention, ...]
    sort: str
    number: NumberValue
    names: frozenset[str] = frozenset()
    modifiers: frozenset[str] = frozenset()

    @property
    def current(self) -> Mention:
        """The most recent mention; the entity's salience position."""
        return self.mentions[-1]

    @property
    def mention_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.mentions)

    def __len__(self):
        return len(self.mentions)


def new_entity(m: Mention, next_eid: int) -> DiscourseEntity:
    if m.pleonastic:
        raise ValueError(f"pleonastic mention {m.id} has no entity")
    names = frozenset({m.surface}) if m.det is DetType.PROPER else frozenset()
    return DiscourseEntity(next_eid, (m,), m.sort, m.number, names, frozenset(m.modifiers))


def merge(anaphor: DiscourseEntity, antecedent: DiscourseEntity,
          hierarchy: SortHierarchy | None = None) -> DiscourseEntity:
    """Fold ``anaphor`` into ``antecedent``; the result keeps the antecedent's id."""
    if anaphor.eid == antecedent.eid:
        return antecedent
    mentions = tuple(sorted(anaphor.mentions + antecedent.mentions, key=lambda m: m.key))
    if hierarchy is not None:
        sort = hierarchy.more_specific(anaphor.sort, antecedent.sort)
    else:
        sort = antecedent.sort if antecedent.sort != TOP else anaphor.sort
    number = anaphor.number if anaphor.number.specificity > antecedent.number.specificity else antecedent.number
    return DiscourseEntity(
        antecedent.eid, mentions, sort, number,
        antecedent.names | anaphor.names, antecedent.modifiers | anaphor.modifiers,
    )
