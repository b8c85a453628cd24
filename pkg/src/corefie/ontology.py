"""Sort hierarchy and the lexical knowledge behind the consistency filters."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

logger = logging.getLogger(__name__)

__all__ = [
    "TOP",
    "HeadLexicon",
    "ModifierLexicon",
    "NumberValue",
    "Ontology",
    "OntologyError",
    "SortHierarchy",
    "SortRelation",
    "load_heads",
    "load_modifiers",
    "load_ontology",
    "load_sorts",
    "modifier_consistent",
    "number_consistent",
    "sort_relation",
]

TOP = "TOP"


class OntologyError(ValueError):
    pass


class SortRelation(Enum):
    EQUAL = "EQUAL"
    SUBSUMES = "SUBSUMES"
    SUBSUMED_BY = "SUBSUMED_BY"
    DISJOINT = "DISJOINT"


def _lines(source) -> Iterable[tuple[int, str]]:
    """Yield (line number, content) with comments and blanks removed.

    ``source`` may be a path, a string holding the file contents, or an
    iterable of lines.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text(encoding="utf-8")
        lines = text.splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = list(source)
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield no, line


class SortHierarchy:
    """A single-inheritance sort tree under the distinguished root ``TOP``."""

    def __init__(self, parent: Mapping[str, str] | None = None):
        parent = dict(parent or {})
        parent.pop(TOP, None)
        for child, par in parent.items():
            if child == par:
                raise OntologyError(f"cycle at sort {child!r}")
        sorts = {TOP} | set(parent) | set(parent.values())
        # roots hang off TOP
        self._parent = {s: parent.get(s, TOP) for s in sorts if s != TOP}
        self._ancestors: dict[str, tuple[str, ...]] = {TOP: ()}
        for s in sorted(self._parent):
            self._chain(s)

    def _chain(self, sort: str) -> tuple[str, ...]:
        if sort in self._ancestors:
            return self._ancestors[sort]
        path, cur = [], sort
        seen = {sort}
        while cur != TOP:
            cur = self._parent[cur]
            if cur in seen:
                raise OntologyError(f"cycle at sort {sort!r}")
            seen.add(cur)
            path.append(cur)
        self._ancestors[sort] = tuple(path)
        return self._ancestors[sort]

    @property
    def sorts(self) -> frozenset[str]:
        return frozenset(self._ancestors)

    def __contains__(self, sort: str) -> bool:
        return sort in self._ancestors

    def __len__(self) -> int:
        return len(self._ancestors)

    def parent(self, sort: str) -> str | None:
        return self._parent.get(self._check(sort))

    def ancestors(self, sort: str) -> tuple[str, ...]:
        """Proper ancestors, nearest first, ending with TOP."""
        return self._ancestors[self._check(sort)]

    def depth(self, sort: str) -> int:
        return len(self.ancestors(sort))

    def _check(self, sort: str) -> str:
        if sort not in self._ancestors:
            raise OntologyError(f"unknown sort {sort!r}")
        return sort

    def relation(self, s1: str, s2: str) -> SortRelation:
        if self._check(s1) == self._check(s2):
            return SortRelation.EQUAL
        if s1 in self._ancestors[s2]:
            return SortRelation.SUBSUMES
        if s2 in self._ancestors[s1]:
            return SortRelation.SUBSUMED_BY
        return SortRelation.DISJOINT

    def is_a(self, sort: str, ancestor: str) -> bool:
        """True when ``sort`` equals or is subsumed by ``ancestor``."""
        if sort not in self or ancestor not in self:
            return False
        return self.relation(ancestor, sort) in (SortRelation.EQUAL, SortRelation.SUBSUMES)

    def more_specific(self, s1: str, s2: str) -> str:
        """The subsumed one of two comparable sorts; ``s2`` when disjoint."""
        rel = self.relation(s1, s2)
        return s1 if rel is SortRelation.SUBSUMED_BY else s2

    def normalize(self, sort: str | None) -> str:
        if sort is None or sort not in self:
            return TOP
        return sort

    def __repr__(self):
        return f"SortHierarchy({len(self)} sorts)"


def load_sorts(source) -> SortHierarchy:
    """Read ``child < parent`` declarations."""
    parent: dict[str, str] = {}
    for no, line in _lines(source):
        if line.count("<") != 1:
            raise OntologyError(f"line {no}: expected 'child < parent', got {line!r}")
        child, par = (part.strip() for part in line.split("<"))
        if not child or not par:
            raise OntologyError(f"line {no}: empty sort name")
        if child == TOP:
            raise OntologyError(f"line {no}: TOP cannot have a parent")
        if child in parent and parent[child] != par:
            raise OntologyError(f"sort {child!r} declared with two parents ({parent[child]!r}, {par!r})")
        parent[child] = par
    # detect cycles before the tree is built so the message names the sort
    for start in sorted(parent):
        seen, cur = {start}, start
        while cur in parent:
            cur = parent[cur]
            if cur in seen:
                raise OntologyError(f"cycle at sort {start!r}")
            seen.add(cur)
    return SortHierarchy(parent)


def sort_relation(h: SortHierarchy, s1: str, s2: str) -> SortRelation:
    return h.relation(s1, s2)


# -- number ----------------------------------------------------------------

@dataclass(frozen=True)
class NumberValue:
    kind: str  # SG, PL, EXACT or UNKNOWN
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("SG", "PL", "EXACT", "UNKNOWN"):
            raise ValueError(f"bad number kind {self.kind!r}")
        if (self.kind == "EXACT") != (self.n is not None):
            raise ValueError("EXACT numbers carry a count, others do not")
        if self.n is not None and self.n < 1:
            raise ValueError("EXACT count must be positive")

    @classmethod
    def exact(cls, n: int) -> "NumberValue":
        return cls("EXACT", n)

    @classmethod
    def parse(cls, text: str) -> "NumberValue":
        text = text.strip().upper()
        if text.isdigit():
            return cls.exact(int(text))
        if text in ("SG", "PL", "UNKNOWN"):
            return cls(text)
        if text in ("SINGULAR", "PLURAL"):
            return cls("SG" if text == "SINGULAR" else "PL")
        raise ValueError(f"bad number value {text!r}")

    @property
    def grammatical(self) -> str:
        """SG, PL or UNKNOWN."""
        if self.kind == "EXACT":
            return "SG" if self.n == 1 else "PL"
        return self.kind

    @property
    def specificity(self) -> int:
        return {"UNKNOWN": 0, "SG": 1, "PL": 1, "EXACT": 2}[self.kind]

    def __str__(self):
        return str(self.n) if self.kind == "EXACT" else self.kind


SG = NumberValue("SG")
PL = NumberValue("PL")
UNKNOWN = NumberValue("UNKNOWN")


def _numbers_agree(a: NumberValue, b: NumberValue) -> bool:
    if a.kind == "UNKNOWN" or b.kind == "UNKNOWN":
        return True
    if a.kind == "EXACT" and b.kind == "EXACT":
        return a.n == b.n
    return a.grammatical == b.grammatical


def number_consistent(
    n1: NumberValue,
    n2: NumberValue,
    anaphor_is_plural_pronoun: bool = False,
    antecedent_sort: str = TOP,
    h: SortHierarchy | None = None,
    org_sort: str = "organization",
) -> bool:
    """Can an anaphor numbered ``n1`` take an antecedent numbered ``n2``?

    Plural pronouns may take singular antecedents whose sort is, or is
    subsumed by, ``org_sort``.
    """
    if _numbers_agree(n1, n2):
        return True
    if anaphor_is_plural_pronoun and h is not None and n2.grammatical == "SG":
        return h.is_a(antecedent_sort, org_sort)
    return False


# -- modifiers -------------------------------------------------------------

class ModifierLexicon:
    """Flat classes of mutually exclusive modifiers (e.g. nationalities)."""

    def __init__(self, classes: Iterable[Iterable[str]] = ()):
        self.classes: tuple[frozenset[str], ...] = tuple(
            frozenset(m.strip().lower() for m in cls if m.strip()) for cls in classes
        )
        self._class_of: dict[str, int] = {}
        for idx, cls in enumerate(self.classes):
            for mod in cls:
                if mod in self._class_of:
                    raise OntologyError(f"modifier {mod!r} appears in two classes")
                self._class_of[mod] = idx

    def class_of(self, modifier: str) -> int | None:
        return self._class_of.get(modifier.lower())

    def __len__(self):
        return len(self.classes)


def load_modifiers(source) -> ModifierLexicon:
    return ModifierLexicon(line.split(",") for _, line in _lines(source))


def modifier_consistent(mods1: Iterable[str], mods2: Iterable[str], lex: ModifierLexicon) -> bool:
    """False iff the two sets hold different members of one exclusive class."""
    seen: dict[int, set[str]] = {}
    for mod in mods1:
        cls = lex.class_of(mod)
        if cls is not None:
            seen.setdefault(cls, set()).add(mod.lower())
    for mod in mods2:
        cls = lex.class_of(mod)
        if cls is not None and cls in seen and seen[cls] - {mod.lower()}:
            return False
    return True


# -- heads -----------------------------------------------------------------

class HeadLexicon:
    """Maps head strings to sorts; unknown heads map to TOP."""

    def __init__(self, entries: Mapping[str, str] | None = None):
        self.entries = {k.lower(): v for k, v in (entries or {}).items()}

    def lookup(self, head: str) -> str:
        head = head.lower()
        for cand in (head, *_singulars(head)):
            if cand in self.entries:
                return self.entries[cand]
        return TOP

    def __contains__(self, head: str) -> bool:
        return self.lookup(head) != TOP

    def __len__(self):
        return len(self.entries)


def _singulars(word: str) -> list[str]:
    out = []
    if word.endswith("ies") and len(word) > 4:
        out.append(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        out.append(word[:-2])
    if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
        out.append(word[:-1])
    return out


def load_heads(source) -> HeadLexicon:
    entries = {}
    for no, line in _lines(source):
        if ":" not in line:
            raise OntologyError(f"line {no}: expected 'head : sort', got {line!r}")
        head, sort = (part.strip() for part in line.rsplit(":", 1))
        entries[head] = sort
    return HeadLexicon(entries)


# -- bundle ----------------------------------------------------------------

_NAME_TYPES = ("PERSON", "LOCATION", "ORGANIZATION", "UNKNOWN")


@dataclass(frozen=True)
class Ontology:
    """Everything the resolver knows about the world, read-only."""

    sorts: SortHierarchy
    heads: HeadLexicon
    modifiers: ModifierLexicon
    names: Mapping[str, str]  # known name -> PERSON/LOCATION/ORGANIZATION/UNKNOWN

    @classmethod
    def empty(cls) -> "Ontology":
        return cls(SortHierarchy(), HeadLexicon(), ModifierLexicon(), {})

    def __post_init__(self):
        for head, sort in self.heads.entries.items():
            if sort not in self.sorts:
                raise OntologyError(f"head {head!r} maps to undeclared sort {sort!r}")


def load_names(source) -> dict[str, str]:
    """Read known names, one per line, with an optional ``|TYPE`` suffix."""
    names = {}
    for no, line in _lines(source):
        name, _, kind = line.partition("|")
        kind = kind.strip().upper() or "UNKNOWN"
        if kind not in _NAME_TYPES:
            raise OntologyError(f"line {no}: unknown name type {kind!r}")
        names[re.sub(r"\s+", " ", name.strip())] = kind
    return names


def load_ontology(sorts=None, heads=None, modifiers=None, names=None) -> Ontology:
    """Load any subset of the four lexicon files; missing ones are empty."""
    return Ontology(
        load_sorts(sorts) if sorts is not None else SortHierarchy(),
        load_heads(heads) if heads is not None else HeadLexicon(),
        load_modifiers(modifiers) if modifiers is not None else ModifierLexicon(),
        load_names(names) if names is not None else {},
    )
