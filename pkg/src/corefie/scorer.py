"""MUC link-based scoring and per-expression-type breakdowns."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .mentions import DetType, Mention, Person

__all__ = [
    "ChainSet",
    "PronounRow",
    "ScoreReport",
    "TypeRow",
    "expression_type",
    "format_pronoun_table",
    "format_score",
    "format_type_table",
    "key_chains",
    "muc_score",
    "per_type_report",
    "pool_reports",
    "pronoun_report",
    "type_rows_tsv",
]


class ChainSet:
    """A partition of mention ids into coreference chains."""

    def __init__(self, chains: Iterable[Iterable[str]] = ()):
        seen: dict[str, int] = {}
        out = []
        for idx, chain in enumerate(chains):
            chain = frozenset(chain)
            if not chain:
                raise ValueError("empty chain")
            for mid in chain:
                if mid in seen:
                    raise ValueError(f"mention {mid!r} appears in two chains")
                seen[mid] = len(out)
            out.append(chain)
        self.chains: tuple[frozenset[str], ...] = tuple(sorted(out, key=sorted))
        self._index = {mid: out[i] for mid, i in seen.items()}

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "ChainSet":
        groups: dict[object, list[str]] = defaultdict(list)
        for mid, label in labels.items():
            groups[label].append(mid)
        return cls(groups.values())

    @property
    def mentions(self) -> frozenset[str]:
        return frozenset(self._index)

    def chain_of(self, mid: str) -> frozenset[str]:
        return self._index.get(mid, frozenset({mid}))

    def same_chain(self, a: str, b: str) -> bool:
        return b in self.chain_of(a)

    @property
    def links(self) -> int:
        return sum(len(c) - 1 for c in self.chains)

    def non_singletons(self) -> tuple[frozenset[str], ...]:
        return tuple(c for c in self.chains if len(c) > 1)

    def __iter__(self):
        return iter(self.chains)

    def __len__(self):
        return len(self.chains)

    def __eq__(self, other):
        return isinstance(other, ChainSet) and set(self.chains) == set(other.chains)

    def __hash__(self):
        return hash(frozenset(self.chains))

    def __repr__(self):
        body = ", ".join("{" + ",".join(sorted(c)) + "}" for c in self.chains)
        return f"ChainSet({body})"


def key_chains(mentions: Sequence[Mention]) -> ChainSet:
    """Identity chains from gold labels; unlabeled mentions are singletons."""
    labels = {m.id: (m.gold if m.gold is not None else ("", m.id)) for m in mentions}
    return ChainSet.from_labels(labels)


# -- MUC -------------------------------------------------------------------

@dataclass(frozen=True)
class ScoreReport:
    recall: float
    precision: float
    recall_num: int
    recall_den: int
    precision_num: int
    precision_den: int
    flags: tuple[str, ...] = ()
    per_type: tuple["TypeRow", ...] = ()

    @property
    def f1(self) -> float:
        if self.recall + self.precision == 0:
            return 0.0
        return 2 * self.precision * self.recall / (self.precision + self.recall)


def _link_counts(chains: ChainSet, other: ChainSet) -> tuple[int, int]:
    num = den = 0
    for chain in chains:
        parts = {other.chain_of(mid) for mid in chain}
        num += len(chain) - len(parts)
        den += len(chain) - 1
    return num, den


def muc_score(response: ChainSet, key: ChainSet) -> ScoreReport:
    """Vilain-style link recall and precision of ``response`` against ``key``.

    Mentions missing from one side count as singletons there.  A ratio with
    no links to count (0/0) is reported as 1.0 and named in ``flags``.
    """
    r_num, r_den = _link_counts(key, response)
    p_num, p_den = _link_counts(response, key)
    flags = []
    if r_den:
        recall = r_num / r_den
    else:
        recall = 1.0
        flags.append("recall: key has no links, 0/0 reported as 1")
    if p_den:
        precision = p_num / p_den
    else:
        precision = 1.0
        flags.append("precision: response has no links, 0/0 reported as 1")
    return ScoreReport(recall, precision, r_num, r_den, p_num, p_den, tuple(flags))


def pool_reports(reports: Iterable[ScoreReport]) -> ScoreReport:
    """Sum link counts over documents and recompute the ratios."""
    r_num = r_den = p_num = p_den = 0
    for rep in reports:
        r_num += rep.recall_num
        r_den += rep.recall_den
        p_num += rep.precision_num
        p_den += rep.precision_den
    flags = []
    if not r_den:
        flags.append("recall: key has no links, 0/0 reported as 1")
    if not p_den:
        flags.append("precision: response has no links, 0/0 reported as 1")
    return ScoreReport(r_num / r_den if r_den else 1.0, p_num / p_den if p_den else 1.0,
                       r_num, r_den, p_num, p_den, tuple(flags))


# -- per-type breakdown ----------------------------------------------------

TYPE_ORDER = (
    "Definites", "Pronouns", "Proper Names", "Reflexives",
    "Bare Nominals", "Possessed Nominals", "Indefinites",
)
CORE_TYPES = ("Definites", "Pronouns", "Proper Names", "Reflexives")

_TYPE_OF_DET = {
    DetType.DEF: "Definites",
    DetType.PRON: "Pronouns",
    DetType.POSS_PRON: "Pronouns",
    DetType.REFLEXIVE: "Reflexives",
    DetType.PROPER: "Proper Names",
    DetType.BARE: "Bare Nominals",
    DetType.POSS: "Possessed Nominals",
    DetType.INDEF: "Indefinites",
    DetType.QUANT: "Indefinites",  # quantified nominals have no row of their own
}


def expression_type(m: Mention) -> str:
    return _TYPE_OF_DET[m.det]


@dataclass(frozen=True)
class TypeRow:
    expression_type: str
    occurrences: int
    correct: int
    unscored: int = 0  # non-identity links counted in occurrences

    @property
    def rate(self) -> float:
        return self.correct / self.occurrences if self.occurrences else 0.0


def _occurrences(mentions: Sequence[Mention]):
    """Yield (mention, key antecedents) for every referential link to score.

    A mention is an occurrence when it is not the first mention of its gold
    chain, or when it carries a non-identity relation (subset, part, member).
    Mentions are taken in processing order.
    """
    earlier: dict[str, list[Mention]] = defaultdict(list)
    for m in sorted(mentions, key=lambda x: x.key):
        if m.gold is None:
            continue
        antecedents = list(earlier[m.gold])
        if antecedents or m.goldrel != "ident":
            yield m, antecedents
        earlier[m.gold].append(m)


def per_type_report(response: ChainSet, mentions: Sequence[Mention]) -> tuple[TypeRow, ...]:
    """Occurrences and correct resolutions per expression type.

    An occurrence is correct when the mention's response chain contains one
    of its gold antecedents.  Non-identity links are counted but can never
    be correct.
    """
    occ: dict[str, int] = defaultdict(int)
    ok: dict[str, int] = defaultdict(int)
    unscored: dict[str, int] = defaultdict(int)
    for m, antecedents in _occurrences(mentions):
        t = expression_type(m)
        occ[t] += 1
        if not antecedents:
            unscored[t] += 1
            continue
        chain = response.chain_of(m.id)
        if any(a.id in chain for a in antecedents):
            ok[t] += 1
    return tuple(TypeRow(t, occ[t], ok[t], unscored[t]) for t in TYPE_ORDER)


@dataclass(frozen=True)
class PronounRow:
    person: str
    antecedent: str  # intra-S or inter-S
    occurrences: int
    correct: int


def _pronoun_class(m: Mention) -> str:
    if m.det is DetType.REFLEXIVE:
        return "reflexive"
    if m.surface.lower() in ("that", "this"):
        return "that"
    if m.person in (Person.FIRST, Person.SECOND):
        return "1st/2nd person"
    return "3rd person"


def pronoun_report(response: ChainSet, mentions: Sequence[Mention]) -> tuple[PronounRow, ...]:
    """Pronoun links by grammatical person and intra/inter-sentential antecedent."""
    counts: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for m, antecedents in _occurrences(mentions):
        if not m.det.is_pronoun:
            continue
        nearest = antecedents[-1] if antecedents else None
        where = "intra-S" if nearest is not None and nearest.pos == m.pos else "inter-S"
        cell = counts[(_pronoun_class(m), where)]
        cell[0] += 1
        chain = response.chain_of(m.id)
        if any(a.id in chain for a in antecedents):
            cell[1] += 1
    order = ["3rd person", "that", "1st/2nd person", "reflexive"]
    keys = sorted(counts, key=lambda k: (order.index(k[0]), k[1] != "intra-S"))
    return tuple(PronounRow(p, a, *counts[(p, a)]) for p, a in keys)


# -- formatting ------------------------------------------------------------

def _pct(correct: int, total: int) -> str:
    return f"{correct}({round(100 * correct / total) if total else 0}%)"


def format_type_table(rows: Sequence[TypeRow], types: Sequence[str] | None = None,
                      keep_empty: bool = False) -> str:
    """Plain-text table: Expression Type, Number of Occurrences, Correctly Resolved."""
    if types is not None:
        rows = [r for r in rows if r.expression_type in types]
    if not keep_empty:
        rows = [r for r in rows if r.occurrences]
    total_occ = sum(r.occurrences for r in rows)
    total_ok = sum(r.correct for r in rows)
    body = [(r.expression_type, str(r.occurrences), _pct(r.correct, r.occurrences)) for r in rows]
    body.append(("TOTAL", str(total_occ), _pct(total_ok, total_occ)))
    header = ("Expression Type", "Number of Occurrences", "Correctly Resolved")
    return _grid(header, body, split_before_last=True)


def format_pronoun_table(rows: Sequence[PronounRow]) -> str:
    header = ("Grammatical Person", "Intra/Inter-S Antecedent", "Number of Occurrences", "Correctly Resolved")
    body = [(r.person, r.antecedent, str(r.occurrences), _pct(r.correct, r.occurrences)) for r in rows]
    return _grid(header, body)


def _grid(header, body, split_before_last=False) -> str:
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]

    def line(row):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        return "  ".join(cells).rstrip()

    rule = "-" * len(line(header))
    out = [line(header), rule]
    for i, row in enumerate(body):
        if split_before_last and i == len(body) - 1:
            out.append(rule)
        out.append(line(row))
    return "\n".join(out) + "\n"


def type_rows_tsv(rows: Sequence[TypeRow]) -> str:
    lines = ["expression_type\toccurrences\tcorrect\tunscored"]
    lines += [f"{r.expression_type}\t{r.occurrences}\t{r.correct}\t{r.unscored}" for r in rows]
    return "\n".join(lines) + "\n"


def format_score(report: ScoreReport) -> str:
    out = (f"MUC recall {report.recall:.3f} ({report.recall_num}/{report.recall_den})  "
           f"precision {report.precision:.3f} ({report.precision_num}/{report.precision_den})  "
           f"F1 {report.f1:.3f}\n")
    for flag in report.flags:
        out += f"  note: {flag}\n"
    return out
