import itertools

import pytest
from hypothesis import given, strategies as st

from corefie.document import parse_document
from corefie.mentions import build_mentions
from corefie.scorer import (
    ChainSet,
    format_pronoun_table,
    format_score,
    format_type_table,
    key_chains,
    muc_score,
    per_type_report,
    pool_reports,
    pronoun_report,
    type_rows_tsv,
)
from oracles import muc_oracle, set_partitions


def test_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_identity():
    key = ChainSet([["a", "b", "c"], ["d"]])
    rep = muc_score(key, key)
    assert (rep.recall, rep.precision, rep.f1) == (1.0, 1.0, 1.0)


def test_worked_example():
    key = ChainSet([["A", "B", "C"], ["D"]])
    resp = ChainSet([["A", "B"], ["C", "D"]])
    rep = muc_score(resp, key)
    assert (rep.recall, rep.precision) == (0.5, 0.5)
    assert muc_oracle(resp.chains, key.chains) == (0.5, 0.5)


def test_all_singletons_convention():
    key = ChainSet([["a", "b"], ["c"]])
    resp = ChainSet([["a"], ["b"], ["c"]])
    rep = muc_score(resp, key)
    assert rep.recall == 0.0 and rep.precision == 1.0
    assert any("precision" in f for f in rep.flags)
    assert "note:" in format_score(rep)


def test_f1_zero():
    rep = muc_score(ChainSet([["a", "c"], ["b", "d"]]), ChainSet([["a", "b"], ["c", "d"]]))
    assert rep.f1 == 0.0


def test_overlap_rejected():
    with pytest.raises(ValueError):
        ChainSet([["a", "b"], ["b", "c"]])


def test_missing_mentions_are_singletons():
    rep = muc_score(ChainSet([["a", "b"]]), ChainSet([["a", "b", "c"]]))
    assert rep.recall == 0.5 and rep.precision == 1.0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_oracle_small_universes(n):
    parts = [ChainSet(p) for p in set_partitions(range(n))]
    for resp, key in itertools.product(parts, repeat=2):
        rep = muc_score(resp, key)
        r, p = muc_oracle(resp.chains, key.chains)
        assert abs(rep.recall - r) <= 1e-12 and abs(rep.precision - p) <= 1e-12
        swapped = muc_score(key, resp)
        assert rep.recall == swapped.precision


partitions4 = [ChainSet(p) for p in set_partitions("abcd")]


@given(st.sampled_from(partitions4), st.sampled_from(partitions4), st.data())
def test_merging_response_chains_never_lowers_recall(resp, key, data):
    if len(resp) < 2:
        return
    i, j = data.draw(st.lists(st.integers(0, len(resp) - 1), min_size=2, max_size=2, unique=True))
    chains = list(resp.chains)
    merged = ChainSet([chains[i] | chains[j]] + [c for k, c in enumerate(chains) if k not in (i, j)])
    assert muc_score(merged, key).recall >= muc_score(resp, key).recall


def test_pooling():
    a = muc_score(ChainSet([["a", "b"]]), ChainSet([["a", "b"]]))
    b = muc_score(ChainSet([["c"], ["d"]]), ChainSet([["c", "d"]]))
    pooled = pool_reports([a, b])
    assert (pooled.recall_num, pooled.recall_den) == (1, 2)


DEF_CHAIN = ('<DOC id="d"><P><S><M id="a" gold="x">A firm</M> rose.</S>'
             '<S><M id="b" gold="x">The firm</M> fell.</S></P></DOC>')


def test_perfect_definite_chain_row():
    ms = build_mentions(parse_document(DEF_CHAIN))
    rows = {r.expression_type: r for r in per_type_report(ChainSet([["a", "b"]]), ms)}
    assert (rows["Definites"].occurrences, rows["Definites"].correct) == (1, 1)
    assert rows["Indefinites"].occurrences == 0


def test_nonidentity_links_counted_never_correct():
    raw = ('<DOC id="d"><P><S><M id="a" gold="x">The unions</M> met.</S>'
           '<S><M id="b" gold="y" goldrel="member">the union</M> left.</S></P></DOC>')
    ms = build_mentions(parse_document(raw))
    rows = {r.expression_type: r for r in per_type_report(ChainSet([["a", "b"]]), ms)}
    assert (rows["Definites"].occurrences, rows["Definites"].correct, rows["Definites"].unscored) == (1, 0, 1)


def test_airline_article_gold_counts(article, biz):
    ms = build_mentions(article, biz)
    rows = {r.expression_type: r for r in per_type_report(key_chains(ms), ms)}
    assert rows["Pronouns"].occurrences == 14
    assert rows["Definites"].occurrences == 25
    # with the key as response every identity link is right
    assert rows["Pronouns"].correct == 14
    assert rows["Definites"].correct == 25 - rows["Definites"].unscored


def test_tables_render(article, biz):
    ms = build_mentions(article, biz)
    key = key_chains(ms)
    table = format_type_table(per_type_report(key, ms))
    assert table.splitlines()[0].split() == ["Expression", "Type", "Number", "of", "Occurrences", "Correctly", "Resolved"]
    assert "Pronouns" in table and "TOTAL" in table
    assert "Reflexives" not in table
    assert "Reflexives" in format_type_table(per_type_report(key, ms), keep_empty=True)
    assert type_rows_tsv(per_type_report(key, ms)).startswith("expression_type\toccurrences")
    assert "3rd person" in format_pronoun_table(pronoun_report(key, ms))
