import itertools

import pytest
from hypothesis import given, strategies as st

from corefie.ontology import (
    PL,
    SG,
    TOP,
    UNKNOWN,
    HeadLexicon,
    ModifierLexicon,
    NumberValue,
    Ontology,
    OntologyError,
    SortHierarchy,
    SortRelation,
    load_heads,
    load_modifiers,
    load_names,
    load_sorts,
    modifier_consistent,
    number_consistent,
    sort_relation,
)

BIZ = "automaker < company\nairline < company\ncompany < organization\nunion < organization\nperson < TOP\n"


def test_chain_depth():
    h = load_sorts("automaker < company\ncompany < organization\n")
    assert h.ancestors("automaker") == ("company", "organization", TOP)


def test_empty_file_gives_top_only():
    assert load_sorts("").sorts == frozenset({TOP})


@pytest.mark.parametrize("text", ["a < b\nb < a\n", "a < b\nb < c\nc < a\n", "a < a\n"])
def test_cycles_rejected(text):
    with pytest.raises(OntologyError, match="cycle at sort"):
        load_sorts(text)


def test_two_parents_rejected():
    with pytest.raises(OntologyError, match="two parents"):
        load_sorts("a < b\na < c\n")


def test_comments_and_file_paths(tmp_path):
    f = tmp_path / "s.sorts"
    f.write_text("# header\nautomaker < company  # trailing\n\n")
    assert load_sorts(f).relation("company", "automaker") is SortRelation.SUBSUMES
    assert load_sorts(str(f)).relation("company", "automaker") is SortRelation.SUBSUMES


def test_business_sort_examples():
    h = load_sorts(BIZ)
    assert sort_relation(h, "company", "automaker") is SortRelation.SUBSUMES
    assert sort_relation(h, "automaker", "airline") is SortRelation.DISJOINT
    assert sort_relation(h, "company", "company") is SortRelation.EQUAL
    assert sort_relation(h, "automaker", "company") is SortRelation.SUBSUMED_BY
    assert sort_relation(h, TOP, "person") is SortRelation.SUBSUMES


def test_unknown_head_maps_to_top():
    assert HeadLexicon({"automaker": "automaker"}).lookup("spaceship") == TOP
    assert HeadLexicon({"automaker": "automaker"}).lookup("automakers") == "automaker"


def test_heads_must_use_declared_sorts():
    with pytest.raises(OntologyError):
        Ontology(SortHierarchy(), HeadLexicon({"x": "nosuch"}), ModifierLexicon(), {})


def test_head_and_name_files():
    heads = load_heads("company : company\n# c\nits : thing\n")
    assert heads.lookup("Company") == "company"
    names = load_names("General Motors|organization\nColonial Beef\n")
    assert names == {"General Motors": "ORGANIZATION", "Colonial Beef": "UNKNOWN"}
    with pytest.raises(OntologyError):
        load_names("X|ALIEN\n")


@st.composite
def forests(draw):
    """Random single-inheritance forests over up to 9 sorts."""
    n = draw(st.integers(1, 9))
    names = [f"s{i}" for i in range(n)]
    parent = {}
    for i in range(1, n):
        p = draw(st.integers(-1, i - 1))
        if p >= 0:
            parent[names[i]] = names[p]
    return SortHierarchy(parent)


def _oracle(h, a, b):
    """Relation by walking parent links one at a time."""
    def up(s):
        out = [s]
        while s != TOP:
            s = h.parent(s)
            out.append(s)
        return out
    if a == b:
        return SortRelation.EQUAL
    if a in up(b):
        return SortRelation.SUBSUMES
    if b in up(a):
        return SortRelation.SUBSUMED_BY
    return SortRelation.DISJOINT


@given(forests())
def test_relation_laws(h):
    sorts = sorted(h.sorts)
    rel = h.relation
    for a, b in itertools.product(sorts, repeat=2):
        assert rel(a, b) is _oracle(h, a, b)
        assert (rel(a, b) is SortRelation.SUBSUMES) == (rel(b, a) is SortRelation.SUBSUMED_BY)
    for a, b, c in itertools.product(sorts, repeat=3):
        if rel(a, b) is SortRelation.SUBSUMES and rel(b, c) is SortRelation.SUBSUMES:
            assert rel(a, c) is SortRelation.SUBSUMES


def test_number_examples():
    h = load_sorts(BIZ)
    twelve = NumberValue.exact(12)
    assert number_consistent(twelve, PL)
    assert not number_consistent(twelve, SG)
    assert number_consistent(NumberValue.exact(1), SG)
    assert number_consistent(UNKNOWN, SG)
    assert number_consistent(PL, SG, True, "company", h)
    assert not number_consistent(PL, SG, True, "person", h)
    assert not number_consistent(PL, SG, False, "company", h)
    assert number_consistent(PL, SG, True, "firm", load_sorts("firm < org"), "org")


numbers = st.one_of(
    st.sampled_from([SG, PL, UNKNOWN]), st.integers(1, 30).map(NumberValue.exact),
)


@given(numbers, numbers)
def test_number_symmetry(a, b):
    assert number_consistent(a, b) == number_consistent(b, a)


def test_number_parse():
    assert NumberValue.parse("sg") == SG
    assert NumberValue.parse("PLURAL") == PL
    assert NumberValue.parse("12") == NumberValue.exact(12)
    with pytest.raises(ValueError):
        NumberValue.parse("lots")


def test_modifier_examples():
    lex = load_modifiers("french, british, german\n")
    assert not modifier_consistent({"french"}, {"british"}, lex)
    assert modifier_consistent({"french"}, {"multinational"}, lex)
    assert modifier_consistent(set(), {"newly founded"}, lex)
    assert modifier_consistent({"French"}, {"french"}, lex)


def test_modifier_classes_disjoint():
    with pytest.raises(OntologyError):
        ModifierLexicon([["a", "b"], ["b", "c"]])


@given(st.sets(st.sampled_from(["french", "british", "german", "big", "red", "blue"])),
       st.sets(st.sampled_from(["french", "british", "german", "big", "red", "blue"])))
def test_modifier_symmetry(a, b):
    lex = ModifierLexicon([["french", "british", "german"], ["red", "blue"]])
    assert modifier_consistent(a, b, lex) == modifier_consistent(b, a, lex)
