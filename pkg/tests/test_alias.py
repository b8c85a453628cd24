import itertools

from hypothesis import given, strategies as st

from corefie.alias import NameRecord, is_acronym, is_alias, name_tokens, resolve_names, types_compatible


def acronym_oracle(short, full):
    """Membership in the set of all in-order selections of initials."""
    initials = [t[0].upper() for t in full if t[0].isalpha()]
    picks = {
        "".join(initials[i] for i in idx)
        for r in range(1, len(initials) + 1)
        for idx in itertools.combinations(range(len(initials)), r)
    }
    return short in picks


def test_alias_examples():
    assert is_alias(["Colonial"], ["Colonial", "Beef"])
    assert is_alias(["American"], ["American", "Airlines"])
    assert not is_alias(["Colonial", "Beef"], ["Colonial", "Beef"])
    assert is_alias(["Hormel"], ["Geo.", "A.", "Hormel", "&", "Co."])


def test_acronym_examples():
    assert is_acronym("GM", ["General", "Motors"])
    assert is_acronym("GM", ["General", "Mills", "Motors"])
    assert acronym_oracle("GM", ["General", "Mills", "Motors"])
    assert not is_acronym("MG", ["General", "Motors"])
    assert not is_acronym("Gm", ["General", "Motors"])
    assert not is_acronym("G", ["General", "Motors"])


words = st.lists(st.sampled_from(["Alpha", "Beta", "Gamma", "Delta", "Bravo", "Golf"]), min_size=1, max_size=5)


@given(st.text(alphabet="ABDG", min_size=2, max_size=4), words)
def test_acronym_matches_oracle(short, full):
    assert is_acronym(short, full) == acronym_oracle(short, full)


@given(words, words)
def test_alias_is_proper_ordered_subsequence(short, full):
    expected = tuple(short) != tuple(full) and any(
        list(c) == short for r in range(len(full) + 1) for c in itertools.combinations(full, r)
    )
    assert is_alias(short, full) == expected


@given(st.lists(st.sampled_from(["Ab", "Cd", "Ef", "Gh"]), min_size=3, max_size=4, unique=True))
def test_order_sensitivity(full):
    short = full[:2]
    assert is_alias(short, full)
    assert not is_alias(short, full[::-1])
    acronym = short[0][0] + short[1][0]
    assert is_acronym(acronym, full)
    assert not is_acronym(acronym, full[::-1])


def test_honorifics_stripped():
    assert name_tokens("Ms. Gibbs") == ("Gibbs",)
    assert name_tokens("Patt gibbs", case_normalize=True) == ("patt", "gibbs")
    assert name_tokens("Mr.") == ("Mr.",)


def test_types():
    assert types_compatible("UNKNOWN", "PERSON")
    assert not types_compatible("PERSON", "ORGANIZATION")


class _M:
    def __init__(self, mid, surface, key, sort=None):
        self.id, self.surface, self.key, self.sort = mid, surface, key, sort


def _run(registry_names, new, types=None, **kw):
    types = types or {}
    registry = [NameRecord(i, tuple(n.split()), types.get(n, "UNKNOWN"), (i,)) for i, n in enumerate(registry_names)]
    owner = {}
    mentions = []
    for j, surface in enumerate(new):
        m = _M(f"n{j}", surface, (100 + j,))
        owner[m.id] = 100 + j
        mentions.append(m)
    return resolve_names(mentions, registry, entity_of=owner.__getitem__,
                         name_type_of=lambda m: types.get(m.surface, "UNKNOWN"), **kw)


def test_resolve_names_examples():
    assert [m.target_eid for m in _run(["American Airlines"], ["American"])] == [0]
    assert [m.how for m in _run(["General Motors"], ["GM"])] == ["acronym"]
    assert _run(["Patt gibbs"], ["Ms. Gibbs"]) == []
    assert [m.target_eid for m in _run(["Patt gibbs"], ["Ms. Gibbs"], case_normalize=True)] == [0]
    assert _run(["General Motors"], ["MG"]) == []
    assert _run([], ["Anything"]) == []


def test_tie_break_exact_then_recent():
    assert _run(["Colonial Beef", "Colonial"], ["Colonial"])[0].how == "exact"
    assert _run(["Colonial Beef", "Colonial Bank"], ["Colonial"])[0].target_eid == 1


def test_type_conflict_blocks_merge():
    types = {"Ray Rogers": "PERSON", "Rogers": "ORGANIZATION"}
    assert _run(["Ray Rogers"], ["Rogers"], types) == []


def test_same_sentence_names_chain():
    matches = _run([], ["General Motors", "GM"])
    assert [(m.mention_id, m.target_eid) for m in matches] == [("n1", 100)]


def test_no_self_merge():
    registry = [NameRecord(5, ("Colonial", "Beef"), "UNKNOWN", (0,))]
    m = _M("x", "Colonial", (1,))
    assert resolve_names([m], registry, entity_of=lambda _: 5, name_type_of=lambda _: "UNKNOWN") == []
