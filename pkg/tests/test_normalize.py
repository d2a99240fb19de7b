import io

import pytest

from medlay.lexicon import GERMAN
from medlay.normalize import MatchKind, build_index, normalize, read_index, simplify, write_index

SUFFIXES = ("e", "en", "n", "s", "es", "er")


def inflected_queries(lexicon, n=50):
    """Deterministic inflection list: single-word German mentions plus a suffix."""
    out = []
    for cui, m in sorted(lexicon.mentions(GERMAN), key=lambda t: (t[0], t[1].folded)):
        if " " in m.surface:
            continue
        for suffix in SUFFIXES:
            out.append((m.surface + suffix, cui))
    return out[:n]


def recall(index, queries, use_stem):
    return sum(1 for q, cui in queries if cui in normalize(index, q, use_stem).cuis) / len(queries)


def test_every_mention_round_trips(umls, wumls):
    for lex in (umls, wumls):
        index = build_index(lex)
        for cui, m in lex.mentions(GERMAN):
            res = normalize(index, m.surface)
            assert res.kind is MatchKind.EXACT
            assert cui in res.cuis


def test_stem_recall_dominates(umls):
    queries = inflected_queries(umls)
    assert len(queries) == 50
    index = build_index(umls)
    exact, stemmed = recall(index, queries, False), recall(index, queries, True)
    assert stemmed >= exact
    assert stemmed > 0.5


def test_case_and_whitespace(umls_index):
    assert normalize(umls_index, "  HEXENSCHUSS ").cuis == ["C0024031"]
    assert normalize(umls_index, "").found is False


def test_stem_fallback(umls_index):
    res = normalize(umls_index, "Hexenschusses")
    assert res.kind is MatchKind.STEM and res.cuis == ["C0024031"]
    assert not normalize(umls_index, "Hexenschusses", use_stem=False).found


def test_ambiguous_returns_all(umls_index):
    res = normalize(umls_index, "Stein")
    assert res.cuis == ["C0008350", "C0022650"]


def test_not_found(umls_index):
    res = normalize(umls_index, "Zucker")
    assert not res.found and res.kind is None and res.cuis == []


def test_simplify(umls_index, umls_ssd):
    easier = simplify(umls_index, umls_ssd, "Pyelonephritis")
    assert [s for s, _ in easier] == ["Nierenbeckenentzündung"]
    easier = simplify(umls_index, umls_ssd, "Diarrhoe")
    assert [s for s, _ in easier] == ["Durchfall", "Diarrhö"]
    assert all(a[1] >= b[1] for a, b in zip(easier, easier[1:]))
    # the highest-scored mention has nothing easier
    assert simplify(umls_index, umls_ssd, "Durchfall") == []


def test_index_round_trip(wumls):
    index = build_index(wumls)
    buf = io.StringIO()
    write_index(index, buf)
    again = read_index(buf.getvalue().splitlines(True))
    assert again.exact == index.exact and again.stemmed == index.stemmed
    buf2 = io.StringIO()
    write_index(again, buf2)
    assert buf2.getvalue() == buf.getvalue()


def test_index_rejects_garbage():
    from medlay.errors import ValidationError

    with pytest.raises(ValidationError):
        read_index(["FUZZY\tx\tC1\n"])
