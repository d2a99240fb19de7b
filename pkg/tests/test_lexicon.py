import io
import unicodedata

import pytest
from hypothesis import given, strategies as st

from medlay.errors import UnknownConceptError, ValidationError
from medlay.lexicon import (
    GERMAN,
    Lexicon,
    Mention,
    Provenance,
    Source,
    case_fold,
    load_lexicon,
    merge,
    read_snapshot,
    save_lexicon,
    wik_cui,
    write_snapshot,
)
from medlay.stemming import stem

surfaces = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="\t\n\r\x0b\x0c\x1c\x1d\x1e\x85  "),
    min_size=1,
    max_size=20,
).filter(lambda s: s.strip())


@given(st.text())
def test_case_fold_idempotent(s):
    assert case_fold(case_fold(s)) == case_fold(s)


@given(st.text())
def test_case_fold_is_nfc(s):
    f = case_fold(s)
    assert unicodedata.normalize("NFC", f) == f


def test_case_fold_keeps_eszett_and_umlauts():
    assert case_fold("Fuß") == "fuß"
    assert case_fold("ÄRZTIN") == "ärztin"
    # decomposed u + combining diaeresis composes to a single code point
    assert case_fold("Müller") == "müller"


def test_mention_derived_fields():
    m = Mention("  Hexenschüsse ", GERMAN, Source.UMLS)
    assert m.surface == "Hexenschüsse"
    assert m.folded == "hexenschüsse"
    assert m.stem == stem("hexenschüsse")
    assert Mention("Lumbago", "ENG", Source.UMLS).stem == ""


@pytest.mark.parametrize("bad", ["", "   ", "a\tb", "a\nb"])
def test_mention_rejects_bad_surface(bad):
    with pytest.raises(ValidationError):
        Mention(bad, GERMAN, Source.UMLS)


def test_bad_language_code():
    with pytest.raises(ValidationError):
        Mention("x", "german", Source.UMLS)


def test_add_mention_dedup_and_unknown():
    lex = Lexicon()
    lex.add_concept("C1", ["Disease or Syndrome"])
    assert lex.add_mention("C1", Mention("Fieber", GERMAN, Source.UMLS))
    assert not lex.add_mention("C1", Mention("FIEBER", GERMAN, Source.UMLS))
    # same folded form from another source is a distinct mention
    assert lex.add_mention("C1", Mention("fieber", GERMAN, Source.WIKTIONARY))
    with pytest.raises(UnknownConceptError):
        lex.add_mention("C2", Mention("x", GERMAN, Source.UMLS))


def test_snapshot_round_trip(umls):
    out, sty = io.StringIO(), io.StringIO()
    write_snapshot(umls, out, sty)
    again = read_snapshot(out.getvalue().splitlines(True), sty.getvalue().splitlines(True))
    out2, sty2 = io.StringIO(), io.StringIO()
    write_snapshot(again, out2, sty2)
    assert out.getvalue() == out2.getvalue()
    assert sty.getvalue() == sty2.getvalue()
    assert again.provenance is Provenance.UMLS
    assert {c.cui: c.semantic_types for c in again} == {c.cui: c.semantic_types for c in umls}


def test_save_load_files(tmp_path, wumls):
    path, companion = save_lexicon(wumls, tmp_path / "w.tsv")
    assert companion.name == "w.sty.tsv"
    loaded = load_lexicon(path)
    assert loaded.provenance is Provenance.WUMLS
    assert loaded.mention_count() == wumls.mention_count()


@given(st.lists(st.tuples(st.sampled_from(["C1", "C2", "C3"]), surfaces), max_size=15))
def test_snapshot_round_trip_property(pairs):
    lex = Lexicon()
    for cui, s in pairs:
        lex.add_concept(cui, ["T"])
        lex.add_mention(cui, Mention(s, GERMAN, Source.UMLS))
    buf, sbuf = io.StringIO(), io.StringIO()
    write_snapshot(lex, buf, sbuf)
    again = read_snapshot(io.StringIO(buf.getvalue()), io.StringIO(sbuf.getvalue()))
    assert sorted(m.key for _, m in again.mentions()) == sorted(m.key for _, m in lex.mentions())


def test_snapshot_rejects_garbage():
    with pytest.raises(ValidationError):
        read_snapshot(["C1\tGER\tUMLS\n", ])
    with pytest.raises(ValidationError):
        read_snapshot(["C1\tGER\tNOPE\tx\n"])


def test_merge_order_independent(umls, wumls):
    a = merge([umls, wumls])
    b = merge([wumls, umls])
    buf_a, buf_b = io.StringIO(), io.StringIO()
    write_snapshot(a, buf_a)
    write_snapshot(b, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()
    assert a.mention_count() == wumls.mention_count()


def test_wik_cui_stable():
    assert wik_cui("Bauchweh") == wik_cui("BAUCHWEH")
    assert wik_cui("Bauchweh").startswith("WIK:")
    assert wik_cui("Bauchweh") != wik_cui("Kopfweh")


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzäöüß ", max_size=25))
def test_stem_fixed_point(word):
    assert stem(stem(word)) == stem(word)


def test_stem_per_token():
    assert stem("blut im urin") == " ".join(stem(t) for t in ["blut", "im", "urin"])
    assert stem("") == ""
