import pytest

from medlay.errors import CorruptInputError, ValidationError
from medlay.lexicon import GERMAN
from medlay.umls import (
    DEFAULT_SEMANTIC_TYPES,
    IngestConfig,
    IngestStats,
    attach_semantic_types,
    filter_by_semantic_types,
    parse_columns,
    parse_concept_table,
)

from conftest import load_umls_fixture


def test_fixture_counts():
    lex, stats = load_umls_fixture()
    assert len(lex) == 20
    assert lex.mention_count() == 79
    assert (stats.lines, stats.malformed, stats.suppressed) == (96, 2, 1)
    assert (stats.filtered_language, stats.duplicates, stats.unknown_cuis) == (13, 1, 1)
    assert stats.lines == stats.malformed + stats.suppressed + stats.filtered_language + stats.duplicates + lex.mention_count()


def test_suppressed_row_dropped(umls):
    folded = {m.folded for _, m in umls.mentions(GERMAN)}
    assert "carcinom" not in folded
    assert "karzinom" in folded


def test_languages_restricted(umls):
    assert {m.language for _, m in umls.mentions()} == {"GER", "ENG", "FRE"}


def test_semantic_types_attached(umls):
    assert "Neoplastic Process" in umls["C0007097"].semantic_types
    assert len(DEFAULT_SEMANTIC_TYPES) == 9


def test_sty_filter(umls):
    kept = filter_by_semantic_types(umls, DEFAULT_SEMANTIC_TYPES)
    assert "C0007097" not in kept
    assert "C0024031" in kept
    # the source lexicon is untouched
    assert "C0007097" in umls


def test_two_field_sty_lines():
    lex = parse_concept_table(["C1|GER|||||||||||||Fieber|||"])
    attach_semantic_types(lex, ["C1|Sign or Symptom", "C9|Finding"])
    assert lex["C1"].semantic_types == {"Sign or Symptom"}


def test_custom_columns():
    cfg = IngestConfig(columns=parse_columns("cui=0,lang=1,str=2"))
    lex = parse_concept_table(["C1|GER|Fieber", "C1|ENG|Fever"], cfg)
    assert lex.mention_count() == 2


def test_parse_columns_errors():
    with pytest.raises(ValidationError):
        parse_columns("cui=0,lang=x")
    with pytest.raises(ValidationError):
        parse_columns("sab=3")


def test_languages_must_include_german():
    with pytest.raises(ValidationError):
        IngestConfig(languages=frozenset({"ENG"}))


def test_min_mentions():
    lines = ["C1|GER|||||||||||||Fieber|||", "C2|GER|||||||||||||A|||", "C2|GER|||||||||||||B|||"]
    lex = parse_concept_table(lines, IngestConfig(min_mentions=2))
    assert [c.cui for c in lex] == ["C2"]


def test_corrupt_table():
    stats = IngestStats()
    with pytest.raises(CorruptInputError):
        parse_concept_table(["garbage", "more garbage", "C1|GER|||||||||||||x|||"], stats=stats)
