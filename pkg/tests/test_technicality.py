import io
import math

import pytest
from hypothesis import given, settings, strategies as st

from medlay.errors import ValidationError
from medlay.lexicon import GERMAN, Concept, Mention, Source
from medlay.technicality import (
    EvaluationSheet,
    build_ssd,
    harmonized_distance,
    harmonized_distance_multi,
    levenshtein,
    read_ssd,
    sample_for_manual_eval,
    sort_synonyms,
    write_ssd,
)

from oracles import ALPHABET, brute_harmonized, dp_levenshtein, random_pairs, random_triples

words = st.text(alphabet=ALPHABET, max_size=12)


def ger(s):
    return Mention(s, GERMAN, Source.UMLS)


def test_levenshtein_matches_dp_oracle():
    for a, b in random_pairs(11, 1000):
        assert levenshtein(a, b) == dp_levenshtein(a, b)


@pytest.mark.parametrize(
    "a,b,d",
    [("", "", 0), ("", "abc", 3), ("kitten", "sitting", 3), ("karzinom", "carcinoma", 3),
     ("karzinom", "carcinome", 3), ("müller", "muller", 1), ("straße", "strasse", 2)],
)
def test_levenshtein_known(a, b, d):
    assert levenshtein(a, b) == d


@given(words, words, words)
def test_levenshtein_metric(a, b, c):
    ab = levenshtein(a, b)
    assert ab == levenshtein(b, a)
    assert levenshtein(a, c) <= ab + levenshtein(b, c)
    assert abs(len(a) - len(b)) <= ab <= max(len(a), len(b))
    assert (ab == 0) == (a == b)


def test_worked_example():
    s = harmonized_distance(ger("Karzinom"), ["carcinoma"], ["carcinome"])
    assert s.h_dist == pytest.approx(37.5, abs=1e-12)
    assert s.defined and not s.single_language


def test_identity_is_zero():
    s = harmonized_distance(ger("Lumbago"), ["Lumbago"], ["lumbago"])
    assert s.h_dist == 0.0


def test_matches_brute_force():
    for target, en, fr in random_triples(5, 200):
        got = harmonized_distance(ger(target), en, fr).h_dist
        want = brute_harmonized(target, en, fr)
        assert math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-12)


def test_min_picks_closest_reference():
    s = harmonized_distance(ger("Fieber"), ["fever", "pyrexia", "fieber"], ["fièvre"])
    assert s.h_dist == pytest.approx((0 + dp_levenshtein("fieber", "fièvre")) / 12 * 100)


def test_single_language_fallback():
    s = harmonized_distance(ger("Pyelonephritis"), ["Pyelonephritis"], [])
    assert s.defined and s.single_language and s.h_dist == 0.0
    strict = harmonized_distance(ger("Pyelonephritis"), ["Pyelonephritis"], [], strict=True)
    assert not strict.defined and math.isinf(strict.h_dist)


def test_undefined_without_references():
    s = harmonized_distance(ger("Blähungen"), [], [])
    assert not s.defined and math.isinf(s.h_dist)


def test_target_must_be_german():
    with pytest.raises(ValidationError):
        harmonized_distance(Mention("fever", "ENG"), ["x"], ["y"])


def test_scale_option():
    raw = harmonized_distance(ger("Karzinom"), ["carcinoma"], ["carcinome"], scale=1.0)
    assert raw.h_dist == pytest.approx(0.375)


def test_multi_language_generalization():
    s = harmonized_distance_multi(ger("abc"), [["abc"], ["abd"], ["xyz"]])
    assert s.h_dist == pytest.approx((0 + 1 + 3) / 9 * 100)


def test_sort_invariants_on_fixture(umls):
    for concept in umls:
        if not concept.german():
            continue
        first = sort_synonyms(concept)
        assert sort_synonyms(concept) == first
        hs = [s.h_dist for s in first.ranked if s.defined]
        assert hs == sorted(hs)
        for k in (0.01, 1.0, 7.5, 1000.0):
            scaled = sort_synonyms(concept, scale=k)
            assert [s.mention for s in scaled.ranked] == [s.mention for s in first.ranked]


def test_undefined_scores_sort_last():
    c = Concept("C1", set(), {GERMAN: [ger("b"), ger("a")], "ENG": [Mention("b", "ENG")]})
    entry = sort_synonyms(c, ["ENG"], strict=True)
    assert [s.defined for s in entry.ranked] == [True, True]
    c = Concept("C2", set(), {GERMAN: [ger("zz"), ger("aa")]})
    assert [s.surface for s in sort_synonyms(c).ranked] == ["aa", "zz"]


def test_ties_broken_by_folded_form():
    c = Concept("C1", set(), {GERMAN: [ger("Pyrexie"), ger("Fieber")], "ENG": [Mention("zzzzzz", "ENG")]})
    ranked = sort_synonyms(c, ["ENG"]).ranked
    assert ranked[0].h_dist == ranked[1].h_dist == 100.0
    assert [s.surface for s in ranked] == ["Fieber", "Pyrexie"]


def test_build_ssd_filter(umls):
    ssd = build_ssd(umls)
    cuis = [e.cui for e in ssd]
    assert cuis == sorted(cuis)
    assert len(ssd) == 16
    assert "C0007097" not in cuis and "C0019112" not in cuis
    assert len(build_ssd(umls, None)) == 19


def test_ssd_round_trip(umls):
    ssd = build_ssd(umls)
    buf = io.StringIO()
    write_ssd(ssd, buf)
    again = read_ssd(buf.getvalue().splitlines(True))
    assert [(e.cui, [(s.surface, s.h_dist, s.defined) for s in e.ranked]) for e in again] == [
        (e.cui, [(s.surface, s.h_dist, s.defined) for s in e.ranked]) for e in ssd
    ]


def test_read_ssd_rejects_bad_header():
    with pytest.raises(ValidationError):
        read_ssd(["CUI\tRANK\tSURFACE\tH_DIST\tDEFINED\n", "C1\t1\tFieber\n"])
    with pytest.raises(ValidationError):
        read_ssd(["C1\t1\tFieber\t1.0\tmaybe\n"])
    with pytest.raises(ValidationError):
        read_ssd(["C1\tone\tFieber\t1.0\ttrue\n"])


def test_sample_deterministic(umls):
    ssd = build_ssd(umls)
    a = sample_for_manual_eval(ssd, 5, "pairs", seed=42)
    b = sample_for_manual_eval(ssd, 5, "pairs", seed=42)
    assert a == b
    assert isinstance(a, EvaluationSheet)
    for row in a.rows:
        assert float(row["gap"]) >= 0
        assert row["judgment"] == ""
    lowest = sample_for_manual_eval(ssd, 3, "lowest-only", seed=1)
    assert lowest.mode == "lowest"
    assert all(r["definition_1"] == "" for r in lowest.rows)


def test_sample_too_many(umls):
    with pytest.raises(ValidationError):
        sample_for_manual_eval(build_ssd(umls), 500, "pairs")
    with pytest.raises(ValidationError):
        sample_for_manual_eval(build_ssd(umls), 1, "bogus")


def test_sheet_csv(umls):
    buf = io.StringIO()
    sample_for_manual_eval(build_ssd(umls), 2, "pairs", seed=0).write_csv(buf)
    header = buf.getvalue().splitlines()[0]
    assert header == "cui,lowest,lowest_h_dist,highest,highest_h_dist,gap,judgment"


@settings(max_examples=50)
@given(st.lists(st.text(alphabet="abcdefg", min_size=1, max_size=8), min_size=1, max_size=6, unique=True),
       st.floats(min_value=0.001, max_value=1e4))
def test_rescale_property(germans, k):
    c = Concept("C1", set(), {GERMAN: [ger(g) for g in germans], "ENG": [Mention("abc", "ENG")],
                              "FRE": [Mention("gfe", "FRE")]})
    base = [s.mention for s in sort_synonyms(c).ranked]
    assert [s.mention for s in sort_synonyms(c, scale=k).ranked] == base
