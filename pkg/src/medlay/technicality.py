"""Technicality scoring of German mentions.

A German mention that is close (in edit distance) to the English and
French names of the same concept is likely a Latin/Greek-rooted technical
term. The harmonized distance of a target mention ``g`` is::

    (min_j lev(g, en_j) + min_k lev(g, fr_k)) / (2 * len(g))

multiplied by ``scale`` (100 by default, i.e. percent units). Low scores
mark technical terms; sorting a concept's German synonyms by the score
yields the Sorted Synonym Dataset (SSD).

Scores are computed on case-folded NFC strings; ``len`` counts code points,
spaces included.
"""
from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from medlay.errors import ValidationError
from medlay.lexicon import ENGLISH, FRENCH, GERMAN, Concept, Lexicon, Mention, Source, case_fold
from medlay.umls import DEFAULT_SEMANTIC_TYPES, filter_by_semantic_types

DEFAULT_REFERENCE_LANGUAGES = (ENGLISH, FRENCH)
DEFAULT_SCALE = 100.0


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over code points."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class ScoredMention:
    mention: Mention
    h_dist: float
    defined: bool = True
    # True when only one reference language contributed to the score
    single_language: bool = False

    @property
    def surface(self) -> str:
        return self.mention.surface

    def sort_key(self):
        return (not self.defined, self.h_dist if self.defined else 0.0,
                self.mention.folded, self.mention.surface)


def _folded(ref) -> str:
    return ref.folded if isinstance(ref, Mention) else case_fold(ref)


def harmonized_distance_multi(
    target: Mention,
    reference_lists: Sequence[Iterable],
    *,
    scale: float = DEFAULT_SCALE,
    strict: bool = False,
) -> ScoredMention:
    """Harmonized distance against any number of reference languages.

    Languages with no reference are left out of the average. With
    ``strict=True`` any missing language makes the score undefined.
    """
    if target.language != GERMAN:
        raise ValidationError(f"target mention must be German, got {target.language}")
    g = target.folded
    minima = []
    for refs in reference_lists:
        refs = [_folded(r) for r in refs]
        if refs:
            minima.append(min(levenshtein(g, r) for r in refs))
    if not minima or (strict and len(minima) < len(reference_lists)):
        return ScoredMention(target, math.inf, defined=False)
    h = sum(minima) / (len(minima) * len(g)) * scale
    return ScoredMention(target, h, True, single_language=len(minima) < len(reference_lists))


def harmonized_distance(
    target: Mention, en_refs: Iterable, fr_refs: Iterable, *, scale=DEFAULT_SCALE, strict=False
) -> ScoredMention:
    return harmonized_distance_multi(target, [list(en_refs), list(fr_refs)], scale=scale, strict=strict)


@dataclass(frozen=True)
class SortedSynonymEntry:
    cui: str
    ranked: tuple[ScoredMention, ...]

    def defined(self) -> list[ScoredMention]:
        return [s for s in self.ranked if s.defined]

    def lowest(self) -> ScoredMention | None:
        d = self.defined()
        return d[0] if d else None

    def highest(self) -> ScoredMention | None:
        d = self.defined()
        return d[-1] if d else None

    def scores_for(self, folded: str) -> list[ScoredMention]:
        return [s for s in self.ranked if s.mention.folded == folded]


def sort_synonyms(
    concept: Concept,
    reference_languages: Sequence[str] = DEFAULT_REFERENCE_LANGUAGES,
    *,
    scale: float = DEFAULT_SCALE,
    strict: bool = False,
) -> SortedSynonymEntry:
    """Score every German mention of *concept* against its own references.

    Ranking is ascending by score, ties broken by folded form; undefined
    scores go last.
    """
    german = concept.german()
    if not german:
        raise ValidationError(f"concept {concept.cui} has no German mentions")
    refs = [concept.in_language(lang) for lang in reference_languages]
    scored = [harmonized_distance_multi(m, refs, scale=scale, strict=strict) for m in german]
    scored.sort(key=ScoredMention.sort_key)
    return SortedSynonymEntry(concept.cui, tuple(scored))


def build_ssd(
    lexicon: Lexicon,
    sty_filter: Iterable[str] | None = DEFAULT_SEMANTIC_TYPES,
    reference_languages: Sequence[str] = DEFAULT_REFERENCE_LANGUAGES,
    *,
    scale: float = DEFAULT_SCALE,
    strict: bool = False,
) -> list[SortedSynonymEntry]:
    """Sorted synonym entries for every concept passing *sty_filter*.

    ``sty_filter=None`` keeps all concepts. Output is ordered by CUI.
    """
    if sty_filter is not None:
        lexicon = filter_by_semantic_types(lexicon, sty_filter)
    return [
        sort_synonyms(lexicon.concepts[cui], reference_languages, scale=scale, strict=strict)
        for cui in sorted(lexicon.concepts)
        if lexicon.concepts[cui].german()
    ]


# -- SSD file ---------------------------------------------------------------

SSD_HEADER = ("CUI", "RANK", "SURFACE", "H_DIST", "DEFINED")


def write_ssd(ssd: Iterable[SortedSynonymEntry], out: TextIO):
    out.write("\t".join(SSD_HEADER) + "\n")
    for entry in ssd:
        for rank, s in enumerate(entry.ranked, 1):
            h = repr(s.h_dist) if s.defined else ""
            out.write(f"{entry.cui}\t{rank}\t{s.surface}\t{h}\t{'true' if s.defined else 'false'}\n")


def read_ssd(lines: Iterable[str]) -> list[SortedSynonymEntry]:
    """Inverse of :func:`write_ssd`; mention sources are not preserved."""
    rows: dict[str, list[tuple[int, ScoredMention]]] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line or (lineno == 1 and line.split("\t")[0] == "CUI"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValidationError(f"SSD line {lineno}: expected 5 fields")
        cui, rank, surface, h, defined = parts
        if defined not in ("true", "false"):
            raise ValidationError(f"SSD line {lineno}: DEFINED must be true or false")
        is_defined = defined == "true"
        try:
            score = float(h) if is_defined else math.inf
            rank_no = int(rank)
        except ValueError:
            raise ValidationError(f"SSD line {lineno}: bad number") from None
        mention = Mention(surface, GERMAN, Source.UMLS)
        rows.setdefault(cui, []).append((rank_no, ScoredMention(mention, score, is_defined)))
    return [
        SortedSynonymEntry(cui, tuple(s for _, s in sorted(items, key=lambda t: t[0])))
        for cui, items in sorted(rows.items())
    ]


# -- manual evaluation sheets ----------------------------------------------

LOWEST = "lowest"
PAIRS = "pairs"
_MODE_ALIASES = {
    "lowest": LOWEST, "lowest-only": LOWEST,
    "pairs": PAIRS, "lowest-vs-highest": PAIRS,
}
LOWEST_HEADER = ("cui", "mention", "h_dist", "definition_1", "definition_2")
PAIRS_HEADER = ("cui", "lowest", "lowest_h_dist", "highest", "highest_h_dist", "gap", "judgment")


@dataclass
class EvaluationSheet:
    """Rows to be judged by hand.

    In ``lowest`` sheets, ``definition_1``/``definition_2`` take yes/no
    (is the mention technical under each definition). In ``pairs`` sheets,
    ``judgment`` states whether the highest-scored mention is EASIER,
    EQUAL or HARDER than the lowest-scored one.
    """

    mode: str
    rows: list[dict[str, str]]

    @property
    def header(self) -> tuple[str, ...]:
        return LOWEST_HEADER if self.mode == LOWEST else PAIRS_HEADER

    def write_csv(self, out: TextIO):
        writer = csv.DictWriter(out, fieldnames=self.header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)


def normalize_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValidationError(f"unknown sampling mode {mode!r}") from None


def _fmt(h: float) -> str:
    return f"{h:.2f}"


def sample_for_manual_eval(
    ssd: Sequence[SortedSynonymEntry], n: int, mode: str = PAIRS, seed: int = 0
) -> EvaluationSheet:
    """Draw *n* concepts at random for manual judgment.

    ``lowest`` mode draws from concepts with a defined score and lists the
    lowest-scored mention; ``pairs`` mode draws from concepts with at least
    two scored mentions and lists both extremes with their absolute gap.
    Rows are ordered by CUI.
    """
    mode = normalize_mode(mode)
    need = 1 if mode == LOWEST else 2
    population = sorted((e for e in ssd if len(e.defined()) >= need), key=lambda e: e.cui)
    if n < 0 or n > len(population):
        raise ValidationError(f"cannot sample {n} of {len(population)} eligible concepts")
    chosen = sorted(random.Random(seed).sample(population, n), key=lambda e: e.cui)
    rows = []
    for entry in chosen:
        lo, hi = entry.lowest(), entry.highest()
        if mode == LOWEST:
            rows.append({"cui": entry.cui, "mention": lo.surface, "h_dist": _fmt(lo.h_dist),
                         "definition_1": "", "definition_2": ""})
        else:
            rows.append({
                "cui": entry.cui,
                "lowest": lo.surface, "lowest_h_dist": _fmt(lo.h_dist),
                "highest": hi.surface, "highest_h_dist": _fmt(hi.h_dist),
                "gap": _fmt(abs(hi.h_dist - lo.h_dist)),
                "judgment": "",
            })
    return EvaluationSheet(mode, rows)
