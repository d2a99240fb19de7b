"""Exact and stemmed lookup of German terms, plus h_dist-based simplification.

Index file format (UTF-8, sorted, one key/CUI pair per line)::

    KIND<TAB>KEY<TAB>CUI

where KIND is ``EXACT`` (folded surface) or ``STEM`` (stemmed folded
surface). The file is rebuildable from the lexicon snapshot.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence, TextIO

from medlay.errors import ValidationError
from medlay.lexicon import GERMAN, Lexicon, case_fold
from medlay.stemming import stem
from medlay.technicality import ScoredMention, SortedSynonymEntry


class MatchKind(str, Enum):
    EXACT = "EXACT"
    STEM = "STEM"


@dataclass
class MentionIndex:
    exact: dict[str, frozenset[str]] = field(default_factory=dict)
    stemmed: dict[str, frozenset[str]] = field(default_factory=dict)
    lexicon_ref: Lexicon | None = None

    def __len__(self):
        return len(self.exact)


@dataclass(frozen=True)
class NormalizationResult:
    query: str
    matches: tuple[tuple[str, MatchKind], ...] = ()

    @property
    def found(self) -> bool:
        return bool(self.matches)

    @property
    def cuis(self) -> list[str]:
        return [cui for cui, _ in self.matches]

    @property
    def kind(self) -> MatchKind | None:
        return self.matches[0][1] if self.matches else None


def build_index(lexicon: Lexicon) -> MentionIndex:
    exact: dict[str, set[str]] = defaultdict(set)
    stemmed: dict[str, set[str]] = defaultdict(set)
    for cui, m in lexicon.mentions(GERMAN):
        exact[m.folded].add(cui)
        if m.stem:
            stemmed[m.stem].add(cui)
    return MentionIndex(
        {k: frozenset(v) for k, v in exact.items()},
        {k: frozenset(v) for k, v in stemmed.items()},
        lexicon,
    )


def normalize(index: MentionIndex, query: str, use_stem: bool = True) -> NormalizationResult:
    """Resolve *query* to concepts: exact folded lookup, then stem fallback."""
    folded = case_fold(query.strip())
    if not folded:
        return NormalizationResult(query)
    hits = index.exact.get(folded)
    if hits:
        return NormalizationResult(query, tuple((c, MatchKind.EXACT) for c in sorted(hits)))
    if use_stem:
        hits = index.stemmed.get(stem(folded))
        if hits:
            return NormalizationResult(query, tuple((c, MatchKind.STEM) for c in sorted(hits)))
    return NormalizationResult(query)


def _ssd_map(ssd) -> Mapping[str, SortedSynonymEntry]:
    if isinstance(ssd, Mapping):
        return ssd
    return {e.cui: e for e in ssd}


def matched_mention(entry: SortedSynonymEntry, query: str, kind: MatchKind) -> ScoredMention | None:
    """The ranked mention a query hit in *entry*: lowest score among the
    mentions sharing its folded form (EXACT) or its stem (STEM)."""
    folded = case_fold(query.strip())
    if kind is MatchKind.EXACT:
        candidates = [s for s in entry.ranked if s.mention.folded == folded]
    else:
        key = stem(folded)
        candidates = [s for s in entry.ranked if stem(s.mention.folded) == key]
    return candidates[0] if candidates else None


def simplify(
    index: MentionIndex,
    ssd: Sequence[SortedSynonymEntry] | Mapping[str, SortedSynonymEntry],
    query: str,
    use_stem: bool = True,
) -> list[tuple[str, float]]:
    """Synonyms scoring strictly above the matched mention, easiest first."""
    by_cui = _ssd_map(ssd)
    result = normalize(index, query, use_stem)
    best: dict[str, tuple[str, float]] = {}
    for cui, kind in result.matches:
        entry = by_cui.get(cui)
        if entry is None:
            continue
        hit = matched_mention(entry, query, kind)
        if hit is None or not hit.defined:
            continue
        for s in entry.ranked:
            if s.defined and s.h_dist > hit.h_dist:
                prev = best.get(s.mention.folded)
                if prev is None or s.h_dist > prev[1]:
                    best[s.mention.folded] = (s.surface, s.h_dist)
    return sorted(best.values(), key=lambda t: (-t[1], case_fold(t[0]), t[0]))


# -- index file -------------------------------------------------------------


def write_index(index: MentionIndex, out: TextIO):
    for kind, table in ((MatchKind.EXACT, index.exact), (MatchKind.STEM, index.stemmed)):
        for key in sorted(table):
            for cui in sorted(table[key]):
                out.write(f"{kind.value}\t{key}\t{cui}\n")


def read_index(lines: Iterable[str]) -> MentionIndex:
    exact: dict[str, set[str]] = defaultdict(set)
    stemmed: dict[str, set[str]] = defaultdict(set)
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[0] not in ("EXACT", "STEM"):
            raise ValidationError(f"index line {lineno}: expected KIND<TAB>KEY<TAB>CUI")
        (exact if parts[0] == "EXACT" else stemmed)[parts[1]].add(parts[2])
    return MentionIndex(
        {k: frozenset(v) for k, v in exact.items()},
        {k: frozenset(v) for k, v in stemmed.items()},
    )
