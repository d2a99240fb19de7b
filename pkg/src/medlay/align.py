"""Merge Wiktionary synonyms into a UMLS lexicon (the WUMLS construction).

An entry is aligned when its case-folded headword occurs among the German
mentions of exactly one concept; that concept then receives the headword
and every synonym as Wiktionary-sourced German mentions.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Iterable

from medlay.lexicon import GERMAN, Lexicon, Mention, Provenance, Source, case_fold, wik_cui
from medlay.wiktionary import WiktionaryEntry


@dataclass
class AlignmentReport:
    aligned_entries: int = 0
    extended_cuis: int = 0
    added_mentions: int = 0
    ambiguous_entries: int = 0
    unmatched_entries: int = 0

    @property
    def total_entries(self) -> int:
        return self.aligned_entries + self.ambiguous_entries + self.unmatched_entries

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def german_lookup(lexicon: Lexicon) -> dict[str, set[str]]:
    """Folded German surface -> CUIs containing it."""
    table: dict[str, set[str]] = defaultdict(set)
    for cui, m in lexicon.mentions(GERMAN):
        table[m.folded].add(cui)
    return table


def match_cuis(entry: WiktionaryEntry, lookup: dict[str, set[str]], use_synonyms=False) -> set[str]:
    keys = [case_fold(entry.headword)]
    if use_synonyms:
        keys += [case_fold(s) for s in entry.synonyms]
    found: set[str] = set()
    for key in keys:
        found |= lookup.get(key, set())
    return found


def align(
    entries: Iterable[WiktionaryEntry],
    umls: Lexicon,
    *,
    use_synonyms: bool = False,
    standalone: bool = False,
) -> tuple[Lexicon, AlignmentReport]:
    """Return a new WUMLS lexicon and the alignment counters.

    The CUI lookup is computed once from the *input* lexicon and entries
    are processed in headword order, so the result does not depend on the
    order of *entries*.
    Synonyms already present (any source) in the target concept are not
    added twice. With ``standalone=True`` unmatched entries become
    ``WIK:`` concepts of their own.
    """
    lookup = german_lookup(umls)
    wumls = umls.copy(provenance=Provenance.WUMLS)
    report = AlignmentReport()
    extended: set[str] = set()

    for entry in sorted(entries, key=lambda e: (case_fold(e.headword), e.headword, e.synonyms)):
        cuis = match_cuis(entry, lookup, use_synonyms)
        if len(cuis) == 1:
            report.aligned_entries += 1
            (cui,) = cuis
            target = cui
        elif cuis:
            report.ambiguous_entries += 1
            continue
        else:
            report.unmatched_entries += 1
            if not standalone:
                continue
            target = wik_cui(entry.headword)
            wumls.add_concept(target)
        concept = wumls.concepts[target]
        added = 0
        for surface in [entry.headword, *entry.synonyms]:
            mention = Mention(surface, GERMAN, Source.WIKTIONARY)
            if concept.has_folded(GERMAN, mention.folded):
                continue
            wumls.add_mention(target, mention)
            added += 1
        report.added_mentions += added
        if added and target in umls.concepts:
            extended.add(target)

    report.extended_cuis = len(extended)
    return wumls, report
