"""
Scoring German synonyms by technicality
=======================================

Technical German terms tend to look like their English and French
counterparts. The harmonized distance measures that resemblance, so low
scores point to technical terms and high scores to lay ones.
"""
from pathlib import Path

from medlay.lexicon import GERMAN, Mention
from medlay.technicality import build_ssd, harmonized_distance, levenshtein
from medlay.umls import IngestConfig, attach_semantic_types, parse_concept_table

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# the classic example: three edits to each reference, eight letters
print(levenshtein("karzinom", "carcinoma"), levenshtein("karzinom", "carcinome"))
print(harmonized_distance(Mention("Karzinom", GERMAN), ["carcinoma"], ["carcinome"]).h_dist)

with open(FIX / "umls_concepts.rrf", encoding="utf-8") as fh:
    umls = parse_concept_table(fh, IngestConfig())
with open(FIX / "umls_sty.rrf", encoding="utf-8") as fh:
    attach_semantic_types(umls, fh)

# rank the synonyms of every concept in the nine default semantic types
for entry in build_ssd(umls):
    ranked = ", ".join(
        f"{s.surface} ({s.h_dist:.1f})" if s.defined else f"{s.surface} (-)" for s in entry.ranked
    )
    print(entry.cui, ranked)
