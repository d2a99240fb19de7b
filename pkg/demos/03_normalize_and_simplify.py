"""
Normalizing terms and finding easier synonyms
=============================================

Terms are looked up by their folded form first and by their stem second.
A hit can then be swapped for any synonym of the same concept that scores
as less technical.
"""
from pathlib import Path

from medlay.normalize import build_index, normalize, simplify
from medlay.technicality import build_ssd
from medlay.umls import IngestConfig, attach_semantic_types, parse_concept_table

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

with open(FIX / "umls_concepts.rrf", encoding="utf-8") as fh:
    umls = parse_concept_table(fh, IngestConfig())
with open(FIX / "umls_sty.rrf", encoding="utf-8") as fh:
    attach_semantic_types(umls, fh)
index = build_index(umls)
ssd = build_ssd(umls)

for query in ["Hexenschuss", "Hexenschusses", "Stein", "Bauchweh"]:
    res = normalize(index, query)
    print(f"{query:15} found={res.found} cuis={res.cuis} kind={res.kind.value if res.kind else '-'}")

# easier synonyms come back easiest first
for query in ["Pyelonephritis", "Diarrhoe", "Hämaturie"]:
    print(query, "->", [s for s, _ in simplify(index, ssd, query)])
