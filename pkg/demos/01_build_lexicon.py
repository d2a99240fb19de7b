"""
Building UMLS and WUMLS from fixture files
==========================================

Ingest a small concept table, attach semantic types, read a German
Wiktionary dump and merge its medical entries into the UMLS concepts.
"""
from pathlib import Path

from medlay.align import align
from medlay.umls import IngestConfig, IngestStats, attach_semantic_types, parse_concept_table
from medlay.wiktionary import DumpStats, filter_medical, open_dump, parse_dump, summarize

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# the concept table uses the usual 18-field pipe layout; only German,
# English and French rows are kept
stats = IngestStats()
with open(FIX / "umls_concepts.rrf", encoding="utf-8") as fh:
    umls = parse_concept_table(fh, IngestConfig(), stats)
with open(FIX / "umls_sty.rrf", encoding="utf-8") as fh:
    attach_semantic_types(umls, fh, stats)
print(f"{len(umls)} concepts, {umls.mention_count('GER')} German mentions")
print("skipped:", stats)

# Wiktionary pages are streamed; only the German section is read
dstats = DumpStats()
with open_dump(FIX / "dewiktionary_fixture.xml") as fh:
    entries = list(parse_dump(fh, dstats))
medical = filter_medical(entries)
print(dstats)
print("medical subset:", summarize(medical))

# an entry is merged when its headword names exactly one concept
wumls, report = align(medical, umls)
print(report)
print("Lumbago in WUMLS:", [m.surface for m in wumls["C0024031"].german()])
