"""
Coverage experiments on an annotated forum corpus
=================================================

The corpus marks lay and technical expressions in patient forum posts.
Experiment 1 normalizes the technical ones and looks for easier synonyms.
Experiment 2 compares how many lay expressions UMLS and WUMLS can resolve.
"""
from pathlib import Path

from medlay.align import align
from medlay.corpus import corpus_stats, read_corpus
from medlay.evaluation import run_experiment_1, run_experiment_2
from medlay.normalize import build_index
from medlay.technicality import build_ssd
from medlay.umls import IngestConfig, attach_semantic_types, parse_concept_table
from medlay.wiktionary import filter_medical, open_dump, parse_dump

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

with open(FIX / "umls_concepts.rrf", encoding="utf-8") as fh:
    umls = parse_concept_table(fh, IngestConfig())
with open(FIX / "umls_sty.rrf", encoding="utf-8") as fh:
    attach_semantic_types(umls, fh)
with open_dump(FIX / "dewiktionary_fixture.xml") as fh:
    wumls, _ = align(filter_medical(parse_dump(fh)), umls)

docs = read_corpus(FIX / "corpus")
print(corpus_stats(docs))

e1 = run_experiment_1(docs, build_index(umls), build_ssd(umls))
print(f"technical terms normalized: {e1.normalized_pct}%, with an easier synonym: {e1.easier_pct}%")

rep_u, rep_w = run_experiment_2(docs, build_index(umls), build_index(wumls))
print(f"lay terms normalized: UMLS {rep_u.normalized_pct}%, WUMLS {rep_w.normalized_pct}%")
for t in rep_w.terms:
    print(f"  {t.term:32} {','.join(t.cuis) or '-'}")
