from pathlib import Path

import pytest

from medlay.align import align
from medlay.corpus import read_corpus
from medlay.normalize import build_index
from medlay.technicality import build_ssd
from medlay.umls import IngestConfig, IngestStats, attach_semantic_types, parse_concept_table
from medlay.wiktionary import DumpStats, filter_medical, open_dump, parse_dump

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def load_umls_fixture():
    stats = IngestStats()
    with open(FIXTURES / "umls_concepts.rrf", encoding="utf-8") as fh:
        lex = parse_concept_table(fh, IngestConfig(), stats)
    with open(FIXTURES / "umls_sty.rrf", encoding="utf-8") as fh:
        attach_semantic_types(lex, fh, stats)
    return lex, stats


def load_wiktionary_fixture():
    stats = DumpStats()
    with open_dump(FIXTURES / "dewiktionary_fixture.xml") as fh:
        entries = list(parse_dump(fh, stats))
    return entries, stats


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def umls():
    return load_umls_fixture()[0]


@pytest.fixture(scope="session")
def wiktionary_entries():
    return load_wiktionary_fixture()[0]


@pytest.fixture(scope="session")
def medical_entries(wiktionary_entries):
    return filter_medical(wiktionary_entries)


@pytest.fixture
def wumls(umls, medical_entries):
    return align(medical_entries, umls)[0]


@pytest.fixture(scope="session")
def corpus_docs():
    return read_corpus(FIXTURES / "corpus")


@pytest.fixture
def umls_index(umls):
    return build_index(umls)


@pytest.fixture
def umls_ssd(umls):
    return build_ssd(umls)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
