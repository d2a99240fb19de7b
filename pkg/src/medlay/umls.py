"""Parse UMLS-style concept (MRCONSO) and semantic-type (MRSTY) tables."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from medlay.errors import CorruptInputError, ValidationError
from medlay.lexicon import ENGLISH, FRENCH, GERMAN, Lexicon, Mention, Source, check_language

log = logging.getLogger(__name__)

DEFAULT_SEMANTIC_TYPES = frozenset(
    {
        "Anatomical Abnormality",
        "Anatomical Structure",
        "Body Location or Region",
        "Body Part, Organ, or Organ Component",
        "Body Space or Junction",
        "Disease or Syndrome",
        "Injury or Poisoning",
        "Mental or Behavioral Dysfunction",
        "Sign or Symptom",
    }
)

# MRCONSO.RRF: CUI|LAT|TS|LUI|STT|SUI|ISPREF|AUI|SAUI|SCUI|SDUI|SAB|TTY|CODE|STR|SRL|SUPPRESS|CVF
DEFAULT_COLUMNS = {"cui": 0, "lang": 1, "str": 14, "suppress": 16}
SUPPRESSED_FLAGS = frozenset({"O", "E", "Y"})


@dataclass
class IngestConfig:
    languages: frozenset[str] = frozenset({GERMAN, ENGLISH, FRENCH})
    semantic_types: frozenset[str] = DEFAULT_SEMANTIC_TYPES
    min_mentions: int = 1
    columns: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_COLUMNS))

    def __post_init__(self):
        self.languages = frozenset(check_language(code) for code in self.languages)
        if GERMAN not in self.languages:
            raise ValidationError("ingest languages must include GER")
        if self.min_mentions < 1:
            raise ValidationError("min_mentions must be >= 1")
        cols = dict(DEFAULT_COLUMNS)
        cols.update(self.columns)
        for name in ("cui", "lang", "str"):
            if cols.get(name) is None or cols[name] < 0:
                raise ValidationError(f"missing column position for {name!r}")
        self.columns = cols


def parse_columns(text: str) -> dict[str, int | None]:
    """Parse a ``cui=0,lang=1,str=14`` override string.

    ``suppress=`` with an empty value disables the suppress-flag column.
    """
    cols: dict[str, int | None] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in DEFAULT_COLUMNS:
            raise ValidationError(f"bad column override {item!r}")
        value = value.strip()
        if not value and name == "suppress":
            cols[name] = None
            continue
        try:
            cols[name] = int(value)
        except ValueError:
            raise ValidationError(f"bad column position in {item!r}") from None
    return cols


@dataclass
class IngestStats:
    lines: int = 0
    malformed: int = 0
    suppressed: int = 0
    filtered_language: int = 0
    duplicates: int = 0
    unknown_cuis: int = 0


def parse_concept_table(
    lines: Iterable[str], config: IngestConfig | None = None, stats: IngestStats | None = None
) -> Lexicon:
    """Build a lexicon from pipe-delimited concept-table lines.

    Malformed lines are counted and skipped. More than half of the
    non-blank lines being malformed raises :class:`CorruptInputError`.
    """
    config = config or IngestConfig()
    stats = stats if stats is not None else IngestStats()
    cols = config.columns
    c_cui, c_lang, c_str = cols["cui"], cols["lang"], cols["str"]
    c_sup = cols.get("suppress")
    needed = max(c_cui, c_lang, c_str) + 1
    lexicon = Lexicon()
    for line in lines:
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        stats.lines += 1
        fields = line.split("|")
        if len(fields) < needed:
            stats.malformed += 1
            continue
        cui, lang, surface = fields[c_cui].strip(), fields[c_lang].strip(), fields[c_str]
        if c_sup is not None and c_sup < len(fields) and fields[c_sup].strip() in SUPPRESSED_FLAGS:
            stats.suppressed += 1
            continue
        if lang not in config.languages:
            if not cui or not lang:
                stats.malformed += 1
            else:
                stats.filtered_language += 1
            continue
        try:
            mention = Mention(surface, lang, Source.UMLS)
            concept_cui = lexicon.add_concept(cui).cui
        except ValidationError:
            stats.malformed += 1
            continue
        if not lexicon.add_mention(concept_cui, mention):
            stats.duplicates += 1
    if stats.lines and stats.malformed * 2 > stats.lines:
        raise CorruptInputError(
            f"{stats.malformed} of {stats.lines} concept-table lines are malformed"
        )
    if config.min_mentions > 1:
        for cui in [c.cui for c in lexicon if len(c.german()) < config.min_mentions]:
            del lexicon.concepts[cui]
    log.debug("parsed concept table: %s", stats)
    return lexicon


def attach_semantic_types(
    lexicon: Lexicon,
    lines: Iterable[str],
    stats: IngestStats | None = None,
    sty_column: int | None = None,
) -> Lexicon:
    """Add semantic types from ``CUI|STY`` lines to matching concepts.

    With ``sty_column=None`` two-field lines use field 1 and longer lines
    are read as MRSTY rows (``CUI|TUI|STN|STY|...``, field 3).
    """
    stats = stats if stats is not None else IngestStats()
    for line in lines:
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        fields = line.split("|")
        col = sty_column
        if col is None:
            col = 1 if len(fields) <= 2 or (len(fields) == 3 and not fields[2]) else 3
        if len(fields) <= col or not fields[col].strip():
            stats.malformed += 1
            continue
        concept = lexicon.concepts.get(fields[0].strip())
        if concept is None:
            stats.unknown_cuis += 1
            continue
        concept.semantic_types.add(fields[col].strip())
    return lexicon


def filter_by_semantic_types(lexicon: Lexicon, sty_set: Iterable[str]) -> Lexicon:
    """Concepts whose semantic types intersect *sty_set*, as a new lexicon."""
    wanted = set(sty_set)
    out = Lexicon(provenance=lexicon.provenance)
    for cui, concept in lexicon.concepts.items():
        if concept.semantic_types & wanted:
            out.concepts[cui] = concept.copy()
    return out
