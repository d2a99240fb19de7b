"""Domain types and the in-memory lexicon container.

A :class:`Lexicon` maps concept identifiers (CUIs) to :class:`Concept`
records. Each concept holds per-language lists of :class:`Mention` objects.
Mentions are deduplicated on ``(language, folded, source)``.

Snapshot format (UTF-8, one mention per line)::

    #provenance<TAB>UMLS
    CUI<TAB>LANG<TAB>SOURCE<TAB>SURFACE

with a companion semantic-type file of ``CUI<TAB>STY`` lines.
"""
from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from medlay.errors import UnknownConceptError, ValidationError
from medlay.stemming import stem as german_stem

GERMAN = "GER"
ENGLISH = "ENG"
FRENCH = "FRE"

_LANG_RE = re.compile(r"^[A-Z]{3}$")


class Source(str, Enum):
    UMLS = "UMLS"
    WIKTIONARY = "WIKTIONARY"


class Provenance(str, Enum):
    UMLS = "UMLS"
    WUMLS = "WUMLS"


def case_fold(s: str) -> str:
    """NFC-normalize and lowercase. Idempotent; diacritics are kept."""
    # lower() rather than casefold(): casefold maps ß to ss, which would
    # merge spelling variants the lexicon keeps apart.
    return unicodedata.normalize("NFC", unicodedata.normalize("NFC", s).lower())


def check_language(code: str) -> str:
    if not isinstance(code, str) or not _LANG_RE.match(code):
        raise ValidationError(f"invalid language code {code!r}")
    return code


def wik_cui(headword: str) -> str:
    """Stable identifier for a Wiktionary-only concept."""
    digest = hashlib.sha1(case_fold(headword).encode("utf-8")).hexdigest()
    return "WIK:" + digest[:12]


@dataclass(frozen=True)
class Mention:
    """One surface form in one language from one source."""

    surface: str
    language: str
    source: Source = Source.UMLS
    folded: str = field(init=False, compare=False)
    stem: str = field(init=False, compare=False)

    def __post_init__(self):
        surface = unicodedata.normalize("NFC", self.surface.strip())
        if not surface:
            raise ValidationError("mention surface is empty")
        if any(c in surface for c in "\t\r\n"):
            raise ValidationError(f"mention surface contains a control separator: {surface!r}")
        check_language(self.language)
        folded = case_fold(surface)
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "source", Source(self.source))
        object.__setattr__(self, "folded", folded)
        object.__setattr__(
            self, "stem", german_stem(folded) if self.language == GERMAN else ""
        )

    @property
    def key(self) -> tuple[str, str, Source]:
        return (self.language, self.folded, self.source)


@dataclass
class Concept:
    cui: str
    semantic_types: set[str] = field(default_factory=set)
    mentions: dict[str, list[Mention]] = field(default_factory=dict)

    def german(self) -> list[Mention]:
        return self.mentions.get(GERMAN, [])

    def in_language(self, language: str) -> list[Mention]:
        return self.mentions.get(language, [])

    def has_folded(self, language: str, folded: str) -> bool:
        return any(m.folded == folded for m in self.mentions.get(language, ()))

    def mention_count(self) -> int:
        return sum(len(ms) for ms in self.mentions.values())

    def copy(self) -> "Concept":
        return Concept(
            self.cui,
            set(self.semantic_types),
            {lang: list(ms) for lang, ms in self.mentions.items()},
        )


@dataclass
class Lexicon:
    concepts: dict[str, Concept] = field(default_factory=dict)
    provenance: Provenance = Provenance.UMLS

    def __len__(self):
        return len(self.concepts)

    def __contains__(self, cui):
        return cui in self.concepts

    def __iter__(self) -> Iterator[Concept]:
        return iter(self.concepts.values())

    def __getitem__(self, cui) -> Concept:
        return self.concepts[cui]

    def add_concept(self, cui: str, semantic_types: Iterable[str] = ()) -> Concept:
        """Return the concept for *cui*, creating it if needed."""
        if not cui or any(c in cui for c in "\t\r\n|"):
            raise ValidationError(f"invalid concept identifier {cui!r}")
        concept = self.concepts.get(cui)
        if concept is None:
            concept = self.concepts[cui] = Concept(cui)
        concept.semantic_types.update(semantic_types)
        return concept

    def add_mention(self, cui: str, mention: Mention) -> bool:
        """Append *mention* to concept *cui*.

        Returns False when a mention with the same language, folded form
        and source is already present (the call is then a no-op).
        """
        concept = self.concepts.get(cui)
        if concept is None:
            raise UnknownConceptError(f"unknown concept {cui!r}")
        bucket = concept.mentions.setdefault(mention.language, [])
        if any(m.key == mention.key for m in bucket):
            return False
        bucket.append(mention)
        return True

    def mentions(self, language: str | None = None) -> Iterator[tuple[str, Mention]]:
        for cui, concept in self.concepts.items():
            for lang, ms in concept.mentions.items():
                if language is None or lang == language:
                    for m in ms:
                        yield cui, m

    def mention_count(self, language: str | None = None) -> int:
        return sum(1 for _ in self.mentions(language))

    def copy(self, provenance: Provenance | None = None) -> "Lexicon":
        return Lexicon(
            {cui: c.copy() for cui, c in self.concepts.items()},
            self.provenance if provenance is None else provenance,
        )


def merge(lexicons: Iterable[Lexicon]) -> Lexicon:
    """Union of several lexicons; the result does not depend on input order."""
    lexicons = list(lexicons)
    provenance = (
        Provenance.WUMLS
        if any(lx.provenance is Provenance.WUMLS for lx in lexicons)
        else Provenance.UMLS
    )
    collected: dict[str, dict[tuple, str]] = {}
    stys: dict[str, set[str]] = {}
    for lx in lexicons:
        for concept in lx:
            stys.setdefault(concept.cui, set()).update(concept.semantic_types)
            seen = collected.setdefault(concept.cui, {})
            for ms in concept.mentions.values():
                for m in ms:
                    # keep the smallest surface among case variants
                    prev = seen.get(m.key)
                    if prev is None or m.surface < prev:
                        seen[m.key] = m.surface
    out = Lexicon(provenance=provenance)
    for cui in sorted(stys):
        out.add_concept(cui, stys[cui])
        for (lang, folded, source), surface in sorted(
            collected[cui].items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value)
        ):
            out.add_mention(cui, Mention(surface, lang, source))
    return out


# -- snapshot I/O -----------------------------------------------------------


def sty_path(path) -> Path:
    """Companion semantic-type file for a snapshot path: ``x.tsv`` -> ``x.sty.tsv``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.sty{path.suffix or '.tsv'}")


def write_snapshot(lexicon: Lexicon, mentions_out: TextIO, sty_out: TextIO | None = None):
    mentions_out.write(f"#provenance\t{lexicon.provenance.value}\n")
    for cui in sorted(lexicon.concepts):
        concept = lexicon.concepts[cui]
        for lang in sorted(concept.mentions):
            for m in concept.mentions[lang]:
                mentions_out.write(f"{cui}\t{lang}\t{m.source.value}\t{m.surface}\n")
    if sty_out is not None:
        for cui in sorted(lexicon.concepts):
            for sty in sorted(lexicon.concepts[cui].semantic_types):
                sty_out.write(f"{cui}\t{sty}\n")


def read_snapshot(mention_lines: Iterable[str], sty_lines: Iterable[str] = ()) -> Lexicon:
    lexicon = Lexicon()
    for lineno, line in enumerate(mention_lines, 1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("\t")
            if key == "provenance":
                try:
                    lexicon.provenance = Provenance(value)
                except ValueError:
                    raise ValidationError(f"line {lineno}: unknown provenance {value!r}")
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValidationError(f"line {lineno}: expected 4 tab-separated fields")
        cui, lang, source, surface = parts
        try:
            mention = Mention(surface, lang, Source(source))
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        lexicon.add_concept(cui)
        lexicon.add_mention(cui, mention)
    for lineno, line in enumerate(sty_lines, 1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValidationError(f"semantic-type line {lineno}: expected CUI<TAB>STY")
        lexicon.add_concept(parts[0], [parts[1]])
    return lexicon


def save_lexicon(lexicon: Lexicon, path) -> tuple[Path, Path]:
    path = Path(path)
    companion = sty_path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh, open(
        companion, "w", encoding="utf-8", newline="\n"
    ) as sfh:
        write_snapshot(lexicon, fh, sfh)
    return path, companion


def load_lexicon(path) -> Lexicon:
    path = Path(path)
    companion = sty_path(path)
    with open(path, encoding="utf-8") as fh:
        mention_lines = fh.readlines()
    sty_lines: list[str] = []
    if companion.exists():
        with open(companion, encoding="utf-8") as sfh:
            sty_lines = sfh.readlines()
    return read_snapshot(mention_lines, sty_lines)
