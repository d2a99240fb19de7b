"""Streaming reader for German Wiktionary XML dumps.

Only the four fields needed downstream are extracted from the German
section of each page: headword, first gloss, synonyms and categories.
"""
from __future__ import annotations

import bz2
import gzip
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, TextIO
from xml.parsers import expat

from medlay.errors import WiktionaryParseError
from medlay.lexicon import case_fold

MEDICAL_CATEGORIES = frozenset(
    {
        "Medicine", "Medizin",
        "Pharmacy", "Pharmazie",
        "Pharmacology", "Pharmakologie",
        "Anatomy", "Anatomie",
        "Psychiatry", "Psychiatrie",
        "Psychology", "Psychologie",
        "Physiology", "Physiologie",
        "Ophthalmology", "Ophthalmologie",
        "Pathology", "Pathologie",
        "Dentistry", "Zahnmedizin",
        "Gynaecology", "Gynäkologie",
        "Dermatology", "Dermatologie",
    }
)
DEFAULT_PATTERN = "krank"


@dataclass
class WiktionaryEntry:
    headword: str
    definition: str = ""
    synonyms: list[str] = field(default_factory=list)
    categories: set[str] = field(default_factory=set)
    # full page wikitext; not serialized
    raw: str = field(default="", repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "headword": self.headword,
                "definition": self.definition,
                "synonyms": self.synonyms,
                "categories": sorted(self.categories),
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "WiktionaryEntry":
        obj = json.loads(line)
        return cls(
            obj["headword"],
            obj.get("definition", ""),
            list(obj.get("synonyms", [])),
            set(obj.get("categories", [])),
        )


@dataclass
class DumpStats:
    pages: int = 0
    other_namespace: int = 0
    no_german_section: int = 0
    unparseable: int = 0
    entries: int = 0


# -- XML layer --------------------------------------------------------------


class _PageCollector:
    def __init__(self):
        self.done: list[dict] = []
        self.page: dict | None = None
        self.field: str | None = None
        self.buf: list[str] = []

    def start(self, name, attrs):
        local = name.rpartition("}")[2]
        if local == "page":
            self.page = {"title": "", "ns": None, "text": ""}
        elif self.page is not None and local in ("title", "ns", "text"):
            self.field = local
            self.buf = []

    def end(self, name):
        local = name.rpartition("}")[2]
        if self.page is None:
            return
        if local == self.field:
            self.page[local] = "".join(self.buf)
            self.field = None
        elif local == "page":
            self.done.append(self.page)
            self.page = None

    def chars(self, data):
        if self.field is not None:
            self.buf.append(data)

    def drain(self):
        pages, self.done = self.done, []
        return pages


def open_dump(path) -> IO[bytes]:
    """Open a dump file, decompressing ``.bz2``/``.gz`` transparently."""
    path = Path(path)
    if path.suffix == ".bz2":
        return bz2.open(path, "rb")
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def iter_pages(stream: IO, chunk_size: int = 1 << 16) -> Iterator[dict]:
    """Yield ``{"title", "ns", "text"}`` dicts one page at a time."""
    parser = expat.ParserCreate(namespace_separator="}")
    parser.buffer_text = True
    collector = _PageCollector()
    parser.StartElementHandler = collector.start
    parser.EndElementHandler = collector.end
    parser.CharacterDataHandler = collector.chars
    while True:
        chunk = stream.read(chunk_size)
        if isinstance(chunk, str):
            chunk = chunk.encode("utf-8")
        try:
            parser.Parse(chunk, not chunk)
        except expat.ExpatError as exc:
            offset = parser.ErrorByteIndex
            raise WiktionaryParseError(
                f"malformed XML at byte offset {offset}: {expat.ErrorString(exc.code)}",
                byte_offset=offset,
            ) from None
        yield from collector.drain()
        if not chunk:
            break


# -- wikitext layer ---------------------------------------------------------

_LEVEL2 = re.compile(r"^==(?!=)(.*?)(?<!=)==\s*$", re.M)
_GERMAN = re.compile(r"\{\{\s*Sprache\s*\|\s*Deutsch\s*\}\}")
_BLOCK_MARKER = re.compile(r"^\{\{\s*([^{}|]+?)\s*\}\}\s*$")
_COMMENT = re.compile(r"<!--.*?-->", re.S)
_REF = re.compile(r"<ref[^>/]*>.*?</ref>|<ref[^>]*/>", re.S)
_TAG = re.compile(r"<[^>]+>")
_SENSE = re.compile(r"(?<!\[)\[\s*(?:\d+[a-z]?(?:\s*[,–—-]\s*\d+[a-z]?)*)?\s*\](?!\])")
_TEMPLATE = re.compile(r"\{\{[^{}]*\}\}")
_CONTEXT_TEMPLATE = re.compile(r"\{\{\s*K\s*\|([^{}]*)\}\}")
_PIPED_LINK = re.compile(r"\[\[([^\[\]|]*)\|([^\[\]]*)\]\]")
_LINK = re.compile(r"\[\[([^\[\]]*)\]\]")
_CATEGORY_LINK = re.compile(r"\[\[\s*(?:Kategorie|Category)\s*:\s*([^\]|]+)(?:\|[^\]]*)?\]\]")
_FILE_LINK = re.compile(r"\[\[\s*(?:Datei|File|Bild|Image)\s*:[^\]]*\]\]")
_EMPHASIS = re.compile(r"'{2,}")
_WS = re.compile(r"\s+")


def german_section(text: str) -> str | None:
    """Wikitext of the German-language level-2 section, or None."""
    headings = list(_LEVEL2.finditer(text))
    for i, h in enumerate(headings):
        if _GERMAN.search(h.group(1)):
            end = headings[i + 1].start() if i + 1 < len(headings) else len(text)
            return text[h.end():end]
    return None


def _balanced(text: str) -> bool:
    return text.count("{{") == text.count("}}") and text.count("[[") == text.count("]]")


def _drop_templates(s: str) -> str:
    while True:
        stripped = _TEMPLATE.sub("", s)
        if stripped == s:
            return s
        s = stripped


def strip_markup(s: str) -> str:
    """Reduce a wikitext fragment to plain text."""
    s = _COMMENT.sub("", s)
    s = _REF.sub("", s)
    s = _TAG.sub("", s)
    s = _SENSE.sub("", s)
    s = _drop_templates(s)
    s = _CATEGORY_LINK.sub("", s)
    s = _FILE_LINK.sub("", s)
    s = _PIPED_LINK.sub(r"\2", s)
    s = _LINK.sub(r"\1", s)
    s = _EMPHASIS.sub("", s)
    s = _WS.sub(" ", s).strip()
    return s.lstrip(":;,. ").strip()


def block_lines(section: str, marker: str) -> list[str]:
    """Indented lines following every ``{{marker}}`` line in *section*."""
    out: list[str] = []
    lines = section.splitlines()
    i = 0
    while i < len(lines):
        m = _BLOCK_MARKER.match(lines[i].strip())
        if m and m.group(1) == marker:
            i += 1
            while i < len(lines) and lines[i].startswith(":"):
                out.append(lines[i])
                i += 1
            continue
        i += 1
    return out


def context_labels(fragment: str) -> set[str]:
    labels: set[str] = set()
    for m in _CONTEXT_TEMPLATE.finditer(fragment):
        for param in m.group(1).split("|"):
            param = param.strip()
            if param and "=" not in param:
                labels.add(param)
    return labels


def category_links(text: str) -> set[str]:
    return {m.group(1).strip() for m in _CATEGORY_LINK.finditer(text)}


def split_synonyms(lines: Iterable[str], headword: str) -> list[str]:
    head = case_fold(headword)
    seen = {head}
    out: list[str] = []
    for line in lines:
        text = _COMMENT.sub("", line.lstrip(":"))
        text = _REF.sub("", text)
        text = _SENSE.sub("", text)
        text = _drop_templates(text)
        for piece in re.split(r"[;,]", text):
            syn = strip_markup(piece).strip(" :.–—-")
            if not syn:
                continue
            key = case_fold(syn)
            if key in seen:
                continue
            seen.add(key)
            out.append(syn)
    return out


def parse_page(title: str, text: str, medical_labels: Iterable[str] = MEDICAL_CATEGORIES):
    """Extract an entry from one page's wikitext.

    Returns None when the page has no German section and raises
    ValueError when the German section's markup is unbalanced.
    """
    section = german_section(text)
    if section is None:
        return None
    if not _balanced(section):
        raise ValueError(f"unbalanced markup on page {title!r}")
    medical = {case_fold(x) for x in medical_labels}

    senses = block_lines(section, "Bedeutungen")
    definition = ""
    for line in senses:
        gloss = strip_markup(line)
        if not gloss:
            continue
        if not definition:
            definition = gloss
        if {case_fold(x) for x in context_labels(line)} & medical:
            definition = gloss
            break

    categories = context_labels(section) | category_links(text)
    synonyms = split_synonyms(block_lines(section, "Synonyme"), title)
    return WiktionaryEntry(title.strip(), definition, synonyms, categories, raw=text)


def parse_dump(
    stream: IO,
    stats: DumpStats | None = None,
    medical_labels: Iterable[str] = MEDICAL_CATEGORIES,
) -> Iterator[WiktionaryEntry]:
    """Yield one entry per main-namespace page that has a German section.

    The dump is read incrementally; memory use is bounded by the largest
    page, not by the dump size.
    """
    stats = stats if stats is not None else DumpStats()
    medical_labels = frozenset(medical_labels)
    for page in iter_pages(stream):
        stats.pages += 1
        ns = page["ns"]
        title = page["title"].strip()
        if (ns is not None and ns.strip() not in ("", "0")) or not title:
            stats.other_namespace += 1
            continue
        try:
            entry = parse_page(title, page["text"], medical_labels)
        except ValueError:
            stats.unparseable += 1
            continue
        if entry is None:
            stats.no_german_section += 1
            continue
        stats.entries += 1
        yield entry


def filter_medical(
    entries: Iterable[WiktionaryEntry],
    category_set: Iterable[str] = MEDICAL_CATEGORIES,
    pattern: str | None = DEFAULT_PATTERN,
) -> list[WiktionaryEntry]:
    """Keep entries with a medical category or whose wikitext matches *pattern*.

    The pattern is a case-insensitive regular expression searched anywhere
    in the page wikitext; entries loaded from JSON lines (no wikitext) are
    matched against their extracted fields instead.
    """
    wanted = {case_fold(c) for c in category_set}
    regex = re.compile(pattern, re.I) if pattern else None
    kept = []
    for entry in entries:
        if {case_fold(c) for c in entry.categories} & wanted:
            kept.append(entry)
            continue
        if regex is not None:
            haystack = entry.raw or "\n".join([entry.headword, entry.definition, *entry.synonyms])
            if regex.search(haystack):
                kept.append(entry)
    return kept


def summarize(entries: Iterable[WiktionaryEntry]) -> dict[str, int]:
    """Counts used to describe a subset: headwords, entries with synonyms,
    total mentions (headword + synonyms) and distinct folded strings."""
    entries = list(entries)
    distinct = set()
    mentions = 0
    for e in entries:
        mentions += 1 + len(e.synonyms)
        distinct.add(case_fold(e.headword))
        distinct.update(case_fold(s) for s in e.synonyms)
    return {
        "entries": len(entries),
        "with_synonyms": sum(1 for e in entries if e.synonyms),
        "mentions": mentions,
        "distinct_strings": len(distinct),
    }


def write_jsonl(entries: Iterable[WiktionaryEntry], out: TextIO) -> int:
    n = 0
    for entry in entries:
        out.write(entry.to_json() + "\n")
        n += 1
    return n


def read_jsonl(lines: Iterable[str]) -> list[WiktionaryEntry]:
    return [WiktionaryEntry.from_json(line) for line in lines if line.strip()]


def parse_dump_text(xml: str, **kwargs) -> list[WiktionaryEntry]:
    """Convenience wrapper for small in-memory dumps."""
    return list(parse_dump(io.BytesIO(xml.encode("utf-8")), **kwargs))
