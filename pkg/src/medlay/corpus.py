"""Reader for brat-standoff corpora with Lay/Technical span annotations.

Each document is a ``.txt`` file with a sibling ``.ann`` file::

    T1<TAB>Lay 10 21<TAB>Hexenschuss
    #1<TAB>AnnotatorNotes T1<TAB>Lumbago

The note line carries the free-text counterpart. Other brat line types
(relations, attributes, events, normalizations) are kept verbatim so the
file can be written back unchanged.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from medlay.errors import StandoffParseError, StandoffValidationError
from medlay.lexicon import case_fold


class Label(str, Enum):
    LAY = "LAY"
    TECHNICAL = "TECHNICAL"

    @property
    def brat_name(self) -> str:
        return "Lay" if self is Label.LAY else "Technical"


class Topic(str, Enum):
    KIDNEY = "KIDNEY"
    STOMACH_INTESTINES = "STOMACH_INTESTINES"
    OTHER = "OTHER"


_TOPIC_DIRS = {
    "kidney": Topic.KIDNEY,
    "kidney_diseases": Topic.KIDNEY,
    "kidney-diseases": Topic.KIDNEY,
    "stomach_intestines": Topic.STOMACH_INTESTINES,
    "stomach-intestines": Topic.STOMACH_INTESTINES,
}
_EXTRA_PREFIXES = ("R", "E", "A", "M", "N", "*")


@dataclass
class Annotation:
    id: str
    label: Label
    start: int
    end: int
    surface: str
    counterpart: str = ""
    note_id: str | None = None


@dataclass
class AnnotatedDocument:
    doc_id: str
    text: str
    annotations: list[Annotation] = field(default_factory=list)
    topic: Topic = Topic.OTHER
    extra_lines: list[str] = field(default_factory=list)

    def tokens(self) -> list[str]:
        return self.text.split()

    def by_label(self, label: Label) -> list[Annotation]:
        return [a for a in self.annotations if a.label is label]


def _label(name: str, lineno: int) -> Label:
    folded = name.casefold()
    if folded == "lay":
        return Label.LAY
    if folded == "technical":
        return Label.TECHNICAL
    raise StandoffParseError(f"line {lineno}: unknown label {name!r}", lineno)


def parse_standoff_text(
    doc_id: str, text: str, ann_text: str, topic: Topic = Topic.OTHER
) -> AnnotatedDocument:
    annotations: dict[str, Annotation] = {}
    notes: list[tuple[int, str, str, str]] = []
    extras: list[str] = []
    for lineno, line in enumerate(ann_text.splitlines(), 1):
        if not line.strip():
            continue
        head = line[0]
        parts = line.split("\t")
        if head == "T":
            if len(parts) != 3:
                raise StandoffParseError(f"line {lineno}: expected 3 tab-separated fields", lineno)
            tid, span, surface = parts
            fields = span.split(" ")
            if ";" in span:
                raise StandoffParseError(f"line {lineno}: discontinuous spans are not supported", lineno)
            if len(fields) != 3:
                raise StandoffParseError(f"line {lineno}: expected '<label> <start> <end>'", lineno)
            try:
                start, end = int(fields[1]), int(fields[2])
            except ValueError:
                raise StandoffParseError(f"line {lineno}: non-integer offsets", lineno) from None
            if tid in annotations:
                raise StandoffValidationError(f"duplicate annotation id {tid}", tid)
            annotations[tid] = Annotation(tid, _label(fields[0], lineno), start, end, surface)
        elif head == "#":
            if len(parts) != 3:
                raise StandoffParseError(f"line {lineno}: expected 3 tab-separated fields", lineno)
            kind, _, target = parts[1].partition(" ")
            if kind != "AnnotatorNotes" or not target:
                raise StandoffParseError(f"line {lineno}: unsupported note {parts[1]!r}", lineno)
            notes.append((lineno, parts[0], target, parts[2]))
        elif head in _EXTRA_PREFIXES:
            extras.append(line)
        else:
            raise StandoffParseError(f"line {lineno}: unrecognized line", lineno)

    for lineno, note_id, target, body in notes:
        ann = annotations.get(target)
        if ann is None:
            raise StandoffValidationError(f"note {note_id} refers to unknown annotation {target}", target)
        if ann.note_id is not None:
            raise StandoffValidationError(f"annotation {target} has more than one note", target)
        ann.note_id, ann.counterpart = note_id, body

    for ann in annotations.values():
        if not 0 <= ann.start < ann.end <= len(text):
            raise StandoffValidationError(
                f"annotation {ann.id}: offsets {ann.start}-{ann.end} outside text", ann.id
            )
        if text[ann.start:ann.end] != ann.surface:
            raise StandoffValidationError(
                f"annotation {ann.id}: surface {ann.surface!r} does not match text "
                f"{text[ann.start:ann.end]!r}",
                ann.id,
            )
    return AnnotatedDocument(doc_id, text, list(annotations.values()), topic, extras)


def topic_for(path: Path) -> Topic:
    for part in reversed(path.parent.parts):
        topic = _TOPIC_DIRS.get(part.lower())
        if topic is not None:
            return topic
    return Topic.OTHER


def parse_standoff(text_file, ann_file, doc_id: str | None = None, topic: Topic | None = None):
    text_file, ann_file = Path(text_file), Path(ann_file)
    # newline="" keeps \r\n so offsets match what the annotation tool saw
    with open(text_file, encoding="utf-8", newline="") as fh:
        text = fh.read()
    with open(ann_file, encoding="utf-8") as fh:
        ann_text = fh.read()
    return parse_standoff_text(
        doc_id or text_file.stem, text, ann_text, topic if topic is not None else topic_for(text_file)
    )


def serialize_standoff(doc: AnnotatedDocument) -> str:
    lines = []
    for a in doc.annotations:
        lines.append(f"{a.id}\t{a.label.brat_name} {a.start} {a.end}\t{a.surface}")
    for a in doc.annotations:
        if a.note_id is not None:
            lines.append(f"{a.note_id}\tAnnotatorNotes {a.id}\t{a.counterpart}")
    lines.extend(doc.extra_lines)
    return "".join(line + "\n" for line in lines)


def read_corpus(directory) -> list[AnnotatedDocument]:
    """All ``.ann``/``.txt`` pairs below *directory*, sorted by path.

    The topic is taken from the nearest directory named after a forum
    (``kidney``, ``stomach_intestines``).
    """
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    docs = []
    for ann in sorted(root.rglob("*.ann")):
        txt = ann.with_suffix(".txt")
        doc_id = ann.relative_to(root).with_suffix("").as_posix()
        docs.append(parse_standoff(txt, ann, doc_id=doc_id))
    return docs


def _avg(total: int, n: int) -> float:
    return round(total / n, 2) if n else 0.0


def corpus_stats(documents: Iterable[AnnotatedDocument]) -> dict:
    """Per-topic file/token/annotation figures and per-label counts.

    Tokens are whitespace-separated; unique counts use folded surfaces.
    """
    documents = list(documents)
    topics: dict[str, dict] = {}
    for topic in Topic:
        docs = [d for d in documents if d.topic is topic]
        if not docs:
            continue
        tokens = sum(len(d.tokens()) for d in docs)
        annotations = sum(len(d.annotations) for d in docs)
        topics[topic.value] = {
            "files": len(docs),
            "tokens": tokens,
            "avg_tokens_per_file": _avg(tokens, len(docs)),
            "avg_annotations_per_file": _avg(annotations, len(docs)),
        }
    labels = {}
    for label in Label:
        surfaces = [a.surface for d in documents for a in d.by_label(label)]
        labels[label.value] = {
            "annotations": len(surfaces),
            "unique": len(Counter(case_fold(s) for s in surfaces)),
        }
    return {"topics": topics, "labels": labels}
