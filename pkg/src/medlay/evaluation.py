"""Coverage experiments over annotated corpora and threshold sweeps.

Experiment 1 normalizes TECHNICAL spans and checks for an easier synonym;
experiment 2 normalizes LAY spans against a UMLS and a WUMLS index.
Both count each distinct folded surface once unless ``unique=False``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Mapping, Sequence, TextIO

from medlay.corpus import AnnotatedDocument, Label
from medlay.errors import ValidationError
from medlay.lexicon import case_fold
from medlay.normalize import MentionIndex, matched_mention, normalize, simplify
from medlay.technicality import PAIRS, SortedSynonymEntry, normalize_mode

HISTOGRAM_WIDTH = 10


def percent(part: int, whole: int) -> float:
    return round(100.0 * part / whole, 2) if whole else 0.0


@dataclass
class TermResult:
    term: str
    found: bool
    cuis: list[str]
    kind: str | None
    h_dist: float | None
    easier: list[str] = field(default_factory=list)


@dataclass
class CoverageReport:
    total_terms: int = 0
    normalized: int = 0
    normalized_pct: float = 0.0
    easier_found: int = 0
    easier_pct: float = 0.0
    mean_h_dist_of_matches: float | None = None
    h_dist_histogram: dict[str, int] = field(default_factory=dict)
    terms: list[TermResult] = field(default_factory=list)

    def count_scored(self, lo: float = -math.inf, hi: float = math.inf) -> int:
        """Normalized terms whose matched score lies in ``[lo, hi)``."""
        return sum(1 for t in self.terms if t.h_dist is not None and lo <= t.h_dist < hi)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def collect_terms(documents: Iterable[AnnotatedDocument], label: Label, unique: bool = True) -> list[str]:
    """Annotated surfaces with *label*, in document order.

    With ``unique=True`` only the first surface of each folded form is kept.
    """
    out, seen = [], set()
    for doc in documents:
        for ann in sorted(doc.by_label(label), key=lambda a: (a.start, a.end, a.id)):
            key = case_fold(ann.surface)
            if unique:
                if key in seen:
                    continue
                seen.add(key)
            out.append(ann.surface)
    return out


def _histogram(scores: Iterable[float]) -> dict[str, int]:
    buckets: dict[int, int] = {}
    for s in scores:
        lo = int(s // HISTOGRAM_WIDTH) * HISTOGRAM_WIDTH
        buckets[lo] = buckets.get(lo, 0) + 1
    return {str(k): buckets[k] for k in sorted(buckets)}


def coverage(
    terms: Sequence[str],
    index: MentionIndex,
    ssd: Sequence[SortedSynonymEntry] | Mapping[str, SortedSynonymEntry] | None = None,
    *,
    with_simplification: bool = False,
    use_stem: bool = True,
) -> CoverageReport:
    """Normalize each term; record the score of the mention it hit.

    A term's score is taken from the first matched concept (CUI order)
    whose SSD entry gives the hit mention a defined score.
    """
    by_cui = {} if ssd is None else (ssd if isinstance(ssd, Mapping) else {e.cui: e for e in ssd})
    report = CoverageReport(total_terms=len(terms))
    for term in terms:
        res = normalize(index, term, use_stem)
        score = None
        for cui, kind in res.matches:
            entry = by_cui.get(cui)
            hit = matched_mention(entry, term, kind) if entry is not None else None
            if hit is not None and hit.defined:
                score = hit.h_dist
                break
        easier = []
        if res.found:
            report.normalized += 1
            if with_simplification:
                easier = [s for s, _ in simplify(index, by_cui, term, use_stem)]
                if easier:
                    report.easier_found += 1
        report.terms.append(
            TermResult(term, res.found, res.cuis, res.kind.value if res.kind else None, score, easier)
        )
    scores = [t.h_dist for t in report.terms if t.h_dist is not None]
    report.normalized_pct = percent(report.normalized, report.total_terms)
    report.easier_pct = percent(report.easier_found, report.normalized)
    report.mean_h_dist_of_matches = round(sum(scores) / len(scores), 2) if scores else None
    report.h_dist_histogram = _histogram(scores)
    return report


def run_experiment_1(
    documents: Iterable[AnnotatedDocument],
    index: MentionIndex,
    ssd,
    *,
    unique: bool = True,
    use_stem: bool = True,
) -> CoverageReport:
    """Normalization and simplification of technical terms."""
    terms = collect_terms(documents, Label.TECHNICAL, unique)
    return coverage(terms, index, ssd, with_simplification=True, use_stem=use_stem)


def run_experiment_2(
    documents: Iterable[AnnotatedDocument],
    index_umls: MentionIndex,
    index_wumls: MentionIndex,
    ssd_umls=None,
    ssd_wumls=None,
    *,
    unique: bool = True,
    use_stem: bool = True,
) -> tuple[CoverageReport, CoverageReport]:
    """Normalization of lay expressions under both lexicons."""
    terms = collect_terms(documents, Label.LAY, unique)
    return (
        coverage(terms, index_umls, ssd_umls, use_stem=use_stem),
        coverage(terms, index_wumls, ssd_wumls, use_stem=use_stem),
    )


# -- threshold sweep --------------------------------------------------------


class Judgment(str, Enum):
    EASIER = "EASIER"
    EQUAL = "EQUAL"
    HARDER = "HARDER"


def round_half_up(x: float) -> int:
    return int(Decimal(repr(x)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    instances: int
    easier: int
    easier_or_equal: int

    @property
    def pct_easier(self) -> int | None:
        return round_half_up(100 * self.easier / self.instances) if self.instances else None

    @property
    def pct_easier_or_equal(self) -> int | None:
        return round_half_up(100 * self.easier_or_equal / self.instances) if self.instances else None


def threshold_sweep(
    judged: Iterable[tuple[float, Judgment]], thresholds: Iterable[float], mode: str = PAIRS
) -> list[SweepRow]:
    """Precision of judgments among rows surviving each threshold.

    ``pairs`` keeps rows with gap >= threshold; ``lowest`` keeps rows with
    score <= threshold.
    """
    judged = [(float(v), Judgment(j)) for v, j in judged]
    if not judged:
        raise ValidationError("threshold sweep needs at least one judged row")
    mode = normalize_mode(mode)
    rows = []
    for t in thresholds:
        kept = [j for v, j in judged if (v >= t if mode == PAIRS else v <= t)]
        easier = sum(1 for j in kept if j is Judgment.EASIER)
        equal = sum(1 for j in kept if j is Judgment.EQUAL)
        rows.append(SweepRow(t, len(kept), easier, easier + equal))
    return rows


_YES = {"yes", "y", "1", "true", "technical", "t"}
_NO = {"no", "n", "0", "false", "lay", "l"}


def read_judged_sheet(lines: Iterable[str], mode: str = PAIRS, definition: int = 1):
    """Judged ``(value, Judgment)`` rows from a filled-in sheet.

    For ``lowest`` sheets the chosen definition column is relabeled:
    technical -> EASIER, not technical -> HARDER, so ``pct_easier`` of the
    sweep reads as the share of technical terms.
    """
    mode = normalize_mode(mode)
    reader = csv.DictReader(lines)
    out = []
    for rowno, row in enumerate(reader, 2):
        try:
            if mode == PAIRS:
                value = float(row["gap"])
                raw = (row.get("judgment") or "").strip().upper()
                out.append((value, Judgment(raw)))
            else:
                value = float(row["h_dist"])
                raw = (row.get(f"definition_{definition}") or "").strip().lower()
                if raw in _YES:
                    out.append((value, Judgment.EASIER))
                elif raw in _NO:
                    out.append((value, Judgment.HARDER))
                else:
                    raise ValueError(raw)
        except (KeyError, ValueError, TypeError):
            raise ValidationError(f"sheet row {rowno}: missing or invalid judgment") from None
    return out


def _fmt_threshold(t: float) -> str:
    return str(int(t)) if float(t).is_integer() else f"{t:g}"


def render_table(header_label: str, thresholds, rows: Sequence[tuple[str, Sequence]]) -> str:
    """Plain-text table: one column per threshold, one line per metric."""
    cells = [[header_label] + [_fmt_threshold(t) for t in thresholds]]
    for label, values in rows:
        cells.append([label] + ["-" if v is None else str(v) for v in values])
    first = max(len(r[0]) for r in cells)
    widths = [max(len(r[i]) for r in cells) for i in range(1, len(cells[0]))]
    lines = []
    for r in cells:
        parts = [r[0].ljust(first)] + [c.rjust(w) for c, w in zip(r[1:], widths)]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def render_pairs_sweep(rows: Sequence[SweepRow]) -> str:
    return render_table(
        "distance (>=)",
        [r.threshold for r in rows],
        [
            ("#instance", [r.instances for r in rows]),
            ("%is-easier", [r.pct_easier for r in rows]),
            ("%is-easier-or-equal", [r.pct_easier_or_equal for r in rows]),
        ],
    )


def render_lowest_sweep(def1: Sequence[SweepRow], def2: Sequence[SweepRow] | None = None) -> str:
    """Lowest-only table; the second definition row is omitted when absent."""
    rows = [
        ("#instances", [r.instances for r in def1]),
        ("%definition-1", [r.pct_easier for r in def1]),
    ]
    if def2 is not None:
        rows.append(("%definition-2", [r.pct_easier for r in def2]))
    return render_table("distance (<=)", [r.threshold for r in def1], rows)


def sweep_to_json(rows: Sequence[SweepRow]) -> str:
    data = [
        {
            "threshold": r.threshold,
            "instances": r.instances,
            "easier": r.easier,
            "easier_or_equal": r.easier_or_equal,
            "pct_easier": r.pct_easier,
            "pct_easier_or_equal": r.pct_easier_or_equal,
        }
        for r in rows
    ]
    return json.dumps(data, indent=2) + "\n"


def write_judged_sheet(judged, out: TextIO, mode: str = PAIRS):
    """Write ``(value, Judgment)`` rows as a minimal judged sheet."""
    mode = normalize_mode(mode)
    writer = csv.writer(out, lineterminator="\n")
    if mode == PAIRS:
        writer.writerow(["gap", "judgment"])
        for v, j in judged:
            writer.writerow([v, Judgment(j).value])
    else:
        writer.writerow(["h_dist", "definition_1"])
        for v, j in judged:
            writer.writerow([v, "yes" if Judgment(j) is Judgment.EASIER else "no"])
