"""End-to-end run: ingest -> align -> score -> index -> experiments."""
from __future__ import annotations

import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from medlay.align import align as align_entries
from medlay.corpus import corpus_stats, read_corpus
from medlay.errors import ValidationError
from medlay.evaluation import run_experiment_1, run_experiment_2
from medlay.lexicon import ENGLISH, FRENCH, GERMAN, save_lexicon
from medlay.normalize import build_index, write_index
from medlay.technicality import DEFAULT_SCALE, build_ssd, sample_for_manual_eval, write_ssd
from medlay.umls import (
    DEFAULT_SEMANTIC_TYPES,
    IngestConfig,
    IngestStats,
    attach_semantic_types,
    parse_columns,
    parse_concept_table,
)
from medlay.wiktionary import (
    DEFAULT_PATTERN,
    MEDICAL_CATEGORIES,
    DumpStats,
    filter_medical,
    open_dump,
    parse_dump,
    summarize,
    write_jsonl,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)


def resolve_sty_filter(value):
    """``default9`` -> the nine default types, ``all`` -> None (no filter),
    an existing file -> one label per line, otherwise ``;``-separated labels."""
    if value is None or value == "default9":
        return DEFAULT_SEMANTIC_TYPES
    if isinstance(value, (list, tuple, set, frozenset)):
        return frozenset(value)
    if value == "all":
        return None
    path = Path(value)
    if path.is_file():
        with open(path, encoding="utf-8") as fh:
            return frozenset(line.strip() for line in fh if line.strip())
    return frozenset(s.strip() for s in value.split(";") if s.strip())


def load_toml(path) -> dict:
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from None


@dataclass
class PipelineConfig:
    umls: Path
    sty: Path
    wiktionary: Path
    corpus: Path
    out_dir: Path
    languages: tuple[str, ...] = (GERMAN, ENGLISH, FRENCH)
    columns: str = ""
    sty_filter: object = "default9"
    scale: float = DEFAULT_SCALE
    strict: bool = False
    categories: tuple[str, ...] = tuple(sorted(MEDICAL_CATEGORIES))
    pattern: str = DEFAULT_PATTERN
    match_synonyms: bool = False
    standalone: bool = False
    sample_n: int = 0
    seed: int = 0
    extra: dict = field(default_factory=dict)

    PATH_KEYS = ("umls", "sty", "wiktionary", "corpus")

    @classmethod
    def from_toml(cls, path, **overrides) -> "PipelineConfig":
        path = Path(path)
        data = load_toml(path)
        section = dict(data.get("pipeline", {}))
        if "seed" in data and "seed" not in section:
            section["seed"] = data["seed"]
        section.update({k: v for k, v in overrides.items() if v is not None})
        base = path.parent
        missing = [k for k in cls.PATH_KEYS + ("out_dir",) if k not in section]
        if missing:
            raise ValidationError(f"{path}: missing [pipeline] keys: {', '.join(missing)}")
        known = set(cls.__dataclass_fields__) - {"extra"}
        kwargs = {k: v for k, v in section.items() if k in known}
        kwargs["extra"] = {k: v for k, v in section.items() if k not in known}
        for key in cls.PATH_KEYS + ("out_dir",):
            p = Path(kwargs[key])
            kwargs[key] = p if p.is_absolute() else base / p
        for key in ("languages", "categories"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    def check_paths(self):
        for key in self.PATH_KEYS:
            p = getattr(self, key)
            if not p.exists():
                raise FileNotFoundError(f"config path '{key}' does not exist: {p}")


def _write_text(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def run_pipeline(cfg: PipelineConfig) -> dict[str, Path]:
    """Run every stage and write artifacts to ``cfg.out_dir``.

    Returns a mapping of artifact name to written path.
    """
    cfg.check_paths()
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    ingest_cfg = IngestConfig(
        languages=frozenset(cfg.languages),
        columns=parse_columns(cfg.columns) if cfg.columns else {},
    )
    ustats = IngestStats()
    with open(cfg.umls, encoding="utf-8") as fh:
        umls = parse_concept_table(fh, ingest_cfg, ustats)
    with open(cfg.sty, encoding="utf-8") as fh:
        attach_semantic_types(umls, fh, ustats)
    written["umls"], written["umls_sty"] = save_lexicon(umls, out / "umls.tsv")
    log.info("UMLS: %d concepts, %d mentions", len(umls), umls.mention_count())

    dstats = DumpStats()
    with open_dump(cfg.wiktionary) as fh:
        entries = list(parse_dump(fh, dstats))
    medical = filter_medical(entries, cfg.categories, cfg.pattern or None)
    with open(out / "wiktionary.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(medical, fh)
    written["wiktionary"] = out / "wiktionary.jsonl"

    wumls, report = align_entries(
        medical, umls, use_synonyms=cfg.match_synonyms, standalone=cfg.standalone
    )
    written["wumls"], written["wumls_sty"] = save_lexicon(wumls, out / "wumls.tsv")
    _write_text(out / "align_report.json", report.to_json())
    written["align_report"] = out / "align_report.json"

    _write_text(
        out / "ingest_report.json",
        _dump_json(
            {
                "umls": asdict(ustats),
                "wiktionary_dump": asdict(dstats),
                "wiktionary_all": summarize(entries),
                "wiktionary_medical": summarize(medical),
            }
        ),
    )
    written["ingest_report"] = out / "ingest_report.json"

    sty = resolve_sty_filter(cfg.sty_filter)
    ssds, indexes = {}, {}
    for name, lex in (("umls", umls), ("wumls", wumls)):
        ssd = build_ssd(lex, sty, scale=cfg.scale, strict=cfg.strict)
        ssds[name] = ssd
        with open(out / f"ssd_{name}.tsv", "w", encoding="utf-8", newline="\n") as fh:
            write_ssd(ssd, fh)
        written[f"ssd_{name}"] = out / f"ssd_{name}.tsv"
        index = build_index(lex)
        indexes[name] = index
        with open(out / f"index_{name}.tsv", "w", encoding="utf-8", newline="\n") as fh:
            write_index(index, fh)
        written[f"index_{name}"] = out / f"index_{name}.tsv"

    if cfg.sample_n:
        for mode in ("lowest", "pairs"):
            sheet = sample_for_manual_eval(ssds["umls"], cfg.sample_n, mode, cfg.seed)
            with open(out / f"sample_{mode}.csv", "w", encoding="utf-8", newline="") as fh:
                sheet.write_csv(fh)
            written[f"sample_{mode}"] = out / f"sample_{mode}.csv"

    docs = read_corpus(cfg.corpus)
    _write_text(out / "corpus_stats.json", _dump_json(corpus_stats(docs)))
    written["corpus_stats"] = out / "corpus_stats.json"

    for name in ("umls", "wumls"):
        rep = run_experiment_1(docs, indexes[name], ssds[name])
        _write_text(out / f"experiment1_{name}.json", rep.to_json())
        written[f"experiment1_{name}"] = out / f"experiment1_{name}.json"

    rep_u, rep_w = run_experiment_2(docs, indexes["umls"], indexes["wumls"], ssds["umls"], ssds["wumls"])
    _write_text(out / "experiment2.json", _dump_json({"umls": rep_u.to_dict(), "wumls": rep_w.to_dict()}))
    written["experiment2"] = out / "experiment2.json"
    return written

