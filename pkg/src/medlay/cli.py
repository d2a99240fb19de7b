"""Command-line entry point: ``medlay <subcommand> [flags]``.

Exit codes: 0 success, 1 validation error, 2 I/O error, 64 usage error.
Values from ``--config`` (a TOML file with one table per subcommand,
e.g. ``[score]``) fill in flags that were not given on the command line.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from medlay.align import align as align_entries
from medlay.corpus import corpus_stats, read_corpus
from medlay.errors import MedlayError, ValidationError
from medlay.evaluation import (
    read_judged_sheet,
    render_lowest_sweep,
    render_pairs_sweep,
    run_experiment_1,
    run_experiment_2,
    sweep_to_json,
    threshold_sweep,
)
from medlay.lexicon import load_lexicon, save_lexicon
from medlay.normalize import build_index, normalize, read_index, simplify, write_index
from medlay.pipeline import PipelineConfig, load_toml, resolve_sty_filter, run_pipeline
from medlay.technicality import build_ssd, read_ssd, sample_for_manual_eval, write_ssd
from medlay.umls import (
    IngestConfig,
    IngestStats,
    attach_semantic_types,
    filter_by_semantic_types,
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
    read_jsonl,
    write_jsonl,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("medlay")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_thresholds(value: str) -> list[float]:
    """``0,5,...,50`` expands to an arithmetic range; plain lists pass through."""
    items = [v.strip() for v in value.split(",") if v.strip()]
    if "..." in items:
        i = items.index("...")
        if i < 2 or i != len(items) - 2:
            raise argparse.ArgumentTypeError("use 'a,b,...,z' for a range")
        head = [float(x) for x in items[:i]]
        a, b, z = head[-2], head[-1], float(items[-1])
        step = b - a
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        out = head[:-2]
        n = 0
        while a + n * step <= z + 1e-9:
            out.append(round(a + n * step, 10))
            n += 1
        return out
    try:
        return [float(x) for x in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold list {value!r}") from None


def _open_out(path):
    if path is None or str(path) == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit(path, text: str):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) in (None, "")]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


# -- subcommands ------------------------------------------------------------


def cmd_ingest_umls(args):
    _require(args, "concepts", "out")
    cfg = IngestConfig(
        languages=frozenset(_csv_list(args.languages or "GER,ENG,FRE")),
        min_mentions=args.min_mentions or 1,
        columns=parse_columns(args.columns) if args.columns else {},
    )
    stats = IngestStats()
    with open(args.concepts, encoding="utf-8") as fh:
        lexicon = parse_concept_table(fh, cfg, stats)
    if args.sty_file:
        with open(args.sty_file, encoding="utf-8") as fh:
            attach_semantic_types(lexicon, fh, stats)
    if args.sty_filter:
        sty = resolve_sty_filter(args.sty_filter)
        if sty is not None:
            lexicon = filter_by_semantic_types(lexicon, sty)
    save_lexicon(lexicon, args.out)
    log.info("ingested %d concepts; %s", len(lexicon), stats)


def cmd_ingest_wiktionary(args):
    _require(args, "dump", "out")
    stats = DumpStats()
    with open_dump(args.dump) as fh:
        entries = list(parse_dump(fh, stats))
    if not args.all:
        categories = _csv_list(args.categories) if args.categories else MEDICAL_CATEGORIES
        pattern = DEFAULT_PATTERN if args.pattern is None else args.pattern
        entries = filter_medical(entries, categories, pattern or None)
    fh, close = _open_out(args.out)
    try:
        write_jsonl(entries, fh)
    finally:
        if close:
            fh.close()
    log.info("wrote %d entries; %s", len(entries), stats)


def cmd_align(args):
    _require(args, "umls", "wiktionary", "out")
    umls = load_lexicon(args.umls)
    with open(args.wiktionary, encoding="utf-8") as fh:
        entries = read_jsonl(fh)
    wumls, report = align_entries(
        entries, umls, use_synonyms=args.match_synonyms, standalone=args.standalone
    )
    save_lexicon(wumls, args.out)
    if args.report:
        _emit(args.report, report.to_json())
    log.info("alignment: %s", report)


def cmd_score(args):
    _require(args, "lexicon", "out")
    lexicon = load_lexicon(args.lexicon)
    langs = _csv_list(args.reference_languages) if args.reference_languages else ("ENG", "FRE")
    scale = 1.0 if args.raw_scale else (args.scale if args.scale is not None else 100.0)
    ssd = build_ssd(
        lexicon, resolve_sty_filter(args.sty_filter or "default9"), langs,
        scale=scale, strict=args.strict,
    )
    fh, close = _open_out(args.out)
    try:
        write_ssd(ssd, fh)
    finally:
        if close:
            fh.close()


def cmd_sample(args):
    _require(args, "ssd", "n")
    with open(args.ssd, encoding="utf-8") as fh:
        ssd = read_ssd(fh)
    seed = args.seed if args.seed is not None else 0
    sheet = sample_for_manual_eval(ssd, args.n, args.mode or "pairs", seed)
    fh, close = _open_out(args.out)
    try:
        sheet.write_csv(fh)
    finally:
        if close:
            fh.close()


def cmd_build_index(args):
    _require(args, "lexicon", "out")
    index = build_index(load_lexicon(args.lexicon))
    fh, close = _open_out(args.out)
    try:
        write_index(index, fh)
    finally:
        if close:
            fh.close()


def _load_index(path):
    with open(path, encoding="utf-8") as fh:
        return read_index(fh)


def cmd_normalize(args):
    _require(args, "index")
    if not args.term and not args.terms_file:
        raise UsageError("one of --term or --terms-file is required")
    index = _load_index(args.index)
    queries = list(args.term or [])
    if args.terms_file:
        with open(args.terms_file, encoding="utf-8") as fh:
            queries += [line.strip() for line in fh if line.strip()]
    lines = ["QUERY\tFOUND\tCUIS\tKIND"]
    for q in queries:
        res = normalize(index, q, use_stem=not args.no_stem)
        kind = res.kind.value if res.kind else ""
        lines.append(f"{q}\t{'true' if res.found else 'false'}\t{','.join(res.cuis)}\t{kind}")
    _emit(args.out, "\n".join(lines) + "\n")


def cmd_simplify(args):
    _require(args, "index", "ssd", "term")
    index = _load_index(args.index)
    with open(args.ssd, encoding="utf-8") as fh:
        ssd = read_ssd(fh)
    lines = ["SURFACE\tH_DIST"]
    for term in args.term:
        lines += [f"{s}\t{h!r}" for s, h in simplify(index, ssd, term, use_stem=not args.no_stem)]
    _emit(args.out, "\n".join(lines) + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def cmd_corpus_stats(args):
    _require(args, "dir")
    _emit(args.out, _dump(corpus_stats(read_corpus(args.dir))))


def cmd_experiment1(args):
    _require(args, "dir", "index", "ssd")
    docs = read_corpus(args.dir)
    with open(args.ssd, encoding="utf-8") as fh:
        ssd = read_ssd(fh)
    rep = run_experiment_1(
        docs, _load_index(args.index), ssd, unique=not args.token_level, use_stem=not args.no_stem
    )
    _emit(args.out, rep.to_json())


def cmd_experiment2(args):
    _require(args, "dir", "umls_index", "wumls_index")
    docs = read_corpus(args.dir)
    ssds = []
    for path in (args.umls_ssd, args.wumls_ssd):
        if path:
            with open(path, encoding="utf-8") as fh:
                ssds.append(read_ssd(fh))
        else:
            ssds.append(None)
    rep_u, rep_w = run_experiment_2(
        docs, _load_index(args.umls_index), _load_index(args.wumls_index), *ssds,
        unique=not args.token_level, use_stem=not args.no_stem,
    )
    _emit(args.out, _dump({"umls": rep_u.to_dict(), "wumls": rep_w.to_dict()}))


def cmd_sweep(args):
    _require(args, "sheet")
    mode = args.mode or "pairs"
    thresholds = args.thresholds
    if thresholds is None:
        thresholds = parse_thresholds("0,5,...,50" if mode == "pairs" else "20,40,...,120")
    with open(args.sheet, encoding="utf-8", newline="") as fh:
        lines = fh.readlines()
    if mode == "pairs":
        rows = threshold_sweep(read_judged_sheet(lines, "pairs"), thresholds, "pairs")
        table = render_pairs_sweep(rows)
    else:
        first = args.definition or 1
        rows = threshold_sweep(read_judged_sheet(lines, "lowest", first), thresholds, "lowest")
        header = lines[0] if lines else ""
        if args.definition is None and "definition_2" in header:
            rows2 = threshold_sweep(read_judged_sheet(lines, "lowest", 2), thresholds, "lowest")
        else:
            rows2 = None
        table = render_lowest_sweep(rows, rows2)
    _emit(args.out, table)
    if args.json:
        _emit(args.json, sweep_to_json(rows))


def cmd_pipeline(args):
    if not args.config:
        raise UsageError("pipeline requires --config")
    cfg = PipelineConfig.from_toml(
        args.config,
        out_dir=args.out_dir,
        seed=args.seed,
    )
    written = run_pipeline(cfg)
    for name, path in written.items():
        log.info("%s: %s", name, path)


# -- parser -----------------------------------------------------------------


def _globals(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="TOML config file")
    parser.add_argument("--jobs", type=int, default=default, help="worker cap")
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="medlay", description=__doc__.splitlines()[0])
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="<subcommand>", parser_class=_Parser)

    subs = parser.subcommands = {}

    def add(name, func, help):
        p = subs[name] = sub.add_parser(name, help=help)
        _globals(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("ingest-umls", cmd_ingest_umls, "parse a concept table into a lexicon snapshot")
    p.add_argument("--concepts", help="pipe-delimited concept table (MRCONSO layout)")
    p.add_argument("--sty-file", help="CUI|STY or MRSTY table")
    p.add_argument("--sty-filter", help="default9, all, a file, or ';'-separated labels")
    p.add_argument("--languages", help="comma-separated, default GER,ENG,FRE")
    p.add_argument("--columns", help="e.g. cui=0,lang=1,str=14,suppress=16")
    p.add_argument("--min-mentions", type=int)
    p.add_argument("--out")

    p = add("ingest-wiktionary", cmd_ingest_wiktionary, "extract the medical subset of a dump")
    p.add_argument("--dump")
    p.add_argument("--categories", help="comma-separated category labels")
    p.add_argument("--pattern", help=f"regex searched in page text (default {DEFAULT_PATTERN!r})")
    p.add_argument("--all", action="store_true", help="skip the medical filter")
    p.add_argument("--out")

    p = add("align", cmd_align, "merge Wiktionary entries into a UMLS snapshot")
    p.add_argument("--umls")
    p.add_argument("--wiktionary")
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--match-synonyms", action="store_true")
    p.add_argument("--standalone", action="store_true")

    p = add("score", cmd_score, "write the sorted synonym dataset")
    p.add_argument("--lexicon")
    p.add_argument("--sty-filter")
    p.add_argument("--reference-languages")
    p.add_argument("--scale", type=float)
    p.add_argument("--raw-scale", action="store_true", help="report unscaled scores")
    p.add_argument("--strict", action="store_true", help="require every reference language")
    p.add_argument("--out")

    p = add("sample", cmd_sample, "draw a manual evaluation sheet")
    p.add_argument("--ssd")
    p.add_argument("--mode", choices=["pairs", "lowest", "lowest-only", "lowest-vs-highest"])
    p.add_argument("--n", type=int)
    p.add_argument("--out")

    p = add("build-index", cmd_build_index, "write the exact+stem mention index")
    p.add_argument("--lexicon")
    p.add_argument("--out")

    p = add("normalize", cmd_normalize, "look terms up in an index")
    p.add_argument("--index")
    p.add_argument("--term", action="append")
    p.add_argument("--terms-file")
    p.add_argument("--no-stem", action="store_true")
    p.add_argument("--out")

    p = add("simplify", cmd_simplify, "list easier synonyms of a term")
    p.add_argument("--index")
    p.add_argument("--ssd")
    p.add_argument("--term", action="append")
    p.add_argument("--no-stem", action="store_true")
    p.add_argument("--out")

    p = add("corpus-stats", cmd_corpus_stats, "corpus statistics")
    p.add_argument("--dir")
    p.add_argument("--out")

    for name, func, help in (
        ("experiment1", cmd_experiment1, "normalize technical terms, look for easier synonyms"),
        ("experiment2", cmd_experiment2, "normalize lay terms with UMLS and WUMLS"),
    ):
        p = add(name, func, help)
        p.add_argument("--dir")
        if name == "experiment1":
            p.add_argument("--index")
            p.add_argument("--ssd")
        else:
            p.add_argument("--umls-index")
            p.add_argument("--wumls-index")
            p.add_argument("--umls-ssd")
            p.add_argument("--wumls-ssd")
        p.add_argument("--token-level", action="store_true", help="count every occurrence")
        p.add_argument("--no-stem", action="store_true")
        p.add_argument("--out")

    p = add("sweep", cmd_sweep, "threshold table from a judged sheet")
    p.add_argument("--sheet")
    p.add_argument("--thresholds", type=parse_thresholds)
    p.add_argument("--mode", choices=["pairs", "lowest"])
    p.add_argument("--definition", type=int, choices=[1, 2])
    p.add_argument("--json")
    p.add_argument("--out")

    p = add("pipeline", cmd_pipeline, "run every stage from one config file")
    p.add_argument("--out-dir")
    return parser


def _apply_config(args, parser):
    if not args.config or args.command == "pipeline":
        return
    data = load_toml(args.config)
    for key in ("seed", "jobs"):
        if getattr(args, key, None) is None and key in data:
            setattr(args, key, data[key])
    section = data.get(args.command, {})
    for key, value in section.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ValidationError(f"{args.config}: unknown option {key!r} for {args.command}")
        if getattr(args, dest) in (None, False):
            setattr(args, dest, value)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        _apply_config(args, parser)
        args.func(args)
    except UsageError as exc:
        parser.subcommands[args.command].print_usage(sys.stderr)
        print(f"medlay {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, MedlayError) as exc:
        print(f"medlay {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"medlay {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
