"""German medical lexicon building, technicality scoring and lay-term normalization."""
from medlay.align import AlignmentReport, align
from medlay.corpus import AnnotatedDocument, Annotation, Label, Topic, parse_standoff, read_corpus
from medlay.errors import MedlayError, ValidationError
from medlay.evaluation import run_experiment_1, run_experiment_2, threshold_sweep
from medlay.lexicon import Concept, Lexicon, Mention, Provenance, Source, case_fold, merge
from medlay.normalize import MatchKind, build_index, normalize, simplify
from medlay.stemming import stem
from medlay.technicality import build_ssd, harmonized_distance, levenshtein, sort_synonyms

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport", "AnnotatedDocument", "Annotation", "Concept", "Label", "Lexicon",
    "MatchKind", "MedlayError", "Mention", "Provenance", "Source", "Topic", "ValidationError",
    "align", "build_index", "build_ssd", "case_fold", "harmonized_distance", "levenshtein",
    "merge", "normalize", "parse_standoff", "read_corpus", "run_experiment_1",
    "run_experiment_2", "simplify", "sort_synonyms", "stem", "threshold_sweep",
]
