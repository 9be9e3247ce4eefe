"""Corpus-scale code-clone auditing for agent-tool repositories."""

from .analysis import (
    CalibrationRow,
    PrevalenceReport,
    bucketize,
    calibration_table,
    cluster_candidates,
    extract_candidates,
    prevalence_report,
    wilson_interval,
)
from .corpus import CorpusStore, RepoRecord, canonicalize_url, ingest_manifest
from .ctph import FuzzyHash, ctph_compare, ctph_digest
from .normalize import (
    FileFilterPolicy,
    NormalizedDocument,
    build_document,
    normalize_text,
    passes_size_filter,
    strip_comments,
    tokenize,
)
from .pairwise import enumerate_pairs, score_all, score_histogram
from .tokensim import jaccard, minhash_estimate, minhash_signature
from .verify import LabelStore, SamplePlan, VerificationLabel, stratified_sample

__version__ = "0.1.0"
