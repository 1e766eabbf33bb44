"""Relational words, insertion-deletion rewriting, and decision procedures."""

from .engine import (
    DerivationStep,
    Rule,
    Scheme,
    ScriptStep,
    SearchBudget,
    StepKind,
    System,
    Trace,
    delete_at,
    deletion_sites,
    insert_at,
    normalize_ins_first,
    replay,
    search,
    step_all,
)
from .words import (
    EMPTY,
    EqClassView,
    Relation,
    RelationalWord,
    contradicts,
    count_language,
    enumerate_language,
    exists_scattered_subword,
    from_matrix,
    from_string,
    fully_defined_words,
    is_scattered_subword,
    is_subword,
    scattered_embeddings,
)

__version__ = "0.1.0"

__all__ = [
    "DerivationStep",
    "EMPTY",
    "EqClassView",
    "Relation",
    "RelationalWord",
    "Rule",
    "Scheme",
    "ScriptStep",
    "SearchBudget",
    "StepKind",
    "System",
    "Trace",
    "contradicts",
    "count_language",
    "delete_at",
    "deletion_sites",
    "enumerate_language",
    "exists_scattered_subword",
    "from_matrix",
    "from_string",
    "fully_defined_words",
    "insert_at",
    "is_scattered_subword",
    "is_subword",
    "normalize_ins_first",
    "replay",
    "scattered_embeddings",
    "search",
    "step_all",
    "__version__",
]
