"""Entity-type graph matching with property-based similarity features."""

from ._core import (
    EtmatchError,
    Graph,
    ablate,
    f_beta,
    l_spec,
    lcs_sim,
    levenshtein_sim,
    load_graph,
    match,
    ngram_sim,
    normalize_label,
    normalize_scores,
    parse_graph,
    run_cli,
    score_alignment,
    sp,
    train,
    write_synthetic,
)

__all__ = [
    "EtmatchError",
    "Graph",
    "ablate",
    "f_beta",
    "l_spec",
    "lcs_sim",
    "levenshtein_sim",
    "load_graph",
    "match",
    "ngram_sim",
    "normalize_label",
    "normalize_scores",
    "parse_graph",
    "run_cli",
    "score_alignment",
    "sp",
    "train",
    "write_synthetic",
]
