"""Soccer rating systems, result forecasters and walk-forward evaluation."""

from .data import (Dataset, MatchRecord, OddsTriple, Result, canonical_sort, dump_dataset,
                   load_dataset, parse_footballdata, parse_oisdb, read_dataset, validate)
from .evaluate import FoldSpec, Pipeline, walk_forward
from .forecast import ProbTriple

__version__ = "0.1.0"

__all__ = [
    "Dataset", "FoldSpec", "MatchRecord", "OddsTriple", "Pipeline", "ProbTriple", "Result",
    "canonical_sort", "dump_dataset", "load_dataset", "parse_footballdata", "parse_oisdb",
    "read_dataset", "validate", "walk_forward",
]
