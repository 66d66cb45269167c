"""Scoring rules and walk-forward backtesting."""

from .backtest import (BacktestReport, FoldInfo, FoldSpec, MissingInputError, Pipeline, ReportRow,
                       aggregate, temporal_split, walk_forward)
from .scoring import (IGN_CLAMP, accuracy, brier, brier_score, expected_score, ign, ign_score,
                      outcome_vector, rmse, rps, rps_avg)

__all__ = [
    "BacktestReport", "FoldInfo", "FoldSpec", "IGN_CLAMP", "MissingInputError", "Pipeline",
    "ReportRow", "accuracy", "aggregate", "brier", "brier_score", "expected_score", "ign",
    "ign_score", "outcome_vector", "rmse", "rps", "rps_avg", "temporal_split", "walk_forward",
]
