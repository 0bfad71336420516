"""Descriptive and nonparametric comparison of optimizer results."""

from .nonparametric import (
    ALPHA,
    AllTies,
    DegenerateInput,
    Descriptive,
    EmptyInput,
    FriedmanReport,
    LeveneReport,
    PairwiseReport,
    PairwiseRow,
    ResultMatrix,
    StatisticsError,
    TooFewPairs,
    WilcoxonReport,
    descriptive,
    friedman,
    friedman_chi_square_from_mean_ranks,
    friedman_posthoc,
    kendalls_w,
    levene,
    pairwise_std_error,
    signed_rank_z,
    wilcoxon_signed_rank,
)
from .report import StatReport, build_report, result_matrix, sort_labels, write_report

__all__ = [
    "ALPHA",
    "AllTies",
    "DegenerateInput",
    "Descriptive",
    "EmptyInput",
    "FriedmanReport",
    "LeveneReport",
    "PairwiseReport",
    "PairwiseRow",
    "ResultMatrix",
    "StatReport",
    "StatisticsError",
    "TooFewPairs",
    "WilcoxonReport",
    "build_report",
    "descriptive",
    "friedman",
    "friedman_chi_square_from_mean_ranks",
    "friedman_posthoc",
    "kendalls_w",
    "levene",
    "pairwise_std_error",
    "result_matrix",
    "signed_rank_z",
    "sort_labels",
    "wilcoxon_signed_rank",
    "write_report",
]
