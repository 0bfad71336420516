"""Rank-based tests for comparing optimizers over paired runs.

Distribution tails come from :mod:`scipy.stats`; the rank statistics are
computed here so the tie and sign conventions are explicit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats as st

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
    "StatisticsError",
    "TooFewPairs",
    "WilcoxonReport",
    "descriptive",
    "friedman",
    "friedman_chi_square_from_mean_ranks",
    "friedman_posthoc",
    "kendalls_w",
    "levene",
    "pairwise_std_error",
    "signed_rank_z",
    "wilcoxon_signed_rank",
]

ALPHA = 0.05


class StatisticsError(ValueError):
    pass


class EmptyInput(StatisticsError):
    pass


class DegenerateInput(StatisticsError):
    pass


class AllTies(StatisticsError):
    pass


class TooFewPairs(StatisticsError):
    pass


class Descriptive(NamedTuple):
    best: float
    worst: float
    mean: float


def descriptive(samples) -> Descriptive:
    """Minimum, maximum and mean of a fitness sample (lower is better)."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("descriptive statistics need at least one value")
    return Descriptive(float(x.min()), float(x.max()), float(x.mean()))


@dataclass(frozen=True)
class ResultMatrix:
    """Fitness values laid out as blocks (rows) by treatments (columns)."""

    values: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise StatisticsError("result matrix must be two-dimensional")
        n, k = v.shape
        if n < 2 or k < 2:
            raise StatisticsError(f"need at least 2 blocks and 2 treatments, got {n}x{k}")
        if not np.all(np.isfinite(v)):
            raise StatisticsError("result matrix has missing or non-finite values")
        labels = tuple(self.labels)
        if len(labels) != k:
            raise StatisticsError(f"{len(labels)} labels for {k} treatments")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", labels)

    @property
    def n_blocks(self) -> int:
        return self.values.shape[0]

    @property
    def n_treatments(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FriedmanReport:
    labels: tuple[str, ...]
    mean_ranks: np.ndarray
    chi_square: float
    df: int
    p_value: float
    kendalls_w: float
    n_blocks: int
    alpha: float = ALPHA

    def as_dict(self) -> dict:
        return {
            "n_blocks": self.n_blocks,
            "chi_square": self.chi_square,
            "df": self.df,
            "p_value": self.p_value,
            "kendalls_w": self.kendalls_w,
            "alpha": self.alpha,
            "mean_ranks": dict(zip(self.labels, map(float, self.mean_ranks))),
        }


def _tie_term(sorted_ranks_row: np.ndarray) -> float:
    _, counts = np.unique(sorted_ranks_row, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


def friedman(m: ResultMatrix, alpha: float = ALPHA) -> FriedmanReport:
    """Friedman test with mid-ranks and the usual tie correction.

    Rank 1 is the smallest value in a block.  Kendall's W is derived from the
    tie-corrected statistic as ``chi2 / (N (k - 1))``.
    """
    n, k = m.values.shape
    ranks = st.rankdata(m.values, axis=1)
    rank_sums = ranks.sum(axis=0)
    untied = 12.0 / (n * k * (k + 1)) * float(np.sum(rank_sums**2)) - 3.0 * n * (k + 1)
    ties = sum(_tie_term(row) for row in m.values)
    correction = 1.0 - ties / (n * k * (k * k - 1))
    if correction <= 0.0:
        raise DegenerateInput("every block is constant; ranks carry no information")
    chi2 = untied / correction
    df = k - 1
    return FriedmanReport(
        labels=m.labels,
        mean_ranks=rank_sums / n,
        chi_square=chi2,
        df=df,
        p_value=float(st.chi2.sf(chi2, df)),
        kendalls_w=kendalls_w(chi2, n, k),
        n_blocks=n,
        alpha=alpha,
    )


def friedman_chi_square_from_mean_ranks(mean_ranks: Sequence[float], n_blocks: int) -> float:
    """Untied Friedman statistic ``12N/(k(k+1)) sum R_j^2 - 3N(k+1)``."""
    r = np.asarray(mean_ranks, dtype=float)
    k = r.size
    return 12.0 * n_blocks / (k * (k + 1)) * float(np.sum(r**2)) - 3.0 * n_blocks * (k + 1)


def kendalls_w(chi_square: float, n_blocks: int, k: int) -> float:
    return chi_square / (n_blocks * (k - 1))


def pairwise_std_error(k: int, n_blocks: int) -> float:
    return math.sqrt(k * (k + 1) / (6.0 * n_blocks))


@dataclass(frozen=True)
class PairwiseRow:
    sample1: str
    sample2: str
    statistic: float  # mean rank of sample1 minus mean rank of sample2
    std_error: float
    std_statistic: float
    p_value: float
    adj_p_value: float


@dataclass(frozen=True)
class PairwiseReport:
    rows: tuple[PairwiseRow, ...]
    n_pairs: int
    std_error: float
    alpha: float = ALPHA

    def lookup(self, a: str, b: str) -> PairwiseRow:
        for row in self.rows:
            if row.sample1 == a and row.sample2 == b:
                return row
        raise KeyError((a, b))


def friedman_posthoc(report: FriedmanReport, n_blocks: int | None = None, k: int | None = None) -> PairwiseReport:
    """Mean-rank differences with a Bonferroni adjustment over all pairs.

    Both orderings of every pair are emitted; they share ``|z|`` and p-values
    and differ only in sign.  The family size stays ``k (k - 1) / 2``.
    """
    n = report.n_blocks if n_blocks is None else n_blocks
    k = len(report.labels) if k is None else k
    se = pairwise_std_error(k, n)
    family = k * (k - 1) // 2
    rows = []
    for i, j in itertools.permutations(range(k), 2):
        diff = float(report.mean_ranks[i] - report.mean_ranks[j])
        z = diff / se
        p = float(2.0 * st.norm.sf(abs(z)))
        rows.append(PairwiseRow(report.labels[i], report.labels[j], diff, se, z, p, min(1.0, p * family)))
    return PairwiseReport(rows=tuple(rows), n_pairs=family, std_error=se, alpha=report.alpha)


@dataclass(frozen=True)
class WilcoxonReport:
    n_negative: int
    n_positive: int
    n_ties: int
    sum_negative: float
    sum_positive: float
    z: float
    p_two_tailed: float
    alpha: float = ALPHA

    @property
    def mean_rank_negative(self) -> float:
        return self.sum_negative / self.n_negative if self.n_negative else 0.0

    @property
    def mean_rank_positive(self) -> float:
        return self.sum_positive / self.n_positive if self.n_positive else 0.0


def signed_rank_z(w_plus: float, m: int) -> float:
    """Normal approximation of the positive-rank sum, no continuity correction."""
    mean = m * (m + 1) / 4.0
    sd = math.sqrt(m * (m + 1) * (2 * m + 1) / 24.0)
    return (w_plus - mean) / sd


def wilcoxon_signed_rank(a, b, min_pairs: int = 5, alpha: float = ALPHA) -> WilcoxonReport:
    """Signed-rank test on the differences ``a - b``.

    Zero differences are dropped and counted as ties; the remaining absolute
    differences get mid-ranks.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise StatisticsError("paired samples must be 1-D and of equal length")
    d = a - b
    nonzero = d[d != 0.0]
    ties = d.size - nonzero.size
    if nonzero.size == 0:
        raise AllTies("every pair is equal")
    if nonzero.size < min_pairs:
        raise TooFewPairs(f"{nonzero.size} non-tied pairs, need at least {min_pairs}")
    ranks = st.rankdata(np.abs(nonzero))
    pos = nonzero > 0
    w_plus = float(ranks[pos].sum())
    w_minus = float(ranks[~pos].sum())
    z = signed_rank_z(w_plus, nonzero.size)
    return WilcoxonReport(
        n_negative=int(np.count_nonzero(~pos)),
        n_positive=int(np.count_nonzero(pos)),
        n_ties=int(ties),
        sum_negative=w_minus,
        sum_positive=w_plus,
        z=z,
        p_two_tailed=float(2.0 * st.norm.sf(abs(z))),
        alpha=alpha,
    )


@dataclass(frozen=True)
class LeveneReport:
    center: str
    statistic: float
    df1: int
    df2: int
    p_value: float
    alpha: float = field(default=ALPHA)


_CENTERS = {"mean": "mean", "median": "median", "trimmed": "trimmed", "trimmed-mean": "trimmed"}


def levene(groups, center: str = "mean", proportion_to_cut: float = 0.05, alpha: float = ALPHA) -> LeveneReport:
    """Levene's homogeneity-of-variance test.

    ``center`` is ``mean``, ``median`` or ``trimmed-mean`` (``proportion_to_cut``
    trimmed from each tail).
    """
    try:
        how = _CENTERS[center]
    except KeyError:
        raise StatisticsError(f"unknown center {center!r}; choose mean, median or trimmed-mean") from None
    arrays = [np.asarray(g, dtype=float).ravel() for g in groups]
    if len(arrays) < 2 or any(g.size < 2 for g in arrays):
        raise StatisticsError("need at least two groups of at least two values")
    if how == "trimmed":
        centers = [st.trim_mean(g, proportion_to_cut) for g in arrays]
    else:
        centers = [getattr(np, how)(g) for g in arrays]
    deviations = np.concatenate([np.abs(g - c) for g, c in zip(arrays, centers)])
    df1 = len(arrays) - 1
    df2 = deviations.size - len(arrays)
    if np.all(deviations == deviations[0]):
        # zero spread of the deviations: F is 0 when they are all equal but not zero
        if deviations[0] == 0.0:
            raise DegenerateInput("every deviation from the group centers is zero")
        return LeveneReport(center, 0.0, df1, df2, 1.0, alpha)
    stat, p = st.levene(*arrays, center=how, proportiontocut=proportion_to_cut)
    return LeveneReport(center, float(stat), df1, df2, float(p), alpha)
