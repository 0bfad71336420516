"""Statistical report over harness run records, written as CSV and JSON.

Output files (one row per entry, full float precision):

``descriptive.csv``
    ``algorithm,case,runs,best,worst,mean``
``levene.csv``
    ``center,statistic,df1,df2,p_value``
``friedman_ranks.csv``
    ``algorithm,mean_rank``
``friedman.json``
    ``n_blocks,chi_square,df,p_value,kendalls_w,alpha,mean_ranks``
``pairwise.csv``
    ``sample1,sample2,statistic,std_error,std_statistic,p_value,adj_p_value``
    (both orderings of every pair)
``wilcoxon.csv``
    ``sample1,sample2,n_negative,n_positive,n_ties,mean_rank_negative,
    mean_rank_positive,sum_negative,sum_positive,z,p_value``
    (differences are ``sample1 - sample2``; negative means sample1 is lower)
``stats.json``
    everything above plus per-test errors and dropped blocks.
"""

from __future__ import annotations

import csv
import itertools
import json
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .nonparametric import (
    ALPHA,
    Descriptive,
    FriedmanReport,
    LeveneReport,
    PairwiseReport,
    ResultMatrix,
    StatisticsError,
    WilcoxonReport,
    descriptive,
    friedman,
    friedman_posthoc,
    levene,
    wilcoxon_signed_rank,
)

__all__ = ["StatReport", "build_report", "result_matrix", "sort_labels", "write_report"]

LEVENE_CENTERS = ("mean", "median", "trimmed-mean")


def sort_labels(labels: Iterable[str]) -> list[str]:
    return sorted(set(labels), key=str.lower)


def result_matrix(records, algorithms: Sequence[str] | None = None) -> tuple[ResultMatrix, list[tuple]]:
    """Pivot records into blocks ``(case, seed)`` by algorithm.

    Blocks missing any algorithm are dropped and returned separately.
    """
    algorithms = sort_labels(r.algorithm for r in records) if algorithms is None else list(algorithms)
    cells: dict[tuple, dict[str, float]] = defaultdict(dict)
    for r in records:
        cells[(r.case, r.seed)][r.algorithm] = r.best_itae
    rows, dropped = [], []
    for block in sorted(cells):
        values = cells[block]
        if all(a in values for a in algorithms):
            rows.append([values[a] for a in algorithms])
        else:
            dropped.append(block)
    return ResultMatrix(np.array(rows, dtype=float).reshape(len(rows), len(algorithms)), tuple(algorithms)), dropped


@dataclass
class StatReport:
    descriptive: dict[tuple[str, int], tuple[int, Descriptive]] = field(default_factory=dict)
    levene: list[LeveneReport] = field(default_factory=list)
    friedman: FriedmanReport | None = None
    pairwise: PairwiseReport | None = None
    wilcoxon: dict[tuple[str, str], WilcoxonReport] = field(default_factory=dict)
    dropped_blocks: list[tuple] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    alpha: float = ALPHA


def build_report(records, alpha: float = ALPHA) -> StatReport:
    """Run the full chain; a degenerate test is logged in ``errors`` and skipped."""
    records = list(records)
    if not records:
        raise StatisticsError("no run records")
    rep = StatReport(alpha=alpha)

    by_cell = defaultdict(list)
    by_algo = defaultdict(list)
    for r in records:
        by_cell[(r.algorithm, r.case)].append(r.best_itae)
        by_algo[r.algorithm].append(r.best_itae)
    for key in sorted(by_cell, key=lambda k: (k[1], k[0].lower())):
        rep.descriptive[key] = (len(by_cell[key]), descriptive(by_cell[key]))

    labels = sort_labels(by_algo)
    for center in LEVENE_CENTERS:
        try:
            rep.levene.append(levene([by_algo[a] for a in labels], center=center, alpha=alpha))
        except StatisticsError as exc:
            rep.errors[f"levene:{center}"] = str(exc)

    try:
        matrix, rep.dropped_blocks = result_matrix(records, labels)
    except StatisticsError as exc:
        rep.errors["friedman"] = str(exc)
        return rep
    try:
        rep.friedman = friedman(matrix, alpha=alpha)
        rep.pairwise = friedman_posthoc(rep.friedman)
    except StatisticsError as exc:
        rep.errors["friedman"] = str(exc)
    for i, j in itertools.combinations(range(len(labels)), 2):
        name = f"wilcoxon:{labels[i]}-{labels[j]}"
        try:
            rep.wilcoxon[(labels[i], labels[j])] = wilcoxon_signed_rank(
                matrix.values[:, i], matrix.values[:, j], alpha=alpha
            )
        except StatisticsError as exc:
            rep.errors[name] = str(exc)
    return rep


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def _wilcoxon_row(pair, w: WilcoxonReport) -> list:
    return [pair[0], pair[1], w.n_negative, w.n_positive, w.n_ties, w.mean_rank_negative,
            w.mean_rank_positive, w.sum_negative, w.sum_positive, w.z, w.p_two_tailed]


def write_report(rep: StatReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [
        _write_csv(out / "descriptive.csv", ("algorithm", "case", "runs", "best", "worst", "mean"),
                   [(a, c, n, d.best, d.worst, d.mean) for (a, c), (n, d) in rep.descriptive.items()]),
        _write_csv(out / "levene.csv", ("center", "statistic", "df1", "df2", "p_value"),
                   [(l.center, l.statistic, l.df1, l.df2, l.p_value) for l in rep.levene]),
        _write_csv(out / "wilcoxon.csv",
                   ("sample1", "sample2", "n_negative", "n_positive", "n_ties", "mean_rank_negative",
                    "mean_rank_positive", "sum_negative", "sum_positive", "z", "p_value"),
                   [_wilcoxon_row(pair, w) for pair, w in rep.wilcoxon.items()]),
    ]
    if rep.friedman is not None:
        f = rep.friedman
        written.append(_write_csv(out / "friedman_ranks.csv", ("algorithm", "mean_rank"),
                                  [(a, float(r)) for a, r in zip(f.labels, f.mean_ranks)]))
        path = out / "friedman.json"
        path.write_text(json.dumps(f.as_dict(), indent=2) + "\n")
        written.append(path)
    if rep.pairwise is not None:
        written.append(_write_csv(
            out / "pairwise.csv",
            ("sample1", "sample2", "statistic", "std_error", "std_statistic", "p_value", "adj_p_value"),
            [(r.sample1, r.sample2, r.statistic, r.std_error, r.std_statistic, r.p_value, r.adj_p_value)
             for r in rep.pairwise.rows],
        ))
    summary = {
        "alpha": rep.alpha,
        "descriptive": [
            {"algorithm": a, "case": c, "runs": n, **d._asdict()} for (a, c), (n, d) in rep.descriptive.items()
        ],
        "levene": [asdict(l) for l in rep.levene],
        "friedman": rep.friedman.as_dict() if rep.friedman else None,
        "pairwise": [asdict(r) for r in rep.pairwise.rows] if rep.pairwise else None,
        "wilcoxon": [
            {"sample1": a, "sample2": b, **asdict(w), "mean_rank_negative": w.mean_rank_negative,
             "mean_rank_positive": w.mean_rank_positive}
            for (a, b), w in rep.wilcoxon.items()
        ],
        "dropped_blocks": [list(b) for b in rep.dropped_blocks],
        "errors": rep.errors,
    }
    path = out / "stats.json"
    path.write_text(json.dumps(summary, indent=2) + "\n")
    written.append(path)
    return written
