import json
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst
from scipy import stats as st

from lfc_egbo.statistics import (
    AllTies,
    DegenerateInput,
    EmptyInput,
    ResultMatrix,
    StatisticsError,
    TooFewPairs,
    build_report,
    descriptive,
    friedman,
    friedman_chi_square_from_mean_ranks,
    friedman_posthoc,
    kendalls_w,
    levene,
    pairwise_std_error,
    result_matrix,
    signed_rank_z,
    wilcoxon_signed_rank,
    write_report,
)

LABELS6 = ("ChOA", "EGBO", "GBO", "GWO", "PSO", "SCA")
TABLE12 = (4.92, 1.94, 2.01, 3.73, 2.42, 5.98)

matrices = hst.integers(2, 12).flatmap(
    lambda n: hst.integers(2, 6).flatmap(
        lambda k: hst.lists(
            hst.lists(hst.integers(0, 4).map(float), min_size=k, max_size=k), min_size=n, max_size=n
        )
    )
)


# descriptive


def test_descriptive_examples():
    assert descriptive([1, 2, 3]) == (1.0, 3.0, 2.0)
    assert descriptive([0.25]) == (0.25, 0.25, 0.25)
    with pytest.raises(EmptyInput):
        descriptive([])


# Friedman


def test_friedman_two_by_two():
    r = friedman(ResultMatrix(np.array([[1.0, 2.0], [3.0, 5.0]]), ("a", "b")))
    assert r.chi_square == pytest.approx(2.0)
    np.testing.assert_allclose(r.mean_ranks, [1.0, 2.0])
    assert r.df == 1


def test_friedman_perfect_agreement_gives_w_one():
    values = np.tile(np.arange(6.0), (15, 1)) + np.arange(15.0)[:, None]
    r = friedman(ResultMatrix(values, LABELS6))
    assert r.kendalls_w == pytest.approx(1.0)
    np.testing.assert_allclose(r.mean_ranks, np.arange(1, 7))


def test_friedman_matches_scipy_with_ties():
    rng = np.random.default_rng(5)
    values = rng.integers(0, 4, size=(40, 5)).astype(float)
    ours = friedman(ResultMatrix(values, tuple("abcde")))
    ref = st.friedmanchisquare(*values.T)
    assert ours.chi_square == pytest.approx(ref.statistic, rel=1e-12)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_friedman_all_constant_blocks_rejected():
    with pytest.raises(DegenerateInput):
        friedman(ResultMatrix(np.ones((4, 3)), ("a", "b", "c")))


def test_result_matrix_validation():
    with pytest.raises(StatisticsError):
        ResultMatrix(np.ones((1, 3)), ("a", "b", "c"))
    with pytest.raises(StatisticsError):
        ResultMatrix(np.array([[1.0, np.nan], [1.0, 2.0]]), ("a", "b"))
    with pytest.raises(StatisticsError):
        ResultMatrix(np.ones((3, 2)), ("a",))


@settings(max_examples=60, deadline=None)
@given(rows=matrices)
def test_friedman_rank_sum_identity(rows):
    values = np.array(rows)
    n, k = values.shape
    if np.all(values == values[:, :1]):
        return
    r = friedman(ResultMatrix(values, tuple(map(str, range(k)))))
    assert r.mean_ranks.sum() == pytest.approx(k * (k + 1) / 2)
    assert 0.0 <= r.kendalls_w <= 1.0 + 1e-12


@settings(max_examples=40, deadline=None)
@given(rows=matrices, data=hst.data())
def test_friedman_permutation_and_shift_invariance(rows, data):
    values = np.array(rows)
    n, k = values.shape
    if np.all(values == values[:, :1]):
        return
    labels = tuple(map(str, range(k)))
    base = friedman(ResultMatrix(values, labels))
    perm = data.draw(hst.permutations(range(k)))
    permuted = friedman(ResultMatrix(values[:, perm], tuple(labels[p] for p in perm)))
    np.testing.assert_allclose(permuted.mean_ranks, base.mean_ranks[perm])
    assert permuted.chi_square == pytest.approx(base.chi_square)
    shift = data.draw(hst.integers(-5, 5))
    block = data.draw(hst.integers(0, n - 1))
    shifted = values.copy()
    shifted[block] += shift
    again = friedman(ResultMatrix(shifted, labels))
    assert again.chi_square == pytest.approx(base.chi_square)


def test_untied_chi_square_from_published_mean_ranks():
    chi2 = friedman_chi_square_from_mean_ranks(TABLE12, 150)
    assert chi2 == pytest.approx(601.7, abs=0.05)
    assert abs(chi2 - 605.0794) / 605.0794 < 0.01


def test_kendall_identity():
    assert kendalls_w(605.0794, 150, 6) == pytest.approx(0.8068, abs=5e-5)


# post hoc


def test_pairwise_std_error():
    assert pairwise_std_error(6, 150) == pytest.approx(0.21602, abs=5e-6)


def _report_from_ranks(ranks, n):
    chi2 = friedman_chi_square_from_mean_ranks(ranks, n)
    return SimpleNamespace(labels=LABELS6, mean_ranks=np.array(ranks), n_blocks=n, alpha=0.05,
                           chi_square=chi2)


def test_posthoc_egbo_gbo_row():
    rep = friedman_posthoc(_report_from_ranks(TABLE12, 150))
    row = rep.lookup("EGBO", "GBO")
    assert row.statistic == pytest.approx(-0.07)
    assert row.std_error == pytest.approx(0.21602, abs=5e-6)
    assert row.std_statistic == pytest.approx(-0.309, abs=0.02)
    assert row.p_value == pytest.approx(0.758, abs=0.02)
    assert row.adj_p_value == 1.0
    assert rep.n_pairs == 15


def test_posthoc_emits_both_orderings():
    rep = friedman_posthoc(_report_from_ranks(TABLE12, 150))
    assert len(rep.rows) == 30
    ab, ba = rep.lookup("EGBO", "ChOA"), rep.lookup("ChOA", "EGBO")
    assert ab.statistic == -ba.statistic and ab.p_value == ba.p_value
    assert all(r.std_error == rep.std_error for r in rep.rows)


def test_bonferroni_cap():
    rep = friedman_posthoc(_report_from_ranks(TABLE12, 150))
    for r in rep.rows:
        assert r.adj_p_value == pytest.approx(min(1.0, 15 * r.p_value))
    raw = 0.758
    assert min(1.0, raw * 15) == 1.0


# Wilcoxon


@pytest.mark.parametrize("w_plus,m,z", [(3763.5, 144, -2.905), (3149.5, 138, -3.498), (3115, 146, -4.397)])
def test_signed_rank_z_from_published_sums(w_plus, m, z):
    assert round(signed_rank_z(w_plus, m), 3) == z


def test_wilcoxon_matches_scipy():
    rng = np.random.default_rng(8)
    a, b = rng.normal(size=40), rng.normal(size=40) + 0.3
    ours = wilcoxon_signed_rank(a, b)
    ref = st.wilcoxon(a, b, zero_method="wilcox", correction=False, method="approx")
    assert ours.p_two_tailed == pytest.approx(ref.pvalue, rel=1e-9)
    assert min(ours.sum_positive, ours.sum_negative) == pytest.approx(ref.statistic)


def test_wilcoxon_counts_and_sign_convention():
    a = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    b = np.array([2.0, 2.0, 1.0, 5.0, 7.0, 6.5, 10.0])
    w = wilcoxon_signed_rank(a, b)
    # negative means a is lower
    assert (w.n_negative, w.n_positive, w.n_ties) == (5, 1, 1)
    assert w.sum_negative + w.sum_positive == 6 * 7 / 2


@settings(max_examples=60, deadline=None)
@given(pairs=hst.lists(hst.tuples(hst.integers(-5, 5), hst.integers(-5, 5)), min_size=5, max_size=40))
def test_wilcoxon_rank_sum_identity(pairs):
    a = np.array([p[0] for p in pairs], dtype=float)
    b = np.array([p[1] for p in pairs], dtype=float)
    m = int(np.count_nonzero(a != b))
    if m < 5:
        with pytest.raises((AllTies, TooFewPairs)):
            wilcoxon_signed_rank(a, b)
        return
    w = wilcoxon_signed_rank(a, b)
    assert w.n_negative + w.n_positive + w.n_ties == len(pairs)
    assert w.sum_negative + w.sum_positive == pytest.approx(m * (m + 1) / 2)
    shifted = wilcoxon_signed_rank(a + 3.0, b + 3.0)
    assert shifted.z == pytest.approx(w.z)


def test_wilcoxon_errors():
    with pytest.raises(AllTies):
        wilcoxon_signed_rank([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
    with pytest.raises(TooFewPairs):
        wilcoxon_signed_rank([1, 2, 3, 4, 5], [0, 1, 3, 4, 5])
    with pytest.raises(StatisticsError):
        wilcoxon_signed_rank([1, 2], [1, 2, 3])


# Levene


def test_levene_hand_example():
    r = levene([[0, 2, 1], [1, 1, 1]], center="mean")
    assert r.statistic == pytest.approx(4.0)
    assert (r.df1, r.df2) == (1, 4)


def test_levene_identical_groups():
    assert levene([[0.1, 0.4, 0.2], [0.1, 0.4, 0.2]]).statistic == pytest.approx(0.0, abs=1e-12)


def test_levene_degrees_of_freedom_at_full_scale():
    rng = np.random.default_rng(2)
    r = levene([rng.normal(size=150) for _ in range(6)], center="median")
    assert (r.df1, r.df2) == (5, 894)


@pytest.mark.parametrize("center,scipy_center", [("mean", "mean"), ("median", "median"), ("trimmed-mean", "trimmed")])
def test_levene_matches_scipy(center, scipy_center):
    rng = np.random.default_rng(4)
    groups = [rng.normal(scale=s, size=25) for s in (1.0, 1.5, 0.7)]
    ours = levene(groups, center=center)
    ref = st.levene(*groups, center=scipy_center, proportiontocut=0.05)
    assert ours.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_levene_errors():
    with pytest.raises(DegenerateInput):
        levene([[1, 1], [2, 2]])
    with pytest.raises(StatisticsError):
        levene([[1, 2, 3]])
    with pytest.raises(StatisticsError):
        levene([[1, 2], [1, 2]], center="mode")


# distribution tails against tabulated critical values


@pytest.mark.parametrize("df,x", [
    (1, 3.841458820694124), (2, 5.991464547107979), (3, 7.814727903251178), (4, 9.487729036781154),
    (5, 11.070497693516351), (6, 12.591587243743977), (7, 14.067140449340169), (8, 15.507313055865453),
    (9, 16.918977604620448), (10, 18.307038053275146),
])
def test_chi_square_tail_table(df, x):
    r = friedman(ResultMatrix(np.tile(np.arange(df + 1.0), (2, 1)), tuple(map(str, range(df + 1)))))
    assert r.df == df
    assert st.chi2.sf(x, df) == pytest.approx(0.05, abs=1e-6)


@pytest.mark.parametrize("z,p", [
    (1.959963984540054, 0.05), (2.5758293035489004, 0.01), (1.6448536269514722, 0.1), (3.2905267314919255, 0.001),
    (0.6744897501960817, 0.5), (1.2815515655446004, 0.2), (2.3263478740408408, 0.02), (1.1503493803760079, 0.25),
    (2.807033768343811, 0.005), (0.0, 1.0),
])
def test_normal_tail_table(z, p):
    rep = friedman_posthoc(SimpleNamespace(labels=("a", "b"), mean_ranks=np.array([1.0 + z, 1.0]), n_blocks=1,
                                           alpha=0.05))
    # with k=2, N=1 the standard error is 1
    assert rep.std_error == pytest.approx(1.0)
    assert rep.lookup("a", "b").p_value == pytest.approx(p, abs=1e-6)


@pytest.mark.parametrize("d1,d2,f", [
    (1, 10, 4.9646027437307145), (2, 10, 4.102821015130399), (5, 894, 2.2241164378248914), (3, 20, 3.0983912121407795),
    (4, 30, 2.6895828736583473), (1, 4, 7.708647422176786), (2, 30, 3.3158295010135014), (6, 60, 2.2540409456722096),
    (10, 100, 1.9267040591269017), (5, 50, 2.4004090495278797),
])
def test_f_tail_table(d1, d2, f):
    assert st.f.sf(f, d1, d2) == pytest.approx(0.05, abs=2e-5)


# report chain


def _records(rows):
    return [SimpleNamespace(algorithm=a, case=c, seed=s, best_itae=v) for a, c, s, v in rows]


def test_result_matrix_drops_incomplete_blocks():
    recs = _records([("x", 1, 0, 1.0), ("y", 1, 0, 2.0), ("x", 1, 1, 1.5), ("y", 1, 1, 0.5), ("x", 2, 0, 3.0)])
    m, dropped = result_matrix(recs)
    assert m.values.tolist() == [[1.0, 2.0], [1.5, 0.5]]
    assert dropped == [(2, 0)]


def test_dominating_algorithm_gets_rank_one(tmp_path):
    rng = np.random.default_rng(0)
    rows = []
    for case in (1, 2):
        for seed in range(6):
            base = rng.uniform(1, 2)
            for j, algo in enumerate(("alpha", "beta", "gamma")):
                rows.append((algo, case, seed, base + (0.0 if algo == "alpha" else rng.uniform(0.1, 1))))
    rep = build_report(_records(rows))
    assert rep.friedman.mean_ranks[0] == 1.0
    paths = write_report(rep, tmp_path)
    names = {p.name for p in paths}
    assert names == {"descriptive.csv", "levene.csv", "wilcoxon.csv", "friedman_ranks.csv", "friedman.json",
                     "pairwise.csv", "stats.json"}
    summary = json.loads((tmp_path / "stats.json").read_text())
    assert summary["friedman"]["df"] == 2
    assert len(summary["wilcoxon"]) == 3
    header = (tmp_path / "pairwise.csv").read_text().splitlines()[0]
    assert header == "sample1,sample2,statistic,std_error,std_statistic,p_value,adj_p_value"


def test_two_algorithms_single_wilcoxon_pair():
    rows = [(a, 1, s, float(s) + (0.5 if a == "b" else 0.0) * (s % 3)) for s in range(10) for a in ("a", "b")]
    rep = build_report(_records(rows))
    assert rep.friedman.df == 1
    assert list(rep.wilcoxon) == [("a", "b")]


def test_degenerate_tests_are_skipped_not_fatal():
    rows = [(a, 1, s, 1.0) for s in range(6) for a in ("a", "b")]
    rep = build_report(_records(rows))
    assert rep.friedman is None
    assert set(rep.errors) >= {"friedman", "wilcoxon:a-b", "levene:mean"}
    assert rep.descriptive[("a", 1)][1] == (1.0, 1.0, 1.0)
