"""Acceptance criteria A1-A7.

Each test prints one ``A<n> PASS|FAIL`` line with the measured values.  The
full-budget runs (A2, A5) and the desk-profile batch (A3) take several
minutes on one core; they are marked ``slow`` but run by default.
"""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from lfc_egbo.harness import RUNS_COLUMNS, ExperimentPlan, run_cell, run_experiment
from lfc_egbo.optimizers import OptimizerConfig
from lfc_egbo.plant import PlantParams
from lfc_egbo.reference import AFTER_50_ITERATIONS, published_gains, published_itae
from lfc_egbo.simulator import SimConfig, evaluate, get_case
from lfc_egbo.statistics import friedman_chi_square_from_mean_ranks, kendalls_w, pairwise_std_error, signed_rank_z

# pinned tolerances
A1_REPLAY_TOL = 0.15
A1_SWEEP_TOL = 0.10
A1_SWEEP_T12 = (0.0433, 0.0867, 0.545)
A1_SWEEP_T_FINAL = (20.0, 30.0, 40.0)
A2_FACTOR = 1.02
A3_SEEDS = 10
A5_GAP = 0.02
A6_BUDGET_S = 300.0

ROOT = Path(__file__).resolve().parent


def verdict(capsys, code, ok, detail):
    with capsys.disabled():
        print(f"\n{code} {'PASS' if ok else 'FAIL'}  {detail}")


def replay_errors(plant, sim, rows=None):
    rows = rows or {c: published_gains(c) for c in range(1, 6)}
    return {c: evaluate(plant, g, get_case(c), sim) / published_itae(c) - 1.0 for c, g in rows.items()}


@pytest.fixture(scope="module")
def full_runs():
    """Seed-0 full-budget runs shared by A2 and A5."""
    plan = ExperimentPlan()
    cells = [("egbo", 1), ("gbo", 1), ("pso", 1), ("egbo", 5)]
    return {cell: run_cell(plan, cell[0], get_case(cell[1]), 0) for cell in cells}


def test_a1_gain_replay(capsys):
    errs = replay_errors(PlantParams(), SimConfig())
    replay_ok = all(abs(e) <= A1_REPLAY_TOL for e in errs.values())
    best_pair, best_worst = None, np.inf
    if not replay_ok:
        for source in ("analytic", "appendix_c"):
            for t12 in A1_SWEEP_T12:
                for t_final in A1_SWEEP_T_FINAL:
                    e = replay_errors(PlantParams(t12=t12, coefficient_source=source), SimConfig(t_final=t_final))
                    worst = max(abs(v) for v in e.values())
                    if worst < best_worst:
                        best_pair, best_worst = (source, t12, t_final), worst
    sweep_ok = best_worst <= A1_SWEEP_TOL
    ok = replay_ok or sweep_ok
    detail = "replay " + " ".join(f"case-{c} {e:+.1%}" for c, e in errs.items())
    if not replay_ok:
        detail += f"; sweep best {best_pair} worst {best_worst:+.3g}"
    verdict(capsys, "A1", ok, detail)
    assert ok, detail


def test_a1_info_corrected_case5_row(capsys):
    """Informational: the case-5 EGBO row with Kd2 taken from its neighbours."""
    gains = list(published_gains(5))
    gains[5] = published_gains(5, "pso")[5]
    err = replay_errors(PlantParams(), SimConfig(), {5: tuple(gains)})[5]
    with capsys.disabled():
        print(f"\nA1-info corrected case-5 Kd2={gains[5]}: {err:+.2%}")
    assert abs(err) <= A1_REPLAY_TOL


@pytest.mark.slow
def test_a2_full_budget_case1(full_runs, capsys):
    lines, ok = [], True
    for algo in ("egbo", "gbo", "pso"):
        record, _ = full_runs[(algo, 1)]
        limit = A2_FACTOR * published_itae(1, algo)
        ok &= record.best_itae <= limit
        lines.append(f"{algo} {record.best_itae:.5f} <= {limit:.5f} ({record.wall_time:.0f} s)")
    verdict(capsys, "A2", ok, "; ".join(lines))
    assert ok


@pytest.mark.slow
def test_a3_desk_ordering(tmp_path, capsys):
    plan = ExperimentPlan(
        algorithms=("egbo", "choa", "sca"),
        cases=(get_case(1),),
        runs_per_cell=A3_SEEDS,
        optimizer=OptimizerConfig(population=50, max_iterations=100),
    )
    result = run_experiment(plan, tmp_path)
    assert not result.failures
    med = {a: float(np.median([r.best_itae for r in result.records if r.algorithm == a])) for a in plan.algorithms}
    ok = med["egbo"] <= med["choa"] and med["egbo"] <= med["sca"]
    verdict(capsys, "A3", ok, "medians over {} seeds: ".format(A3_SEEDS)
            + " ".join(f"{a} {v:.5f}" for a, v in med.items()))
    assert ok


def test_a4_statistics_oracle(capsys):
    z = [round(signed_rank_z(w, m), 3) for w, m in ((3763.5, 144), (3149.5, 138), (3115, 146))]
    se = pairwise_std_error(6, 150)
    w = kendalls_w(605.0794, 150, 6)
    chi2 = friedman_chi_square_from_mean_ranks((4.92, 1.94, 2.01, 3.73, 2.42, 5.98), 150)
    checks = [
        z == [-2.905, -3.498, -4.397],
        abs(se - 0.21602) < 5e-6,
        abs(w - 0.8068) < 5e-5,
        abs(chi2 - 605.0794) / 605.0794 < 0.01,
    ]
    ok = all(checks)
    verdict(capsys, "A4", ok, f"z {z}; SE {se:.5f}; W {w:.4f}; untied chi2 {chi2:.2f}")
    assert ok


@pytest.mark.slow
def test_a5_convergence_gap_case5(full_runs, capsys):
    record, curve = full_runs[("egbo", 5)]
    at50, final = float(curve[49]), float(curve[-1])
    gap = at50 / final - 1.0
    ok = gap <= A5_GAP
    ref50, ref_final = AFTER_50_ITERATIONS["egbo"]
    verdict(capsys, "A5", ok, f"egbo case-5 at 50 {at50:.5f}, at {curve.size} {final:.5f}, gap {gap:.2%} "
            f"(published {ref50} vs {ref_final})")
    assert ok


A6_NODES = [
    "test_plant.py::test_analytic_coefficients_match_finite_differences",
    "test_plant.py::test_matrix_fixed_point",
    "test_plant.py::test_open_loop_fixed_point",
    "test_plant.py::test_area_swap_symmetry_analytic",
    "test_plant.py::test_area_swap_commutes_for_symmetric_gains",
    "test_simulator.py::test_linearity",
    "test_simulator.py::test_dt_halving_converges",
    "test_optimizers.py::test_determinism_by_seed",
    "test_optimizers.py::test_trace_invariants_and_bounds",
    "test_optimizers.py::test_sphere_convergence",
    "test_optimizers.py::test_logistic_map_closure",
    "test_statistics.py::test_friedman_rank_sum_identity",
    "test_statistics.py::test_friedman_permutation_and_shift_invariance",
    "test_statistics.py::test_wilcoxon_rank_sum_identity",
]


def test_a6_property_suites(capsys):
    import time

    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider"] + [str(ROOT / n) for n in A6_NODES],
        capture_output=True, text=True, cwd=ROOT.parent,
    )
    elapsed = time.perf_counter() - start
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and elapsed < A6_BUDGET_S
    verdict(capsys, "A6", ok, f"{len(A6_NODES)} property suites: {tail} ({elapsed:.0f} s)")
    assert ok, proc.stdout[-2000:]


def test_a7_non_reproducibility_note(capsys):
    # wall-clock is measured and stored in place of the published execution times
    ok = "wall_time_s" in RUNS_COLUMNS
    verdict(capsys, "A7", ok, "published execution times and 30-run distributions are not reproducible "
            "(unknown hardware and seeds); runs.csv records measured wall time, A3/A5 cover the orderings")
    assert ok
