"""Enhanced gradient-based optimizer (EGBO).

Differences from GBO:

* step factors ``F1``/``F2`` come from the candidate's fitness rank, so good
  solutions take small steps and poor ones large steps;
* the two gradient solutions are mixed into the current vector by a
  rank-driven binomial crossover;
* the local escaping operator is replaced by a version anchored on the three
  best solutions and gated by a logistic chaotic map;
* a new vector only replaces its parent when it is better.
"""

from __future__ import annotations

import numpy as np

from .base import ObjectiveSpec, OptimizerConfig, Population, RunTrace, _Run, clamp_to_bounds
from .gbo import gradient_step

__all__ = [
    "egbo_crossover",
    "logistic_map",
    "mleo",
    "rank_adaptive_params",
    "run_egbo",
]


def logistic_map(lc: float) -> float:
    return 4.0 * lc * (1.0 - lc)


def rank_adaptive_params(rank: int, pop_size: int, rng) -> tuple[float, float]:
    """Step factors for the candidate ranked ``rank`` (1 = best).

    Half of the time the factors come from random ranks instead of the
    candidate's own.
    """
    if rng.rand() < 0.5:
        a1 = int(rng.integers(1, pop_size + 1))
        a2 = int(rng.integers(1, pop_size + 1))
        f1 = a1 / pop_size + 0.1 * rng.randn()
        f2 = a2 / pop_size + 0.1 * rng.randn()
    else:
        f1 = rank / pop_size + 0.1 * rng.randn()
        f2 = rank / pop_size + 0.1 * rng.randn()
    return f1, f2


def egbo_crossover(x_current, x_new1, x_new2, rank: int, pop_size: int, rng) -> np.ndarray:
    """Binomial crossover of the two gradient solutions into ``x_current``.

    Dimension ``j_rand`` always inherits from a new vector.
    """
    x_current = np.asarray(x_current, dtype=float)
    d = x_current.size
    pc = rank / pop_size + 0.1 * rng.randn()
    j_rand = int(rng.integers(0, d))
    take = rng.rand(d) < pc
    take[j_rand] = True
    pick_first = rng.rand(d) < 0.5
    donor = np.where(pick_first, x_new1, x_new2)
    return np.where(take, donor, x_current)


def mleo(pop: Population, i: int, candidate: np.ndarray, it: int, max_it: int, lc: float,
         f1: float, f2: float, rng, second_best: np.ndarray, third_best: np.ndarray) -> np.ndarray:
    """Modified local escaping operator, applied when ``rand < lc``.

    Early on the jump is anchored at the third-best solution, later at the
    best; the switch probability decays linearly with the iteration count.
    """
    if not rng.rand() < lc:
        return candidate
    explore = rng.rand() < 0.5 * (1.0 - it / max_it)
    r, a1, a2 = (int(k) for k in rng.distinct(pop.size, 3, i))
    anchor = third_best if explore else pop.best_position
    p = pop.positions
    return anchor + f1 * (second_best - p[r]) + f2 * (p[a1] - p[a2])


def run_egbo(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    cfg.require_population(6, "EGBO")
    run = _Run("egbo", objective, cfg)
    rng, space = run.rng, objective.space
    pos = run.initial_positions()
    pop = Population(pos, run.evaluate(pos))
    n = cfg.population
    lc = cfg.egbo.lc0
    ranks = np.empty(n, dtype=int)
    for it in range(1, cfg.max_iterations + 1):
        order = pop.order()
        ranks[order] = np.arange(1, n + 1)
        second = pop.positions[order[1]].copy()
        third = pop.positions[order[2]].copy()
        worst = pop.positions[order[-1]].copy()
        new = np.empty_like(pop.positions)
        for i in range(n):
            f1, f2 = rank_adaptive_params(ranks[i], n, rng)
            step = gradient_step(pop.positions, i, pop.best_position, worst, f1, f2, rng)
            x = egbo_crossover(pop.positions[i], step.x1, step.x2, ranks[i], n, rng)
            x = mleo(pop, i, x, it, cfg.max_iterations, lc, f1, f2, rng, second, third)
            new[i] = clamp_to_bounds(x, space)
        pop.select(new, run.evaluate(new))
        run.curve[it - 1] = pop.best_fitness
        lc = logistic_map(lc)
    return run.finish(pop.best_position, pop.best_fitness)
