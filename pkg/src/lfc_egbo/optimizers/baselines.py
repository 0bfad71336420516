"""Textbook baselines: PSO, GWO, SCA and ChOA.

Only the control parameters (inertia range, acceleration constants, SCA's
``a``) are fixed by the benchmark; the update rules are the standard ones.
"""

from __future__ import annotations

import numpy as np

from .base import ObjectiveSpec, OptimizerConfig, RunTrace, _Run, clamp_to_bounds

__all__ = ["run_choa", "run_gwo", "run_pso", "run_sca"]


class _Leaders:
    """The ``k`` best distinct solutions seen so far (GWO/ChOA hierarchy)."""

    def __init__(self, k: int, d: int):
        self.positions = np.zeros((k, d))
        self.fitness = np.full(k, np.inf)

    def update(self, positions: np.ndarray, fitness: np.ndarray) -> None:
        for x, f in zip(positions, fitness):
            # ties with an existing leader do not displace it
            slot = int(np.searchsorted(self.fitness, f, side="right"))
            if slot >= self.fitness.size:
                continue
            self.positions[slot + 1:] = self.positions[slot:-1].copy()
            self.fitness[slot + 1:] = self.fitness[slot:-1].copy()
            self.positions[slot] = x
            self.fitness[slot] = f


def run_pso(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    """Global-best PSO with linearly decreasing inertia and velocity clamping."""
    cfg.require_population(2, "PSO")
    run = _Run("pso", objective, cfg)
    rng, space, p = run.rng, objective.space, cfg.pso
    n, d = cfg.population, space.dimension
    vmax = p.v_clamp * (space.upper - space.lower)

    x = run.initial_positions()
    v = np.zeros((n, d))
    fit = run.evaluate(x)
    pbest, pbest_fit = x.copy(), fit.copy()
    g = int(np.argmin(fit))
    gbest, gbest_fit = x[g].copy(), float(fit[g])

    T = cfg.max_iterations
    for it in range(1, T + 1):
        w = p.w_max - (it - 1) * (p.w_max - p.w_min) / max(T - 1, 1)
        r1 = rng.rand((n, d))
        r2 = rng.rand((n, d))
        v = w * v + p.c1 * r1 * (pbest - x) + p.c2 * r2 * (gbest - x)
        v = np.clip(v, -vmax, vmax)
        x = clamp_to_bounds(x + v, space)
        fit = run.evaluate(x)
        improved = fit < pbest_fit
        pbest[improved] = x[improved]
        pbest_fit[improved] = fit[improved]
        g = int(np.argmin(pbest_fit))
        if pbest_fit[g] < gbest_fit:
            gbest, gbest_fit = pbest[g].copy(), float(pbest_fit[g])
        run.curve[it - 1] = gbest_fit
    return run.finish(gbest, gbest_fit)


def run_gwo(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    """Grey wolf optimizer led by the alpha, beta and delta wolves."""
    cfg.require_population(4, "GWO")
    run = _Run("gwo", objective, cfg)
    rng, space = run.rng, objective.space
    n, d = cfg.population, space.dimension

    x = run.initial_positions()
    leaders = _Leaders(3, d)
    leaders.update(x, run.evaluate(x))

    T = cfg.max_iterations
    for it in range(1, T + 1):
        a = 2.0 - 2.0 * (it - 1) / T
        moves = np.zeros((n, d))
        for leader in leaders.positions:
            A = 2.0 * a * rng.rand((n, d)) - a
            C = 2.0 * rng.rand((n, d))
            moves += leader - A * np.abs(C * leader - x)
        x = clamp_to_bounds(moves / 3.0, space)
        leaders.update(x, run.evaluate(x))
        run.curve[it - 1] = leaders.fitness[0]
    return run.finish(leaders.positions[0], leaders.fitness[0])


def run_sca(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    """Sine cosine algorithm around the best-so-far destination point."""
    cfg.require_population(2, "SCA")
    run = _Run("sca", objective, cfg)
    rng, space = run.rng, objective.space
    n, d = cfg.population, space.dimension
    a = cfg.sca.a

    x = run.initial_positions()
    fit = run.evaluate(x)
    k = int(np.argmin(fit))
    dest, dest_fit = x[k].copy(), float(fit[k])

    T = cfg.max_iterations
    for it in range(1, T + 1):
        r1 = a - it * a / T
        r2 = 2.0 * np.pi * rng.rand((n, d))
        r3 = 2.0 * rng.rand((n, d))
        r4 = rng.rand((n, d))
        gap = np.abs(r3 * dest - x)
        x = np.where(r4 < 0.5, x + r1 * np.sin(r2) * gap, x + r1 * np.cos(r2) * gap)
        x = clamp_to_bounds(x, space)
        fit = run.evaluate(x)
        k = int(np.argmin(fit))
        if fit[k] < dest_fit:
            dest, dest_fit = x[k].copy(), float(fit[k])
        run.curve[it - 1] = dest_fit
    return run.finish(dest, dest_fit)


def run_choa(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    """Chimp optimization with attacker/barrier/chaser/driver leaders.

    ``f`` decays linearly from 2.5 to 0 and the chaotic factor ``m`` follows a
    logistic map per (candidate, dimension).
    """
    cfg.require_population(4, "ChOA")
    run = _Run("choa", objective, cfg)
    rng, space = run.rng, objective.space
    n, d = cfg.population, space.dimension

    x = run.initial_positions()
    leaders = _Leaders(4, d)
    leaders.update(x, run.evaluate(x))
    m = 0.05 + 0.9 * rng.rand((n, d))

    T = cfg.max_iterations
    for it in range(1, T + 1):
        f = 2.5 - 2.5 * (it - 1) / T
        moves = np.zeros((n, d))
        for leader in leaders.positions:
            A = 2.0 * f * rng.rand((n, d)) - f
            C = 2.0 * rng.rand((n, d))
            m = 4.0 * m * (1.0 - m)
            moves += leader - A * np.abs(C * leader - m * x)
        x = clamp_to_bounds(moves / 4.0, space)
        leaders.update(x, run.evaluate(x))
        run.curve[it - 1] = leaders.fitness[0]
    return run.finish(leaders.positions[0], leaders.fitness[0])
