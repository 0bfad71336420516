"""Gradient-based optimizer (GBO).

Each candidate moves by a Newton-like gradient search rule plus a direction
term toward the best solution, followed by the local escaping operator.  The
population is replaced unconditionally every iteration while the best-so-far
solution is tracked separately.

Draw order inside :func:`gradient_step` (relied on by the hand-trace tests):
four member indices, then per-dimension vectors for ``eta``, ``delta``, the
direction term, the auxiliary point, the four ``y1``/``y2`` factors, and the
two new solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import EPS, ObjectiveSpec, OptimizerConfig, Population, RunTrace, _Run, clamp_to_bounds

__all__ = [
    "GradientStep",
    "gbo_candidate_update",
    "gbo_scale_factors",
    "gradient_step",
    "leo",
    "run_gbo",
]


@dataclass
class GradientStep:
    x1: np.ndarray  # solution from the gradient search rule around x_i
    x2: np.ndarray  # solution from the gradient search rule around x_best
    members: np.ndarray  # the four random member indices a1..a4


def gbo_scale_factors(it: int, max_it: int, rng) -> tuple[float, float]:
    """Adaptive ``(F1, F2)`` from the sinusoidal beta/alpha schedule."""
    beta = 0.2 + 1.0 * (1.0 - (it / max_it) ** 3) ** 2
    alpha = abs(beta * math.sin(3.0 * math.pi / 2.0 + math.sin(3.0 * math.pi / 2.0 * beta)))
    f1 = 2.0 * rng.rand() * alpha - alpha
    f2 = 2.0 * rng.rand() * alpha - alpha
    return f1, f2


def gradient_step(positions: np.ndarray, i: int, best: np.ndarray, worst: np.ndarray,
                  f1: float, f2: float, rng, eps: float = EPS) -> GradientStep:
    """The two gradient-search-rule solutions for candidate ``i``."""
    n, d = positions.shape
    x = positions[i]
    a = np.asarray(rng.distinct(n, 4, i))
    xa = positions[a]

    eta = 2.0 * rng.rand(d) * np.abs(xa.mean(axis=0) - x)
    chi = ((best - x) + eta) / 2.0
    delta = rng.rand(d) * np.abs(chi)
    dm = rng.rand(d) * f2 * (best - x)

    u = x - rng.randn(d) * (2.0 * delta * x) / (worst - best + eps) + dm
    mid = (u + x) / 2.0
    y1 = rng.rand(d) * (mid + rng.rand(d) * delta)
    y2 = rng.rand(d) * (mid - rng.rand(d) * delta)
    denom = y1 - y2 + eps

    x1 = x - rng.randn(d) * f1 * (2.0 * delta * x) / denom + dm
    x2 = best - rng.randn(d) * f1 * (2.0 * delta * x) / denom + rng.rand(d) * f2 * (xa[0] - xa[1])
    return GradientStep(x1=x1, x2=x2, members=a)


def gbo_candidate_update(pop: Population, i: int, f1: float, f2: float, rng,
                         space=None, worst: np.ndarray | None = None):
    """Blend of the three GBO solutions for candidate ``i``.

    Returns ``(x_new, step)``; ``step`` carries the intermediate solutions the
    local escaping operator needs.
    """
    x = pop.positions[i]
    d = x.size
    worst = pop.worst_position() if worst is None else worst
    step = gradient_step(pop.positions, i, pop.best_position, worst, f1, f2, rng)
    x3 = x - f1 * (step.x1 - step.x2)
    r1 = rng.rand(d)
    r2 = rng.rand(d)
    x_new = r1 * (r2 * step.x1 + (1.0 - r2) * step.x2) + (1.0 - r1) * x3
    if space is not None:
        x_new = clamp_to_bounds(x_new, space)
    return x_new, step


def leo(pop: Population, i: int, candidate: np.ndarray, step: GradientStep, f1: float,
        pr: float, rng, space=None) -> np.ndarray:
    """Local escaping operator, applied with probability ``pr``."""
    if not rng.rand() < pr:
        return candidate
    to_candidate = rng.rand() < 0.5
    mu1 = 2.0 * rng.rand() - 1.0
    mu2 = 2.0 * rng.rand() - 1.0
    if rng.rand() < 0.5:
        th1, th2, th3 = 2.0 * rng.rand(), rng.rand(), rng.rand()
    else:
        th1 = th2 = th3 = 1.0
    r = int(rng.distinct(pop.size, 1, i)[0])
    best = pop.best_position
    a1, a2 = step.members[0], step.members[1]
    xl = mu1 * (th1 * best - th2 * pop.positions[r]) + mu2 * f1 * (
        th3 * (step.x2 - step.x1) + th2 * (pop.positions[a1] - pop.positions[a2])
    ) / 2.0
    out = (candidate if to_candidate else best) + xl
    if space is not None:
        out = clamp_to_bounds(out, space)
    return out


def run_gbo(objective: ObjectiveSpec, cfg: OptimizerConfig = OptimizerConfig()) -> RunTrace:
    cfg.require_population(6, "GBO")
    run = _Run("gbo", objective, cfg)
    rng, space = run.rng, objective.space
    pos = run.initial_positions()
    pop = Population(pos, run.evaluate(pos))
    n = cfg.population
    for it in range(1, cfg.max_iterations + 1):
        worst = pop.worst_position().copy()
        new = np.empty_like(pop.positions)
        for i in range(n):
            f1, f2 = gbo_scale_factors(it, cfg.max_iterations, rng)
            x, step = gbo_candidate_update(pop, i, f1, f2, rng, space=space, worst=worst)
            new[i] = leo(pop, i, x, step, f1, cfg.gbo.pr, rng, space=space)
        pop.replace(new, run.evaluate(new))
        run.curve[it - 1] = pop.best_fitness
    return run.finish(pop.best_position, pop.best_fitness)
