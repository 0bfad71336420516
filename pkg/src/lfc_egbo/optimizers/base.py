"""Shared pieces of the bounded-minimisation framework."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..simulator import SearchSpace

__all__ = [
    "ConfigError",
    "EGBOParams",
    "GBOParams",
    "ObjectiveSpec",
    "OptimizerConfig",
    "PSOParams",
    "Population",
    "RngStream",
    "RunTrace",
    "SCAParams",
    "clamp_to_bounds",
]

EPS = 1e-8


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ObjectiveSpec:
    """A box-constrained objective; lower is better."""

    space: SearchSpace
    eval: Callable[[np.ndarray], float]

    @property
    def dimension(self) -> int:
        return self.space.dimension


@dataclass(frozen=True)
class GBOParams:
    pr: float = 0.5


@dataclass(frozen=True)
class EGBOParams:
    lc0: float = 0.7


@dataclass(frozen=True)
class PSOParams:
    w_max: float = 0.9
    w_min: float = 0.2
    c1: float = 2.0
    c2: float = 2.0
    v_clamp: float = 0.2  # fraction of the box width


@dataclass(frozen=True)
class SCAParams:
    a: float = 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    population: int = 100
    max_iterations: int = 500
    seed: int = 0
    gbo: GBOParams = field(default_factory=GBOParams)
    egbo: EGBOParams = field(default_factory=EGBOParams)
    pso: PSOParams = field(default_factory=PSOParams)
    sca: SCAParams = field(default_factory=SCAParams)

    def __post_init__(self):
        if self.population < 1:
            raise ConfigError(f"population must be positive, got {self.population}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be positive, got {self.max_iterations}")
        if not 0.0 < self.egbo.lc0 < 1.0:
            raise ConfigError(f"egbo.lc0 must lie in (0, 1), got {self.egbo.lc0}")

    def require_population(self, minimum: int, algorithm: str) -> None:
        if self.population < minimum:
            raise ConfigError(f"{algorithm} needs a population of at least {minimum}, got {self.population}")


class RngStream:
    """Seeded draws used by every optimizer.

    Vectors are drawn with ``size=d``.  Tests substitute a scripted object with
    the same four methods to replay hand-computed traces.
    """

    def __init__(self, seed: int):
        self._gen = np.random.default_rng(seed)

    def rand(self, size=None):
        return self._gen.random(size)

    def randn(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, low: int, high: int, size=None):
        """Uniform integers in ``[low, high)``."""
        return self._gen.integers(low, high, size=size)

    def distinct(self, n: int, k: int, exclude: int) -> np.ndarray:
        """``k`` distinct indices from ``range(n)`` without ``exclude``."""
        pool = np.delete(np.arange(n), exclude)
        return self._gen.choice(pool, size=k, replace=False)


def clamp_to_bounds(v, space: SearchSpace) -> np.ndarray:
    return np.clip(np.asarray(v, dtype=float), space.lower, space.upper)


@dataclass
class RunTrace:
    algorithm: str
    seed: int
    best_fitness_per_iteration: np.ndarray
    final_gains: np.ndarray
    final_fitness: float
    wall_time: float
    evaluations: int
    evaluations_per_iteration: int = 0
    initial_evaluations: int = 0


class Population:
    """Candidates, their fitness, and the best-so-far solution.

    :meth:`replace` swaps in a new generation unconditionally, so the global
    best is kept separately from the current members; :meth:`select` keeps
    each member's better version.
    """

    def __init__(self, positions: np.ndarray, fitness: np.ndarray):
        self.positions = positions
        self.fitness = fitness
        k = int(np.argmin(fitness))
        self.best_position = positions[k].copy()
        self.best_fitness = float(fitness[k])

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def replace(self, positions: np.ndarray, fitness: np.ndarray) -> None:
        self.positions = positions
        self.fitness = fitness
        k = int(np.argmin(fitness))
        if fitness[k] < self.best_fitness:
            self.best_fitness = float(fitness[k])
            self.best_position = positions[k].copy()

    def select(self, positions: np.ndarray, fitness: np.ndarray) -> None:
        """Keep-if-better replacement, member by member."""
        better = fitness < self.fitness
        merged_pos = np.where(better[:, None], positions, self.positions)
        merged_fit = np.where(better, fitness, self.fitness)
        self.replace(merged_pos, merged_fit)

    def order(self) -> np.ndarray:
        """Indices sorted by ascending fitness (stable)."""
        return np.argsort(self.fitness, kind="stable")

    def worst_position(self) -> np.ndarray:
        return self.positions[int(np.argmax(self.fitness))]


class _Run:
    """Evaluation bookkeeping shared by the run loops."""

    def __init__(self, name: str, objective: ObjectiveSpec, cfg: OptimizerConfig):
        self.name = name
        self.objective = objective
        self.cfg = cfg
        self.rng = RngStream(cfg.seed)
        self.evaluations = 0
        self.curve = np.empty(cfg.max_iterations)
        self.started = time.perf_counter()

    def evaluate(self, positions: np.ndarray) -> np.ndarray:
        out = np.empty(positions.shape[0])
        for k, x in enumerate(positions):
            out[k] = float(self.objective.eval(x))
        self.evaluations += positions.shape[0]
        return out

    def initial_positions(self) -> np.ndarray:
        space = self.objective.space
        n, d = self.cfg.population, space.dimension
        return space.lower + self.rng.rand((n, d)) * (space.upper - space.lower)

    def finish(self, best_position: np.ndarray, best_fitness: float) -> RunTrace:
        n = self.cfg.population
        return RunTrace(
            algorithm=self.name,
            seed=self.cfg.seed,
            best_fitness_per_iteration=self.curve,
            final_gains=np.asarray(best_position, dtype=float).copy(),
            final_fitness=float(best_fitness),
            wall_time=time.perf_counter() - self.started,
            evaluations=self.evaluations,
            evaluations_per_iteration=n,
            initial_evaluations=n,
        )
