"""Population-based optimizers over a box-constrained objective."""

from .base import (
    ConfigError,
    EGBOParams,
    GBOParams,
    ObjectiveSpec,
    OptimizerConfig,
    PSOParams,
    Population,
    RngStream,
    RunTrace,
    SCAParams,
    clamp_to_bounds,
)
from .baselines import run_choa, run_gwo, run_pso, run_sca
from .egbo import egbo_crossover, logistic_map, mleo, rank_adaptive_params, run_egbo
from .gbo import gbo_candidate_update, gbo_scale_factors, gradient_step, leo, run_gbo

ALGORITHMS = {
    "choa": run_choa,
    "egbo": run_egbo,
    "gbo": run_gbo,
    "gwo": run_gwo,
    "pso": run_pso,
    "sca": run_sca,
}

# display names used in reports
LABELS = {"choa": "ChOA", "egbo": "EGBO", "gbo": "GBO", "gwo": "GWO", "pso": "PSO", "sca": "SCA"}


def get_algorithm(name: str):
    try:
        return ALGORITHMS[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None


__all__ = [
    "ALGORITHMS",
    "LABELS",
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
    "egbo_crossover",
    "gbo_candidate_update",
    "gbo_scale_factors",
    "get_algorithm",
    "gradient_step",
    "leo",
    "logistic_map",
    "mleo",
    "rank_adaptive_params",
    "run_choa",
    "run_egbo",
    "run_gbo",
    "run_gwo",
    "run_pso",
    "run_sca",
]
