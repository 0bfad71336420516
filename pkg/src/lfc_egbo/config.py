"""TOML configuration for simulations and benchmark plans.

Sections (all optional; omitted keys keep their defaults)::

    [plant]            r1, r2, b1, b2, tsg1, tsg2, tt1, tt2, tps1, tps2,
                       kps1, kps2, t12, a12, coefficient_source
    [sim]              dt, t_final, record_stride
    [search_space]     lower, upper            (6-element lists)
    [optimizers]       population, max_iterations
    [optimizers.gbo]   pr
    [optimizers.egbo]  lc0
    [optimizers.pso]   w_max, w_min, c1, c2, v_clamp
    [optimizers.sca]   a
    [optimizers.gwo], [optimizers.choa]        (no parameters)
    [plan]             profile, algorithms, cases, runs_per_cell, base_seed, workers
    [cases.case-N]     w1, w2                  (override or add a load case)

Resolution order: built-in defaults, then the named profile's budget, then
the file, then ``key=value`` overrides with dotted keys
(``sim.t_final=20``).  Unknown sections or keys are rejected.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .harness import PROFILES, ExperimentPlan
from .optimizers import LABELS, ConfigError, EGBOParams, GBOParams, OptimizerConfig, PSOParams, SCAParams
from .plant import PlantParams
from .simulator import LoadCase, SearchSpace, SimConfig, case_catalog

__all__ = ["Settings", "apply_override", "load_settings", "parse_overrides"]

_PLAN_KEYS = {"profile", "algorithms", "cases", "runs_per_cell", "base_seed", "workers"}
_OPT_SUBSECTIONS = {"gbo": GBOParams, "egbo": EGBOParams, "pso": PSOParams, "sca": SCAParams, "gwo": None, "choa": None}


def _field_names(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls)}


@dataclass
class Settings:
    """Fully resolved configuration."""

    plant: PlantParams = field(default_factory=PlantParams)
    sim: SimConfig = field(default_factory=SimConfig)
    space: SearchSpace = field(default_factory=SearchSpace.default)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    cases: dict[int, LoadCase] = field(default_factory=lambda: {c.id: c for c in case_catalog()})
    algorithms: tuple[str, ...] = tuple(sorted(LABELS))
    plan_cases: tuple[int, ...] = (1, 2, 3, 4, 5)
    runs_per_cell: int = 30
    base_seed: int = 0
    workers: int = 1
    profile: str = "full"

    def case(self, key) -> LoadCase:
        if isinstance(key, str):
            key = key.strip().lower().removeprefix("case-").removeprefix("case")
        try:
            return self.cases[int(key)]
        except (KeyError, ValueError, TypeError):
            raise ConfigError(f"unknown load case {key!r}; known: {sorted(self.cases)}") from None

    def plan(self) -> ExperimentPlan:
        return ExperimentPlan(
            algorithms=self.algorithms,
            cases=tuple(self.case(c) for c in self.plan_cases),
            runs_per_cell=self.runs_per_cell,
            base_seed=self.base_seed,
            optimizer=self.optimizer,
            sim=self.sim,
            plant=self.plant,
            space=self.space,
        )


def parse_overrides(items: Iterable[str]) -> dict:
    """``["sim.t_final=20", ...]`` to a nested dict; values are parsed as TOML."""
    tree: dict = {}
    for item in items:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        apply_override(tree, key, _parse_value(raw.strip()))
    return tree


def _parse_value(raw: str) -> Any:
    try:
        return tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        return raw  # bare strings such as algorithm names


def apply_override(tree: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = tree
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {dotted!r} descends into a non-table value")
    node[parts[-1]] = value


def _merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _check_keys(section: str, given: dict, allowed: set[str]) -> None:
    unknown = sorted(set(given) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}; allowed: {', '.join(sorted(allowed))}")


def _build(cls, section: str, values: dict, base=None):
    if not isinstance(values, dict):
        raise ConfigError(f"[{section}] must be a table")
    _check_keys(section, values, _field_names(cls))
    try:
        return dataclasses.replace(base, **values) if base is not None else cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from None


def load_settings(path=None, profile: str | None = None, overrides: Iterable[str] = ()) -> Settings:
    """Resolve defaults, profile, file and overrides into :class:`Settings`."""
    tree: dict = {}
    if path is not None:
        try:
            tree = tomllib.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    tree = _merge(tree, parse_overrides(overrides))

    _check_keys("top level", tree, {"plant", "sim", "search_space", "optimizers", "plan", "cases"})
    plan = tree.get("plan", {})
    _check_keys("plan", plan, _PLAN_KEYS)

    profile = profile or plan.get("profile", "full")
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    prof = PROFILES[profile]

    s = Settings(profile=profile, runs_per_cell=prof.runs_per_cell)
    s.plant = _build(PlantParams, "plant", tree.get("plant", {}))
    s.sim = _build(SimConfig, "sim", tree.get("sim", {}))

    space = tree.get("search_space", {})
    _check_keys("search_space", space, {"lower", "upper"})
    if space:
        default = SearchSpace.default()
        try:
            s.space = SearchSpace(space.get("lower", default.lower), space.get("upper", default.upper))
        except ValueError as exc:
            raise ConfigError(f"[search_space]: {exc}") from None
        if s.space.dimension != 6:
            raise ConfigError(f"[search_space] needs 6 bounds per side, got {s.space.dimension}")

    opt = dict(tree.get("optimizers", {}))
    _check_keys("optimizers", opt, {"population", "max_iterations"} | set(_OPT_SUBSECTIONS))
    blocks = {}
    for name, cls in _OPT_SUBSECTIONS.items():
        sub = opt.pop(name, {})
        if cls is None:
            _check_keys(f"optimizers.{name}", sub, set())
        else:
            blocks[name] = _build(cls, f"optimizers.{name}", sub)
    budget = {"population": prof.population, "max_iterations": prof.max_iterations, **opt}
    try:
        s.optimizer = OptimizerConfig(**budget, **blocks)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[optimizers]: {exc}") from None

    for label, values in tree.get("cases", {}).items():
        try:
            ident = int(str(label).lower().removeprefix("case-"))
        except ValueError:
            raise ConfigError(f"[cases] keys look like case-N, got {label!r}") from None
        base = s.cases.get(ident)
        values = dict(values)
        _check_keys(f"cases.{label}", values, {"w1", "w2"})
        try:
            s.cases[ident] = dataclasses.replace(base, **values) if base else LoadCase(ident, **values)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[cases.{label}]: {exc}") from None

    if "algorithms" in plan:
        algos = plan["algorithms"]
        algos = [algos] if isinstance(algos, str) else list(algos)
        unknown = [a for a in algos if a.lower() not in LABELS]
        if unknown:
            raise ConfigError(f"unknown algorithm(s) {unknown}; choose from {sorted(LABELS)}")
        s.algorithms = tuple(a.lower() for a in algos)
    if "cases" in plan:
        cases = plan["cases"]
        cases = [cases] if isinstance(cases, (int, str)) else list(cases)
        s.plan_cases = tuple(s.case(c).id for c in cases)
    for key in ("runs_per_cell", "base_seed", "workers"):
        if key in plan:
            value = plan[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"[plan] {key} must be an integer, got {value!r}")
            setattr(s, key, value)
    if s.runs_per_cell < 1 or s.workers < 1:
        raise ConfigError("[plan] runs_per_cell and workers must be positive")
    return s
