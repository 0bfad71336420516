"""Seeded benchmark experiments: algorithms x load cases x runs.

Results are appended to ``runs.csv`` and ``convergence.csv`` as each cell
finishes, so an interrupted benchmark resumes by skipping cells already on
disk.  ``manifest.json`` carries the resolved plan and any failed cells.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import platform
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .optimizers import LABELS, ConfigError, ObjectiveSpec, OptimizerConfig, RunTrace, get_algorithm
from .plant import PlantParams
from .simulator import LoadCase, SearchSpace, SimConfig, case_catalog, evaluate

__all__ = [
    "CONVERGENCE_COLUMNS",
    "GAIN_COLUMNS",
    "PROFILES",
    "RUNS_COLUMNS",
    "CellSummary",
    "ConvergenceRow",
    "ExperimentPlan",
    "ExperimentResult",
    "PlanMismatch",
    "Profile",
    "RunRecord",
    "convergence_report",
    "convergence_series",
    "make_objective",
    "read_convergence_csv",
    "read_manifest",
    "read_runs_csv",
    "run_cell",
    "run_experiment",
    "summarize",
    "write_convergence_report",
    "write_convergence_series",
    "write_summary",
]

log = logging.getLogger(__name__)

GAIN_COLUMNS = ("kp1", "ki1", "kd1", "kp2", "ki2", "kd2")
RUNS_COLUMNS = ("algorithm", "case", "seed", "best_itae", "wall_time_s", "evaluations") + GAIN_COLUMNS
CONVERGENCE_COLUMNS = ("algorithm", "case", "seed", "iteration", "best_fitness")


@dataclass(frozen=True)
class Profile:
    population: int
    max_iterations: int
    runs_per_cell: int


PROFILES = {
    "desk": Profile(population=50, max_iterations=100, runs_per_cell=5),
    "full": Profile(population=100, max_iterations=500, runs_per_cell=30),
}


class PlanMismatch(ConfigError):
    """An output directory holds results produced under a different plan."""


@dataclass(frozen=True)
class ExperimentPlan:
    algorithms: tuple[str, ...] = tuple(sorted(LABELS))
    cases: tuple[LoadCase, ...] = tuple(case_catalog())
    runs_per_cell: int = 30
    base_seed: int = 0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    plant: PlantParams = field(default_factory=PlantParams)
    space: SearchSpace = field(default_factory=SearchSpace.default)

    def __post_init__(self):
        if self.runs_per_cell < 1:
            raise ConfigError(f"runs_per_cell must be positive, got {self.runs_per_cell}")
        for name in self.algorithms:
            get_algorithm(name)
        ids = [c.id for c in self.cases]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate case ids in plan: {ids}")
        object.__setattr__(self, "algorithms", tuple(a.lower() for a in self.algorithms))
        object.__setattr__(self, "cases", tuple(self.cases))

    def seed(self, run_index: int) -> int:
        return self.base_seed + run_index

    def cells(self) -> list[tuple[str, LoadCase, int]]:
        return [
            (algo, case, self.seed(r))
            for algo in self.algorithms
            for case in self.cases
            for r in range(self.runs_per_cell)
        ]

    def case_by_id(self, ident: int) -> LoadCase:
        for c in self.cases:
            if c.id == ident:
                return c
        raise KeyError(ident)

    def settings(self) -> dict:
        """Everything that affects a cell's result, excluding the cell list."""
        return {
            "optimizer": _jsonable(dataclasses.asdict(dataclasses.replace(self.optimizer, seed=0))),
            "sim": dataclasses.asdict(self.sim),
            "plant": dataclasses.asdict(self.plant),
            "search_space": {"lower": self.space.lower.tolist(), "upper": self.space.upper.tolist()},
            "cases": {c.label: {"w1": c.w1, "w2": c.w2} for c in self.cases},
        }

    def to_dict(self) -> dict:
        d = self.settings()
        d["optimizer"].pop("seed")
        d["plan"] = {
            "algorithms": list(self.algorithms),
            "cases": [c.id for c in self.cases],
            "runs_per_cell": self.runs_per_cell,
            "base_seed": self.base_seed,
        }
        return d


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    case: int
    seed: int
    best_itae: float
    wall_time: float
    evaluations: int
    gains: tuple[float, ...]

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.algorithm, self.case, self.seed)

    def row(self) -> list:
        return [self.algorithm, self.case, self.seed, repr(self.best_itae), repr(self.wall_time),
                self.evaluations] + [repr(g) for g in self.gains]


def make_objective(plant: PlantParams, case: LoadCase, sim: SimConfig,
                   space: SearchSpace | None = None) -> ObjectiveSpec:
    """ITAE of a gain vector for one load case."""
    space = SearchSpace.default() if space is None else space

    def _eval(x: np.ndarray) -> float:
        return evaluate(plant, x, case, sim)

    return ObjectiveSpec(space=space, eval=_eval)


def run_cell(plan: ExperimentPlan, algorithm: str, case: LoadCase, seed: int) -> tuple[RunRecord, np.ndarray]:
    """One seeded optimization; returns the record and its convergence curve."""
    run = get_algorithm(algorithm)
    cfg = dataclasses.replace(plan.optimizer, seed=seed)
    trace: RunTrace = run(make_objective(plan.plant, case, plan.sim, plan.space), cfg)
    record = RunRecord(
        algorithm=algorithm,
        case=case.id,
        seed=seed,
        best_itae=trace.final_fitness,
        wall_time=trace.wall_time,
        evaluations=trace.evaluations,
        gains=tuple(float(g) for g in trace.final_gains),
    )
    return record, trace.best_fitness_per_iteration


def _cell_task(args):
    plan, algorithm, case, seed = args
    try:
        return "ok", run_cell(plan, algorithm, case, seed)
    except Exception as exc:  # reported per cell, the batch carries on
        return "error", (f"{type(exc).__name__}: {exc}", traceback.format_exc())


@dataclass
class ExperimentResult:
    records: list[RunRecord]
    new_records: int
    failures: list[dict]
    out_dir: Path | None = None


def read_manifest(out_dir) -> dict | None:
    path = Path(out_dir) / "manifest.json"
    if not path.exists():
        return None
    return json.loads(path.read_text())


def _write_manifest(out_dir: Path, plan: ExperimentPlan, failures: list[dict], status: str) -> None:
    manifest = {
        "plan": plan.to_dict(),
        "status": status,
        "failures": failures,
        "versions": {"lfc_egbo": __version__, "numpy": np.__version__, "python": platform.python_version()},
        "written_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    path = out_dir / "manifest.json"
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(manifest, indent=2) + "\n")
    tmp.replace(path)


def _open_append(path: Path, header: Sequence[str]):
    new = not path.exists() or path.stat().st_size == 0
    fh = path.open("a", newline="")
    writer = csv.writer(fh)
    if new:
        writer.writerow(header)
        fh.flush()
    return fh, writer


def run_experiment(plan: ExperimentPlan, out_dir=None, workers: int = 1,
                   progress: Callable[[int, int, RunRecord | None], None] | None = None) -> ExperimentResult:
    """Run every (algorithm, case, seed) cell of the plan.

    With ``out_dir`` set, cells already present in ``runs.csv`` are skipped
    and new ones are appended as they finish.  Resuming under a plan whose
    settings differ from the stored manifest raises :class:`PlanMismatch`.
    Failed cells are listed in the manifest and do not stop the batch.
    """
    done: dict[tuple, RunRecord] = {}
    out = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        previous = read_manifest(out)
        if previous is not None:
            stored = {k: v for k, v in previous["plan"].items() if k != "plan"}
            current = {k: v for k, v in plan.to_dict().items() if k != "plan"}
            if json.loads(json.dumps(stored)) != json.loads(json.dumps(current)):
                raise PlanMismatch(f"{out} holds results from a different plan; use a fresh output directory")
        runs_path = out / "runs.csv"
        if runs_path.exists():
            for r in read_runs_csv(runs_path):
                done[r.key] = r

    wanted = plan.cells()
    todo = [(a, c, s) for a, c, s in wanted if (a, c.id, s) not in done]
    failures: list[dict] = []
    new: list[RunRecord] = []
    total = len(wanted)
    finished = total - len(todo)

    fh_runs = fh_conv = None
    w_runs = w_conv = None
    if out is not None:
        _write_manifest(out, plan, failures, "running")
        fh_runs, w_runs = _open_append(out / "runs.csv", RUNS_COLUMNS)
        fh_conv, w_conv = _open_append(out / "convergence.csv", CONVERGENCE_COLUMNS)

    def _store(cell, status, payload):
        nonlocal finished
        algorithm, case, seed = cell
        finished += 1
        if status != "ok":
            message, tb = payload
            log.error("cell %s %s seed %d failed: %s", algorithm, case.label, seed, message)
            log.debug(tb)
            failures.append({"algorithm": algorithm, "case": case.id, "seed": seed, "error": message})
            if progress:
                progress(finished, total, None)
            return
        record, curve = payload
        new.append(record)
        if w_runs is not None:
            # convergence first: a row in runs.csv marks the cell complete
            w_conv.writerows(
                [algorithm, case.id, seed, k + 1, repr(float(v))] for k, v in enumerate(curve)
            )
            fh_conv.flush()
            w_runs.writerow(record.row())
            fh_runs.flush()
        if progress:
            progress(finished, total, record)

    try:
        if workers > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(_cell_task, (plan,) + cell): cell for cell in todo}
                for fut in as_completed(futures):
                    _store(futures[fut], *fut.result())
        else:
            for cell in todo:
                _store(cell, *_cell_task((plan,) + cell))
    finally:
        if fh_runs is not None:
            fh_runs.close()
            fh_conv.close()
            _write_manifest(out, plan, failures, "complete" if not failures else "failed-cells")

    records = list(done.values()) + new
    order = {cell: k for k, cell in enumerate((a, c.id, s) for a, c, s in wanted)}
    records = sorted((r for r in records if r.key in order), key=lambda r: order[r.key])
    return ExperimentResult(records=records, new_records=len(new), failures=failures, out_dir=out)


def read_runs_csv(path) -> list[RunRecord]:
    """Parse ``runs.csv``; a header that does not match the schema raises ``ValueError``."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RUNS_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(RUNS_COLUMNS)}, got {header}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RUNS_COLUMNS):
                raise ValueError(f"{path}:{lineno}: expected {len(RUNS_COLUMNS)} fields, got {len(row)}")
            try:
                out.append(RunRecord(
                    algorithm=row[0],
                    case=int(row[1]),
                    seed=int(row[2]),
                    best_itae=float(row[3]),
                    wall_time=float(row[4]),
                    evaluations=int(row[5]),
                    gains=tuple(float(v) for v in row[6:]),
                ))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def read_convergence_csv(path) -> dict[tuple[str, int, int], np.ndarray]:
    """Curves keyed by ``(algorithm, case, seed)``, indexed by iteration - 1."""
    points: dict[tuple, list[tuple[int, float]]] = {}
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CONVERGENCE_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(CONVERGENCE_COLUMNS)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                key = (row[0], int(row[1]), int(row[2]))
                points.setdefault(key, []).append((int(row[3]), float(row[4])))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    curves = {}
    for key, pts in points.items():
        pts.sort()
        curves[key] = np.array([v for _, v in pts])
    return curves


@dataclass(frozen=True)
class CellSummary:
    algorithm: str
    case: int
    runs: int
    best: float
    worst: float
    mean: float
    best_seed: int
    best_gains: tuple[float, ...]


def summarize(records: Iterable[RunRecord]) -> list[CellSummary]:
    """Best / worst / mean ITAE per (algorithm, case), plus the best run's gains.

    Ties for the best run go to the lowest seed, so the result does not
    depend on record order.
    """
    cells: dict[tuple[str, int], list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.algorithm, r.case), []).append(r)
    out = []
    for (algo, case) in sorted(cells, key=lambda k: (k[1], k[0].lower())):
        rs = sorted(cells[(algo, case)], key=lambda r: r.seed)
        values = np.array([r.best_itae for r in rs])
        top = min(rs, key=lambda r: (r.best_itae, r.seed))
        out.append(CellSummary(algo, case, len(rs), float(values.min()), float(values.max()),
                               float(np.sort(values).mean()), top.seed, top.gains))
    return out


def _write_rows(path: Path, header: Sequence[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def write_summary(summary: Sequence[CellSummary], out_dir) -> list[Path]:
    """``summary.csv`` (best/worst/mean per cell) and ``best_gains.csv``."""
    out = Path(out_dir)
    return [
        _write_rows(out / "summary.csv", ("algorithm", "case", "runs", "best", "worst", "mean"),
                    [(s.algorithm, s.case, s.runs, s.best, s.worst, s.mean) for s in summary]),
        _write_rows(out / "best_gains.csv", ("algorithm", "case", "seed", "best_itae") + GAIN_COLUMNS,
                    [(s.algorithm, s.case, s.best_seed, s.best) + tuple(s.best_gains) for s in summary]),
    ]


@dataclass(frozen=True)
class ConvergenceRow:
    algorithm: str
    case: int
    seed: int
    first_k: int
    fitness_at_k: float
    final_fitness: float
    time_to_k: float
    wall_time: float
    truncated: bool  # first_k exceeded the recorded curve


def convergence_report(records: Iterable[RunRecord], curves: dict, case: int, first_k: int = 50) -> list[ConvergenceRow]:
    """Fitness after ``first_k`` iterations against the final value, per algorithm.

    Each algorithm is represented by its best run on ``case``.  Time to
    ``first_k`` is the run's wall time scaled by the share of objective
    evaluations spent by then (initial population plus one per candidate per
    iteration).
    """
    if first_k < 1:
        raise ValueError(f"first_k must be positive, got {first_k}")
    best: dict[str, RunRecord] = {}
    for r in records:
        if r.case != case or r.key not in curves:
            continue
        cur = best.get(r.algorithm)
        if cur is None or (r.best_itae, r.seed) < (cur.best_itae, cur.seed):
            best[r.algorithm] = r
    out = []
    for algo in sorted(best, key=str.lower):
        r = best[algo]
        curve = curves[r.key]
        n_iter = curve.size
        k = min(first_k, n_iter)
        share = (1 + k) / (1 + n_iter)
        out.append(ConvergenceRow(algo, case, r.seed, k, float(curve[k - 1]), float(curve[-1]),
                                  r.wall_time * share, r.wall_time, first_k > n_iter))
    return out


def write_convergence_report(rows: Sequence[ConvergenceRow], path) -> Path:
    return _write_rows(
        Path(path),
        ("algorithm", "case", "seed", "first_k", "fitness_at_k", "final_fitness", "time_to_k_s", "wall_time_s",
         "truncated"),
        [(r.algorithm, r.case, r.seed, r.first_k, r.fitness_at_k, r.final_fitness, r.time_to_k, r.wall_time,
          int(r.truncated)) for r in rows],
    )


def convergence_series(curves: dict) -> dict[tuple[str, int], dict[str, np.ndarray]]:
    """Per (algorithm, case): iteration-wise median and best over runs."""
    grouped: dict[tuple[str, int], list[np.ndarray]] = {}
    for (algo, case, _seed), curve in sorted(curves.items()):
        grouped.setdefault((algo, case), []).append(curve)
    out = {}
    for key, cs in grouped.items():
        n = min(c.size for c in cs)
        stack = np.vstack([c[:n] for c in cs])
        out[key] = {"median": np.median(stack, axis=0), "best": stack.min(axis=0), "runs": len(cs)}
    return out


def write_convergence_series(series: dict, path) -> Path:
    rows = []
    for (algo, case), s in sorted(series.items(), key=lambda kv: (kv[0][1], kv[0][0].lower())):
        for k, (med, best) in enumerate(zip(s["median"], s["best"]), start=1):
            rows.append((algo, case, k, float(med), float(best)))
    return _write_rows(Path(path), ("algorithm", "case", "iteration", "median_fitness", "best_fitness"), rows)
