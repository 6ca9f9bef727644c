"""Banc Monte Carlo : modèles × θ × n × répliques, RMISE de f̂ et RMSE du lFDR̂ par méthode.

La graine de chaque réplique dérive de (master_seed, modèle, θ, n, réplique) via
``numpy.random.SeedSequence`` : le rapport est identique quel que soit le nombre
de workers et l'ordre d'arrivée des résultats.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace

import numpy as np

from lfdr_mix.config.loader import BenchmarkConfig, EstimationConfig
from lfdr_mix.models import LfdrMixError, Method, ModelKind, SimulationModel
from lfdr_mix.pipeline import estimate_theta, fit_sample, select_bandwidth
from lfdr_mix.simulation.metrics import rmise, rmse_lfdr
from lfdr_mix.simulation.models import clip_open, generate_sample, make_model, true_lfdr_values

logger = logging.getLogger(__name__)


def replicate_seed(master_seed: int, model_index: int, theta_index: int, size_index: int, replicate: int) -> int:
    """Graine stable d'une réplique, indépendante de l'ordre d'exécution."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(model_index, theta_index, size_index, replicate))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class Cell:
    """Cellule du plan d'expérience."""

    index: int
    model: SimulationModel
    n: int
    seed_key: tuple[int, int, int]


@dataclass(frozen=True)
class ReplicateTask:
    cell: Cell
    replicate: int
    seed: int
    methods: tuple[Method, ...]
    estimation: EstimationConfig
    rmise_grid_size: int


@dataclass(frozen=True)
class MethodOutcome:
    rmise: float = float("nan")
    rmse: float = float("nan")
    iterations: int = 0
    failed: bool = False


@dataclass(frozen=True)
class ReplicateOutcome:
    cell_index: int
    replicate: int
    theta_hat: float
    methods: dict[str, MethodOutcome]
    wall_time: float


@dataclass(frozen=True)
class BenchmarkRow:
    """Une ligne du rapport : une méthode dans une cellule."""

    model: ModelKind
    theta: float
    n: int
    method: Method
    rmise: float
    rmse: float
    mean_theta_hat: float
    mean_iters: float
    failures: int
    rmise_sd: float
    rmse_sd: float
    replicates: int
    wall_time: float


@dataclass
class BenchmarkReport:
    """Rapport agrégé du banc."""

    rows: list[BenchmarkRow]
    config: BenchmarkConfig
    wall_time: float = 0.0
    failures: dict[str, int] = field(default_factory=dict)

    def row(self, model: ModelKind, theta: float, n: int, method: Method) -> BenchmarkRow:
        for r in self.rows:
            if r.model == model and r.theta == theta and r.n == n and r.method == method:
                return r
        raise KeyError((model, theta, n, method))


def build_cells(config: BenchmarkConfig) -> list[Cell]:
    """Produit cartésien modèles × θ × n dans l'ordre de la configuration."""
    cells: list[Cell] = []
    grid = itertools.product(enumerate(config.models), enumerate(config.thetas), enumerate(config.sample_sizes))
    for index, ((mi, kind), (ti, theta), (ni, n)) in enumerate(grid):
        model = make_model(kind, theta, rho=config.rho, mu=config.mu)
        cells.append(Cell(index=index, model=model, n=n, seed_key=(mi, ti, ni)))
    return cells


def run_replicate(task: ReplicateTask) -> ReplicateOutcome:
    """Une réplique : tirage, θ̂ par bootstrap, ajustement de chaque méthode, erreurs."""
    start = time.perf_counter()
    model = task.cell.model
    sample, _labels = generate_sample(model, task.cell.n, task.seed)
    options = replace(task.estimation, theta="bootstrap", seed=task.seed)
    truth = true_lfdr_values(model, clip_open(sample.values))

    outcomes: dict[str, MethodOutcome] = {}
    try:
        theta = estimate_theta(sample, options)
        bandwidth = select_bandwidth(sample, options)
    except LfdrMixError as e:
        logger.warning("Réplique %d (cellule %d) : échec θ̂/fenêtre : %s", task.replicate, task.cell.index, e)
        failed = {m: MethodOutcome(failed=True) for m in task.methods}
        return ReplicateOutcome(task.cell.index, task.replicate, float("nan"), failed, time.perf_counter() - start)

    for method in task.methods:
        try:
            result = fit_sample(sample, method, options, theta=theta, bandwidth=bandwidth)
            outcomes[method] = MethodOutcome(
                rmise=rmise(result.density, model, task.rmise_grid_size),
                rmse=rmse_lfdr(result.lfdr.lfdr, truth),
                iterations=result.trace.iterations_used if result.trace is not None else 0,
            )
        except LfdrMixError as e:
            logger.warning(
                "Réplique %d (cellule %d) : échec de %s : %s", task.replicate, task.cell.index, method, e
            )
            outcomes[method] = MethodOutcome(failed=True)

    return ReplicateOutcome(task.cell.index, task.replicate, theta.value, outcomes, time.perf_counter() - start)


def _sd(values: list[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def _mean(values: list[float]) -> float:
    return float(np.mean(values)) if values else float("nan")


def _aggregate(
    cells: list[Cell],
    config: BenchmarkConfig,
    results: dict[tuple[int, int], ReplicateOutcome],
) -> list[BenchmarkRow]:
    rows: list[BenchmarkRow] = []
    for cell in cells:
        replicates = [results[(cell.index, r)] for r in range(config.repeats)]
        thetas = [o.theta_hat for o in replicates if np.isfinite(o.theta_hat)]
        wall_time = sum(o.wall_time for o in replicates)
        for method in config.methods:
            ok = [o.methods[method] for o in replicates if not o.methods[method].failed]
            rmises = [m.rmise for m in ok]
            rmses = [m.rmse for m in ok]
            rows.append(
                BenchmarkRow(
                    model=cell.model.kind,
                    theta=cell.model.theta,
                    n=cell.n,
                    method=method,
                    rmise=_mean(rmises),
                    rmse=_mean(rmses),
                    mean_theta_hat=_mean(thetas),
                    mean_iters=_mean([float(m.iterations) for m in ok]),
                    failures=len(replicates) - len(ok),
                    rmise_sd=_sd(rmises),
                    rmse_sd=_sd(rmses),
                    replicates=len(ok),
                    wall_time=wall_time,
                )
            )
    return rows


def run_benchmark(config: BenchmarkConfig, estimation: EstimationConfig | None = None) -> BenchmarkReport:
    """Exécute le plan complet ; un échec de réplique est compté, jamais propagé."""
    estimation = estimation or EstimationConfig()
    start = time.perf_counter()
    cells = build_cells(config)
    tasks = [
        ReplicateTask(
            cell=cell,
            replicate=r,
            seed=replicate_seed(config.master_seed, *cell.seed_key, r),
            methods=tuple(config.methods),
            estimation=estimation,
            rmise_grid_size=config.rmise_grid_size,
        )
        for cell in cells
        for r in range(config.repeats)
    ]
    logger.info(
        "Banc : %d cellule(s) × %d réplique(s) × %d méthode(s), %d worker(s)",
        len(cells),
        config.repeats,
        len(config.methods),
        config.workers,
    )

    results: dict[tuple[int, int], ReplicateOutcome] = {}
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(run_replicate, task) for task in tasks]
            for future in as_completed(futures):
                outcome = future.result()
                results[(outcome.cell_index, outcome.replicate)] = outcome
    else:
        for task in tasks:
            outcome = run_replicate(task)
            results[(outcome.cell_index, outcome.replicate)] = outcome
            if task.replicate == config.repeats - 1:
                logger.info(
                    "Cellule %d/%d terminée (%s, θ=%g, n=%d)",
                    task.cell.index + 1,
                    len(cells),
                    task.cell.model.kind,
                    task.cell.model.theta,
                    task.cell.n,
                )

    rows = _aggregate(cells, config, results)
    failures: dict[str, int] = {}
    for row in rows:
        failures[row.method] = failures.get(row.method, 0) + row.failures
    report = BenchmarkReport(rows=rows, config=config, wall_time=time.perf_counter() - start, failures=failures)
    logger.info("Banc terminé en %.1f s (%d échec(s))", report.wall_time, sum(failures.values()))
    return report
