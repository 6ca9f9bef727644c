"""Moteur itératif commun (kerfdr, msl) : mise à jour des poids a posteriori jusqu'à stabilisation.

À chaque itération s, f̂⁽ˢ⁾ est construit à partir de ω̂⁽ˢ⁻¹⁾ puis les poids sont
remplacés par l'image x ↦ (1 − θ̂)x / (θ̂ + (1 − θ̂)x) de f̂⁽ˢ⁾(X_i) (kerfdr) ou de
N f̂⁽ˢ⁾(X_i) (msl). θ̂ reste fixe pendant toute la boucle.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from lfdr_mix.estimation.kernels import KernelMatrix, kernel_matrix, weighted_kernel_sum
from lfdr_mix.estimation.operators import (
    DEFAULT_GRID_SIZE,
    DEFAULT_POSITIVITY_FLOOR,
    grid_points,
    kl_divergence,
)
from lfdr_mix.models import (
    Bandwidth,
    ConfigError,
    DegenerateSample,
    DegenerateWeights,
    FloatArray,
    GridFunction,
    InvalidTheta,
    IterationRecord,
    IterationTrace,
    KernelSpec,
    PValueSample,
    WeightedKernelDensity,
    ZeroMass,
)

logger = logging.getLogger(__name__)

UpdateRule = Literal["kerfdr", "msl"]
InitMode = Literal["uniform", "half"]

RELATIVE_CHANGE_GUARD = 1e-300
# Au-delà de n² coefficients, la matrice dense de kerfdr est recalculée par blocs à chaque itération
DENSE_CACHE_ENTRIES = 4_000_000


@dataclass
class IterativeConfig:
    """Paramètres de l'algorithme itératif, validés à la construction."""

    rule: UpdateRule
    epsilon: float = 1e-5
    max_iterations: int = 500
    grid_size: int = DEFAULT_GRID_SIZE
    init_seed: int = 0
    init: InitMode = "uniform"
    positivity_floor: float = DEFAULT_POSITIVITY_FLOOR

    def __post_init__(self) -> None:
        if self.rule not in UPDATE_RULES:
            raise ConfigError(f"Règle de mise à jour inconnue : '{self.rule}' (attendu : kerfdr, msl)")
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon doit être > 0 (reçu : {self.epsilon})")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations doit être ≥ 1 (reçu : {self.max_iterations})")
        if self.grid_size < 2:
            raise ConfigError(f"grid_size doit être ≥ 2 (reçu : {self.grid_size})")
        if self.init not in ("uniform", "half"):
            raise ConfigError(f"Initialisation inconnue : '{self.init}' (attendu : uniform, half)")
        if self.positivity_floor < 0.0:
            raise ConfigError(f"positivity_floor doit être ≥ 0 (reçu : {self.positivity_floor})")


@dataclass
class StepResult:
    """Sortie d'une mise à jour : nouveaux poids, critère en f̂⁽ˢ⁾, grille de f̂⁽ˢ⁾ (msl)."""

    weights: FloatArray
    criterion: float
    f_grid: FloatArray | None = None


def posterior_map(theta: float, values: FloatArray) -> FloatArray:
    """x ↦ (1 − θ)x / (θ + (1 − θ)x)."""
    scaled = (1.0 - theta) * values
    return scaled / (theta + scaled)


class WeightUpdate(ABC):
    """Règle de mise à jour ω̂⁽ˢ⁻¹⁾ → ω̂⁽ˢ⁾ pour un échantillon et un θ̂ donnés."""

    normalized = False

    def __init__(
        self,
        sample: PValueSample,
        theta: float,
        spec: KernelSpec,
        h: Bandwidth,
        config: IterativeConfig,
    ) -> None:
        self.sample = sample
        self.theta = theta
        self.spec = spec
        self.h = h
        self.config = config

    @abstractmethod
    def step(self, weights: FloatArray) -> StepResult:
        """Applique une itération de l'algorithme."""


class KerfdrUpdate(WeightUpdate):
    """f̂⁽ˢ⁾(X_i) = Σ_j ω_j K_{j,h}(X_i) / Σ_k ω_k, noyaux non normalisés.

    La matrice K_{j,h}(X_i) est conservée si elle est creuse ou assez petite ; sinon
    chaque itération la reconstruit par blocs de lignes.
    """

    def __init__(
        self,
        sample: PValueSample,
        theta: float,
        spec: KernelSpec,
        h: Bandwidth,
        config: IterativeConfig,
    ) -> None:
        super().__init__(sample, theta, spec, h, config)
        self._matrix: KernelMatrix | None = None
        if spec.compact or sample.n * sample.n <= DENSE_CACHE_ENTRIES:
            self._matrix = kernel_matrix(sample.values, sample.values, spec, h)

    def f_at_observations(self, weights: FloatArray) -> FloatArray:
        total = float(weights.sum())
        if total <= 0.0:
            raise DegenerateWeights("Somme des poids nulle au cours de l'itération kerfdr")
        if self._matrix is None:
            sums = weighted_kernel_sum(self.sample.values, self.sample.values, weights, self.spec, self.h)
        else:
            sums = np.asarray(self._matrix @ weights, dtype=np.float64).ravel()
        return sums / total

    def step(self, weights: FloatArray) -> StepResult:
        f_x = self.f_at_observations(weights)
        mixture = self.theta + (1.0 - self.theta) * f_x
        criterion = float(-np.mean(np.log(mixture)))
        return StepResult(weights=posterior_map(self.theta, f_x), criterion=criterion)


class MslUpdate(WeightUpdate):
    """Maximum de vraisemblance lissée : noyaux K̃ normalisés sur [0, 1], puis N f̂ aux observations.

    La masse de chaque K̃_{i,h} et la ligne de S* en X_i reposent sur la quadrature
    des milieux, ce qui rend la propriété de descente exacte pour l'itération discrète.
    """

    normalized = True

    def __init__(
        self,
        sample: PValueSample,
        theta: float,
        spec: KernelSpec,
        h: Bandwidth,
        config: IterativeConfig,
    ) -> None:
        super().__init__(sample, theta, spec, h, config)
        grid_size = config.grid_size
        kmat = np.asarray(kernel_matrix(sample.values, grid_points(grid_size), spec, h), dtype=np.float64)
        row_sums = kmat.sum(axis=1)
        if np.any(row_sums <= 0.0):
            raise ZeroMass(f"Un noyau K̃ ne charge aucun point de la grille (h={h.value:.6g}, G={grid_size})")
        # Une seule matrice n × G : K̃_{i,h} sur la grille ; la ligne de S* en X_i en est le 1/G
        kmat *= (grid_size / row_sums)[:, None]
        self._components = kmat

    def f_grid(self, weights: FloatArray) -> FloatArray:
        total = float(weights.sum())
        if total <= 0.0:
            raise DegenerateWeights("Somme des poids nulle au cours de l'itération msl")
        return np.asarray((weights / total) @ self._components, dtype=np.float64)

    def step(self, weights: FloatArray) -> StepResult:
        f_grid = self.f_grid(weights)
        log_f = np.log(np.maximum(f_grid, self.config.positivity_floor))
        n_at_x = np.exp((self._components @ log_f) / self.config.grid_size)
        mixture = self.theta + (1.0 - self.theta) * n_at_x
        criterion = float(-np.mean(np.log(mixture)))
        return StepResult(weights=posterior_map(self.theta, n_at_x), criterion=criterion, f_grid=f_grid)


UPDATE_RULES: dict[str, type[WeightUpdate]] = {
    "kerfdr": KerfdrUpdate,
    "msl": MslUpdate,
}


def initial_weights(n: int, config: IterativeConfig) -> FloatArray:
    """ω̂⁰ ~ U([0, 1]) tiré avec ``init_seed``, ou ½ partout en mode ``half``."""
    if config.init == "half":
        return np.full(n, 0.5)
    return np.random.default_rng(config.init_seed).random(n)


@dataclass(frozen=True, eq=False)
class IterativeFit:
    """Estimateur final, trace et poids a posteriori ω̂ ∈ ]0, 1[ de la dernière itération."""

    density: WeightedKernelDensity
    trace: IterationTrace
    weights: FloatArray


def fit_iterative(
    sample: PValueSample,
    theta_hat: float,
    spec: KernelSpec,
    h: Bandwidth,
    config: IterativeConfig,
    initial: npt.ArrayLike | None = None,
) -> IterativeFit:
    """Itère jusqu'à max_i |ω̂_i⁽ˢ⁾ − ω̂_i⁽ˢ⁻¹⁾| / ω̂_i⁽ˢ⁻¹⁾ < ε ou ``max_iterations``.

    Au moins une mise à jour est toujours effectuée ; le critère d'arrêt est testé
    dès la première itération. ``initial`` permet de repartir de poids donnés.
    """
    if not 0.0 < theta_hat < 1.0:
        raise InvalidTheta(f"θ̂={theta_hat} : l'algorithme itératif requiert θ̂ ∈ ]0, 1[")
    if sample.n < 2:
        raise DegenerateSample("L'algorithme itératif requiert au moins 2 observations")
    if config.rule == "msl" and spec.compact:
        raise ConfigError(f"La règle msl requiert un noyau strictement positif (gaussian), reçu : {spec.family}")

    update = UPDATE_RULES[config.rule](sample, theta_hat, spec, h, config)

    if initial is None:
        weights = initial_weights(sample.n, config)
    else:
        weights = np.asarray(initial, dtype=np.float64).ravel().copy()
        if weights.size != sample.n:
            raise ValueError(f"{weights.size} poids initiaux pour {sample.n} observations")

    records: list[IterationRecord] = []
    previous_grid: FloatArray | None = None
    converged = False
    for s in range(1, config.max_iterations + 1):
        result = update.step(weights)
        change = float(np.max(np.abs(result.weights - weights) / np.maximum(weights, RELATIVE_CHANGE_GUARD)))

        kl_step: float | None = None
        mean_weight: float | None = None
        if result.f_grid is not None:
            mean_weight = float(result.weights.mean())
            if previous_grid is not None:
                kl_step = kl_divergence(GridFunction(values=result.f_grid), GridFunction(values=previous_grid))
            previous_grid = result.f_grid

        records.append(IterationRecord(s, result.criterion, change, kl_step, mean_weight))
        logger.debug("Itération %d (%s) : critère=%.12g, variation=%.3g", s, config.rule, result.criterion, change)
        weights = result.weights
        if change < config.epsilon:
            converged = True
            break

    if converged:
        logger.info("%s : convergence en %d itérations", config.rule, len(records))
    else:
        logger.warning(
            "%s : pas de convergence après %d itérations (variation=%.3g, ε=%.3g)",
            config.rule,
            len(records),
            records[-1].max_relative_change,
            config.epsilon,
        )

    total = float(weights.sum())
    if total <= 0.0:
        raise DegenerateWeights("Somme des poids finaux nulle")
    density = WeightedKernelDensity(
        centers=sample.values,
        weights=weights / total,
        spec=spec,
        h=h,
        normalized=update.normalized,
    )
    return IterativeFit(density=density, trace=IterationTrace(records=records, converged=converged), weights=weights)


def run_iterative(
    sample: PValueSample,
    theta_hat: float,
    spec: KernelSpec,
    h: Bandwidth,
    config: IterativeConfig,
    initial: npt.ArrayLike | None = None,
) -> tuple[WeightedKernelDensity, IterationTrace]:
    """Mélange final et trace complète (voir ``fit_iterative``)."""
    fit = fit_iterative(sample, theta_hat, spec, h, config, initial)
    return fit.density, fit.trace
