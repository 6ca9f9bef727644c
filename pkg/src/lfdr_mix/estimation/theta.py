"""Estimation de la proportion de nulles θ (Schweder–Spjøtvoll, λ choisi par bootstrap)."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from lfdr_mix.models import EmptyGrid, FloatArray, InvalidLambda, PValueSample, ThetaEstimate

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA_GRID: tuple[float, ...] = tuple(round(0.05 * k, 2) for k in range(1, 20))
DEFAULT_BOOTSTRAP_REPLICATES = 100
# Quantile de la courbe λ ↦ θ̂(λ) servant de cible au bootstrap
REFERENCE_QUANTILE = 0.1


def _check_lambda(lam: float) -> None:
    if not 0.0 <= lam < 1.0:
        raise InvalidLambda(f"λ={lam} hors de [0, 1)")


def _theta_curve(sorted_values: FloatArray, grid: FloatArray) -> FloatArray:
    """min(1, #{X_i > λ} / (n(1 − λ))) pour chaque λ, sur un échantillon trié."""
    n = sorted_values.size
    above = n - np.searchsorted(sorted_values, grid, side="right")
    return np.minimum(1.0, above / (n * (1.0 - grid)))


def reference_theta(curve: FloatArray) -> float:
    """Cible du bootstrap : quantile à 10 % des θ̂(λ) de la grille."""
    return float(np.quantile(curve, REFERENCE_QUANTILE))


def theta_at_lambda(sample: PValueSample, lam: float) -> ThetaEstimate:
    """θ̂(λ) = #{X_i > λ} / (n(1 − λ)), tronqué à [0, 1]."""
    _check_lambda(lam)
    value = float(_theta_curve(np.sort(sample.values), np.array([lam]))[0])
    return ThetaEstimate(value=value, lambda_=float(lam), method="fixed_lambda")


def bootstrap_theta(
    sample: PValueSample,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    replicates: int = DEFAULT_BOOTSTRAP_REPLICATES,
    seed: int = 0,
) -> ThetaEstimate:
    """Choix de λ par bootstrap (Storey 2002).

    λ* minimise (1/B) Σ_b (θ̂⁽ᵇ⁾(λ) − θ̂_ref)², où θ̂_ref est le quantile à 10 % de λ ↦ θ̂(λ)
    (comme dans le paquet qvalue) ; en cas d'égalité le plus petit λ est retenu.
    Chaque réplique b tire ses indices d'un flux aléatoire indépendant dérivé de (seed, b).
    """
    if len(lambda_grid) == 0:
        raise EmptyGrid("La grille de λ est vide")
    for lam in lambda_grid:
        _check_lambda(lam)
    if replicates < 1:
        raise ValueError(f"Nombre de répliques bootstrap invalide : {replicates}")

    grid = np.sort(np.asarray(lambda_grid, dtype=np.float64))
    values = sample.values
    n = sample.n
    curve = _theta_curve(np.sort(values), grid)
    target = reference_theta(curve)

    mse = np.zeros(grid.size, dtype=np.float64)
    for child in np.random.SeedSequence(seed).spawn(replicates):
        rng = np.random.default_rng(child)
        resample = np.sort(values[rng.integers(0, n, size=n)])
        mse += (_theta_curve(resample, grid) - target) ** 2
    mse /= replicates

    best = int(np.argmin(mse))
    logger.debug("Bootstrap θ : λ*=%.3g, MSE=%.3g", grid[best], mse[best])
    return ThetaEstimate(value=float(curve[best]), lambda_=float(grid[best]), method="bootstrap")


def fixed_theta(value: float) -> ThetaEstimate:
    """θ imposé par l'utilisateur (pas d'estimation)."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"θ={value} hors de [0, 1]")
    return ThetaEstimate(value=float(value), lambda_=float("nan"), method="fixed")
