"""Critères d'erreur : RMISE de f̂ (une réplique) et RMSE du lFDR̂."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import numpy.typing as npt

from lfdr_mix.estimation.kernels import density_values
from lfdr_mix.estimation.operators import grid_points
from lfdr_mix.models import (
    EmptyInput,
    FloatArray,
    LengthMismatch,
    NaiveDensity,
    SimulationModel,
    WeightedKernelDensity,
)
from lfdr_mix.simulation.models import true_f_values

DensityLike = WeightedKernelDensity | NaiveDensity | Callable[[FloatArray], FloatArray]


def evaluate(f_hat: DensityLike, x: FloatArray) -> FloatArray:
    """Évalue un estimateur de f ou une fonction vectorisée quelconque."""
    if isinstance(f_hat, (WeightedKernelDensity, NaiveDensity)):
        return density_values(f_hat, x)
    return np.asarray(f_hat(x), dtype=np.float64)


def rmise(f_hat: DensityLike, model: SimulationModel, grid_size: int = 1024) -> float:
    """√∫₀¹ (f̂ − f)², quadrature des milieux (les bornes 0 et 1 ne sont jamais évaluées)."""
    x = grid_points(grid_size)
    diff = evaluate(f_hat, x) - true_f_values(model, x)
    return float(np.sqrt(np.mean(diff * diff)))


def rmse_lfdr(lfdr_hat: npt.ArrayLike, lfdr_true: npt.ArrayLike) -> float:
    """√((1/n) Σ (lFDR̂(x_i) − lFDR(x_i))²)."""
    estimate = np.asarray(lfdr_hat, dtype=np.float64).ravel()
    truth = np.asarray(lfdr_true, dtype=np.float64).ravel()
    if estimate.size != truth.size:
        raise LengthMismatch(f"RMSE : {estimate.size} valeurs estimées pour {truth.size} valeurs vraies")
    if estimate.size == 0:
        raise EmptyInput("RMSE : séquences vides")
    return float(np.sqrt(np.mean((estimate - truth) ** 2)))
