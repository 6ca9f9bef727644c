"""Estimateurs directs de f : estimateur naïf et noyau à pondération aléatoire (rwk)."""

from __future__ import annotations

import logging

import numpy as np

from lfdr_mix.estimation.kernels import kde, loo_kde_all
from lfdr_mix.models import (
    Bandwidth,
    DegenerateWeights,
    KernelSpec,
    NaiveDensity,
    PosteriorWeights,
    PValueSample,
    WeightedKernelDensity,
)

logger = logging.getLogger(__name__)


def _check_theta(theta_hat: float) -> None:
    if not 0.0 <= theta_hat <= 1.0:
        raise ValueError(f"θ̂={theta_hat} hors de [0, 1]")


def rwk_weights(sample: PValueSample, theta_hat: float, spec: KernelSpec, h: Bandwidth) -> PosteriorWeights:
    """τ̂_i = clamp(1 − θ̂ / g̃_n(X_i), 0, 1) avec g̃_n leave-one-out."""
    _check_theta(theta_hat)
    loo = loo_kde_all(sample, spec, h)
    if not np.any(loo > 0.0):
        raise DegenerateWeights(
            f"Estimation leave-one-out nulle en toutes les observations (h={h.value:.6g}, noyau {spec.family})"
        )
    if theta_hat == 0.0:
        return PosteriorWeights(tau=np.ones(sample.n))

    tau = np.zeros(sample.n, dtype=np.float64)
    positive = loo > 0.0
    tau[positive] = 1.0 - theta_hat / loo[positive]
    tau = np.clip(tau, 0.0, 1.0)
    logger.debug("Poids rwk : %d/%d observations de poids nul", int(np.sum(tau == 0.0)), sample.n)
    return PosteriorWeights(tau=tau)


def rwk_density(
    sample: PValueSample,
    tau: PosteriorWeights,
    spec: KernelSpec,
    h: Bandwidth,
) -> WeightedKernelDensity:
    """f̂_rwk(x) = Σ_i τ̂_i / Σ_k τ̂_k · K_{i,h}(x)."""
    weights = np.asarray(tau.tau, dtype=np.float64)
    if weights.size != sample.n:
        raise ValueError(f"{weights.size} poids pour {sample.n} observations")
    total = float(weights.sum())
    if total <= 0.0:
        raise DegenerateWeights("Somme des poids a posteriori nulle : densité alternative indéfinie")
    return WeightedKernelDensity(
        centers=sample.values,
        weights=weights / total,
        spec=spec,
        h=h,
        normalized=False,
    )


def naive_density(sample: PValueSample, theta_hat: float, spec: KernelSpec, h: Bandwidth, x: float) -> float:
    """max(0, (ĝ_n(x) − θ̂)/(1 − θ̂)), nul si θ̂ = 1."""
    _check_theta(theta_hat)
    if theta_hat == 1.0:
        return 0.0
    return max(0.0, (kde(sample, spec, h, x) - theta_hat) / (1.0 - theta_hat))


def naive_estimator(sample: PValueSample, theta_hat: float, spec: KernelSpec, h: Bandwidth) -> NaiveDensity:
    """Estimateur naïf sous forme évaluable (voir ``kernels.density_values``)."""
    _check_theta(theta_hat)
    return NaiveDensity(sample=sample, theta=float(theta_hat), spec=spec, h=h)
