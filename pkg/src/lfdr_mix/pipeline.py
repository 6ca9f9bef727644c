"""Orchestration d'un ajustement : θ̂ → fenêtre → estimateur → lFDR̂ → FDR̂ → contrôles → export."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lfdr_mix.config.loader import EstimationConfig
from lfdr_mix.controls.fit_checker import FitChecker
from lfdr_mix.estimation.iterative import IterativeConfig, fit_iterative
from lfdr_mix.estimation.kernels import density_values, fixed_bandwidth, kernel_spec, silverman_bandwidth
from lfdr_mix.estimation.lfdr import fdr_in_input_order, lfdr_values, select_discoveries
from lfdr_mix.estimation.rwk import naive_estimator, rwk_density, rwk_weights
from lfdr_mix.estimation.theta import bootstrap_theta, fixed_theta
from lfdr_mix.exporters.excel import print_fit_summary
from lfdr_mix.exporters.tables import export_fit
from lfdr_mix.models import (
    Anomaly,
    Bandwidth,
    FitResult,
    FloatArray,
    IterationTrace,
    KernelSpec,
    LfdrResult,
    Method,
    NaiveDensity,
    PValueSample,
    ThetaEstimate,
    WeightedKernelDensity,
)
from lfdr_mix.parsers.pvalues import PValueParser

logger = logging.getLogger(__name__)

Estimate = tuple[WeightedKernelDensity | NaiveDensity, FloatArray | None, IterationTrace | None]
Estimator = Callable[[PValueSample, float, KernelSpec, Bandwidth, EstimationConfig], Estimate]


def estimate_theta(sample: PValueSample, options: EstimationConfig) -> ThetaEstimate:
    """θ̂ fixé par l'utilisateur ou choisi par bootstrap."""
    if isinstance(options.theta, str):
        return bootstrap_theta(sample, options.lambda_grid, options.bootstrap_replicates, options.seed)
    return fixed_theta(float(options.theta))


def select_bandwidth(sample: PValueSample, options: EstimationConfig) -> Bandwidth:
    if isinstance(options.bandwidth, str):
        return silverman_bandwidth(sample)
    return fixed_bandwidth(float(options.bandwidth))


def _naive(sample: PValueSample, theta: float, spec: KernelSpec, h: Bandwidth, options: EstimationConfig) -> Estimate:
    return naive_estimator(sample, theta, spec, h), None, None


def _rwk(sample: PValueSample, theta: float, spec: KernelSpec, h: Bandwidth, options: EstimationConfig) -> Estimate:
    tau = rwk_weights(sample, theta, spec, h)
    return rwk_density(sample, tau, spec, h), tau.tau, None


def _iterative(rule: str) -> Estimator:
    def run(sample: PValueSample, theta: float, spec: KernelSpec, h: Bandwidth, options: EstimationConfig) -> Estimate:
        if theta == 1.0:
            # Mélange réduit à la loi nulle : f̂ ≡ 0 comme pour l'estimateur naïf
            logger.warning("%s : θ̂ = 1, aucune composante alternative à estimer (f̂ ≡ 0)", rule)
            return NaiveDensity(sample=sample, theta=1.0, spec=spec, h=h), np.zeros(sample.n), None
        config = IterativeConfig(
            rule=rule,  # type: ignore[arg-type]
            epsilon=options.epsilon,
            max_iterations=options.max_iterations,
            grid_size=options.grid_size,
            init_seed=options.seed,
            init=options.init,  # type: ignore[arg-type]
            positivity_floor=options.positivity_floor,
        )
        fit = fit_iterative(sample, theta, spec, h, config)
        return fit.density, fit.weights, fit.trace

    return run


ESTIMATOR_REGISTRY: dict[str, Estimator] = {
    "naive": _naive,
    "rwk": _rwk,
    "kerfdr": _iterative("kerfdr"),
    "msl": _iterative("msl"),
}


def fit_sample(
    sample: PValueSample,
    method: Method,
    options: EstimationConfig,
    *,
    theta: ThetaEstimate | None = None,
    bandwidth: Bandwidth | None = None,
) -> FitResult:
    """Ajuste une méthode ; ``theta`` et ``bandwidth`` déjà calculés peuvent être réutilisés."""
    theta_estimate = theta if theta is not None else estimate_theta(sample, options)
    h = bandwidth if bandwidth is not None else select_bandwidth(sample, options)
    spec = kernel_spec(options.kernel_for(method))
    logger.info(
        "Ajustement %s : n=%d, θ̂=%.6g (λ=%.3g), noyau %s, h=%.6g",
        method,
        sample.n,
        theta_estimate.value,
        theta_estimate.lambda_,
        spec.family,
        h.value,
    )

    density, weights, trace = ESTIMATOR_REGISTRY[method](sample, theta_estimate.value, spec, h, options)
    f_x = density_values(density, sample.values)
    lfdr = lfdr_values(theta_estimate.value, f_x)
    if weights is None:
        weights = 1.0 - lfdr
    return FitResult(
        method=method,
        theta=theta_estimate,
        bandwidth=h,
        spec=spec,
        density=density,
        f_at_observations=f_x,
        weights=np.asarray(weights, dtype=np.float64),
        lfdr=LfdrResult(lfdr=lfdr, method=method),
        fdr=fdr_in_input_order(sample.values, lfdr),
        trace=trace,
    )


def count_discoveries(sample: PValueSample, result: FitResult, alpha: float) -> int:
    """Nombre de rejets au niveau α sur le FDR̂ cumulé trié."""
    order = np.argsort(sample.values, kind="stable")
    return select_discoveries(result.fdr[order], alpha)


@dataclass
class FitOutcome:
    """Résultat d'un ajustement de bout en bout."""

    sample: PValueSample
    result: FitResult
    anomalies: list[Anomaly]
    n_discoveries: int


class FitOrchestrator:
    """Orchestre le pipeline fichier de p-valeurs → ajustement → contrôles → CSV/JSON."""

    def run(
        self,
        input_path: Path,
        output_prefix: Path,
        method: Method,
        options: EstimationConfig,
        column: str | None = None,
    ) -> FitOutcome:
        sample = PValueParser().parse(input_path, column)
        result = fit_sample(sample, method, options)

        anomalies = FitChecker.check(result)
        logger.info("FitChecker : %d anomalie(s) détectée(s)", len(anomalies))

        n_discoveries = count_discoveries(sample, result, options.alpha)
        export_fit(sample, result, anomalies, output_prefix, alpha=options.alpha, n_discoveries=n_discoveries)
        print_fit_summary(sample, result, anomalies, n_discoveries)
        return FitOutcome(sample=sample, result=result, anomalies=anomalies, n_discoveries=n_discoveries)
