"""Modèles génératifs de p-valeurs : queue bêta, décalage gaussien, décalage laplacien.

Convention unilatérale : la p-valeur est la queue supérieure de la statistique
sous H0, p = SF₀(T), ce qui rend les p-valeurs nulles exactement uniformes.
"""

from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from scipy import stats

from lfdr_mix.estimation.lfdr import lfdr_values
from lfdr_mix.models import (
    MODEL_KINDS,
    ConfigError,
    DomainError,
    FloatArray,
    ModelKind,
    PValueSample,
    SimulationModel,
)

logger = logging.getLogger(__name__)

DEFAULT_RHO = 4.0
DEFAULT_MU: dict[ModelKind, float] = {
    "beta_tail": 2.0,
    "gaussian_shift": 2.0,
    "laplace_shift": 1.0,
}

OPEN_LOW = float(np.nextafter(0.0, 1.0))
OPEN_HIGH = float(np.nextafter(1.0, 0.0))

# Numéros de modèle acceptés en ligne de commande
MODEL_NUMBERS: dict[int, ModelKind] = {1: "beta_tail", 2: "gaussian_shift", 3: "laplace_shift"}


def model_kind(value: str | int) -> ModelKind:
    """Résout '1'/'2'/'3' ou un nom de modèle."""
    text = str(value).strip()
    if text.isdigit() and int(text) in MODEL_NUMBERS:
        return MODEL_NUMBERS[int(text)]
    if text in MODEL_KINDS:
        return text  # type: ignore[return-value]
    raise ConfigError(f"Modèle inconnu : '{value}' (attendu : 1, 2, 3 ou {', '.join(MODEL_KINDS)})")


def make_model(
    kind: str | int,
    theta: float,
    rho: float | None = None,
    mu: float | None = None,
) -> SimulationModel:
    """Construit un SimulationModel validé ; μ vaut 2 (gaussien) ou 1 (laplacien) par défaut."""
    resolved = model_kind(kind)
    if not 0.0 <= theta <= 1.0:
        raise ConfigError(f"θ={theta} hors de [0, 1]")
    rho_value = DEFAULT_RHO if rho is None else float(rho)
    if not rho_value > 0.0:
        raise ConfigError(f"ρ doit être > 0 (reçu : {rho_value})")
    mu_value = DEFAULT_MU[resolved] if mu is None else float(mu)
    if not np.isfinite(mu_value):
        raise ConfigError(f"μ doit être fini (reçu : {mu_value})")
    return SimulationModel(kind=resolved, theta=float(theta), rho=rho_value, mu=mu_value)


def _alternative_p_values(model: SimulationModel, u: FloatArray) -> FloatArray:
    """Tirage par inversion de la loi alternative à partir d'uniformes u."""
    if model.kind == "beta_tail":
        return 1.0 - (1.0 - u) ** (1.0 / model.rho)
    if model.kind == "gaussian_shift":
        return np.asarray(stats.norm.sf(model.mu + stats.norm.ppf(u)), dtype=np.float64)
    return np.asarray(stats.laplace.sf(model.mu + stats.laplace.ppf(u)), dtype=np.float64)


def generate_sample(model: SimulationModel, n: int, seed: int) -> tuple[PValueSample, npt.NDArray[np.int8]]:
    """Tire n p-valeurs du mélange et les étiquettes latentes Z (1 = hypothèse alternative)."""
    if n < 1:
        raise ValueError(f"Taille d'échantillon invalide : {n}")
    rng = np.random.default_rng(seed)
    labels = (rng.random(n) >= model.theta).astype(np.int8)
    u = rng.random(n)
    values = np.where(labels == 1, _alternative_p_values(model, u), u)
    logger.debug("Échantillon %s : n=%d, %d alternatives", model.kind, n, int(labels.sum()))
    return PValueSample(values=values), labels


def true_f_values(model: SimulationModel, x: npt.ArrayLike) -> FloatArray:
    """Densité alternative vraie f(x), vectorisée."""
    points = np.asarray(x, dtype=np.float64)
    if model.kind == "beta_tail":
        if np.any((points < 0.0) | (points > 1.0)):
            raise DomainError("f (modèle bêta) n'est définie que sur [0, 1]")
        return model.rho * (1.0 - points) ** (model.rho - 1.0)

    if np.any((points <= 0.0) | (points >= 1.0)):
        raise DomainError(f"f ({model.kind}) n'est définie que sur ]0, 1[")
    mu = model.mu
    if model.kind == "gaussian_shift":
        z = stats.norm.isf(points)
        return np.asarray(np.exp(mu * z - 0.5 * mu * mu), dtype=np.float64)
    t = stats.laplace.isf(points)
    return np.asarray(np.exp(np.abs(t) - np.abs(t - mu)), dtype=np.float64)


def true_f(model: SimulationModel, x: float) -> float:
    return float(true_f_values(model, x))


def true_lfdr_values(model: SimulationModel, x: npt.ArrayLike) -> FloatArray:
    """lFDR vrai θ / (θ + (1 − θ) f(x))."""
    return lfdr_values(model.theta, true_f_values(model, x))


def true_lfdr(model: SimulationModel, x: float) -> float:
    return float(true_lfdr_values(model, x))


def clip_open(x: npt.ArrayLike) -> FloatArray:
    """Ramène les p-valeurs extrêmes (0 ou 1 exacts) dans ]0, 1[ où f et le lFDR vrais sont définis."""
    return np.clip(np.asarray(x, dtype=np.float64), OPEN_LOW, OPEN_HIGH)
