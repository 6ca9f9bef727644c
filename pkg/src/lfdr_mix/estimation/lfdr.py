"""lFDR plug-in par observation et FDR cumulé le long des p-valeurs triées."""

from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt

from lfdr_mix.models import EmptyInput, FloatArray, Indeterminate, LengthMismatch

logger = logging.getLogger(__name__)


def lfdr_estimate(theta_hat: float, f_hat_at_x: float) -> float:
    """θ̂ / (θ̂ + (1 − θ̂) f̂(x)) ; vaut 1 si θ̂ = 1."""
    if not 0.0 <= theta_hat <= 1.0:
        raise ValueError(f"θ̂={theta_hat} hors de [0, 1]")
    if f_hat_at_x < 0.0:
        raise ValueError(f"f̂(x)={f_hat_at_x} négatif")
    if theta_hat == 1.0:
        return 1.0
    denominator = theta_hat + (1.0 - theta_hat) * f_hat_at_x
    if denominator == 0.0:
        raise Indeterminate("lFDR indéterminé (0/0) : θ̂ = 0 et f̂(x) = 0")
    return theta_hat / denominator


def lfdr_values(theta_hat: float, f_hat: npt.ArrayLike) -> FloatArray:
    """Version vectorisée de ``lfdr_estimate`` (même convention θ̂ = 1 et même signal 0/0)."""
    f = np.asarray(f_hat, dtype=np.float64)
    if not 0.0 <= theta_hat <= 1.0:
        raise ValueError(f"θ̂={theta_hat} hors de [0, 1]")
    if np.any(f < 0.0):
        raise ValueError("f̂ doit être positive ou nulle")
    if theta_hat == 1.0:
        return np.ones_like(f)
    denominator = theta_hat + (1.0 - theta_hat) * f
    if np.any(denominator == 0.0):
        raise Indeterminate(f"lFDR indéterminé (0/0) en {int(np.sum(denominator == 0.0))} observation(s)")
    return theta_hat / denominator


def fdr_from_lfdr(lfdr_sorted_by_p: npt.ArrayLike) -> FloatArray:
    """FDR̂(x_(i)) = (1/i) Σ_{j ≤ i} lFDR̂(x_(j)), entrée déjà triée par p-valeur croissante."""
    values = np.asarray(lfdr_sorted_by_p, dtype=np.float64).ravel()
    if values.size == 0:
        raise EmptyInput("FDR cumulé : séquence de lFDR vide")
    return np.cumsum(values) / np.arange(1, values.size + 1)


def fdr_in_input_order(p_values: npt.ArrayLike, lfdr: npt.ArrayLike) -> FloatArray:
    """FDR̂ calculé sur l'ordre trié (tri stable) puis replacé dans l'ordre d'entrée."""
    p = np.asarray(p_values, dtype=np.float64).ravel()
    local = np.asarray(lfdr, dtype=np.float64).ravel()
    if p.size != local.size:
        raise LengthMismatch(f"{p.size} p-valeurs pour {local.size} lFDR")
    order = np.argsort(p, kind="stable")
    fdr = np.empty_like(local)
    fdr[order] = fdr_from_lfdr(local[order])
    return fdr


def select_discoveries(fdr_sorted: npt.ArrayLike, alpha: float) -> int:
    """Nombre k de rejets : plus grand indice tel que FDR̂(x_(k)) ≤ α (0 si aucun)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"α={alpha} hors de [0, 1]")
    fdr = np.asarray(fdr_sorted, dtype=np.float64).ravel()
    below = np.flatnonzero(fdr <= alpha)
    k = int(below[-1]) + 1 if below.size else 0
    logger.debug("Sélection à α=%.3g : %d découvertes", alpha, k)
    return k
