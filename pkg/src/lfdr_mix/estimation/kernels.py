"""Noyaux, estimateur à noyau de g, version leave-one-out et règle de Silverman.

Toutes les fonctions sont pures. Les évaluations vectorisées passent par une
matrice noyau ``K_{j,h}(x_i)`` : creuse (``scipy.sparse``) pour les noyaux à
support compact, dense par blocs pour le noyau gaussien.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import sparse, stats

from lfdr_mix.models import (
    KERNEL_FAMILIES,
    Bandwidth,
    ConfigError,
    DegenerateSample,
    FloatArray,
    IndexOutOfRange,
    KernelSpec,
    NaiveDensity,
    PValueSample,
    WeightedKernelDensity,
    ZeroMass,
)

logger = logging.getLogger(__name__)

KernelMatrix = FloatArray | sparse.csr_matrix

DENSE_BLOCK_ROWS = 1024
SILVERMAN_FACTOR = 0.9
IQR_SCALE = 1.34


def kernel_spec(family: str) -> KernelSpec:
    """Construit un KernelSpec validé (tous les noyaux fournis sont d'ordre 2)."""
    if family not in KERNEL_FAMILIES:
        raise ConfigError(
            f"Noyau '{family}' inconnu. Noyaux acceptés : {', '.join(KERNEL_FAMILIES)}"
        )
    return KernelSpec(family=family, order=2)  # type: ignore[arg-type]


def kernel_values(spec: KernelSpec, u: npt.ArrayLike) -> FloatArray:
    """K(u) vectorisé ; nul hors de [−1, 1] pour les familles compactes."""
    u = np.asarray(u, dtype=np.float64)
    abs_u = np.abs(u)
    if spec.family == "rectangular":
        return np.where(abs_u <= 1.0, 0.5, 0.0)
    if spec.family == "triangular":
        return np.clip(1.0 - abs_u, 0.0, None)
    if spec.family == "epanechnikov":
        return np.where(abs_u <= 1.0, 0.75 * (1.0 - u * u), 0.0)
    return np.asarray(stats.norm.pdf(u), dtype=np.float64)


def kernel_eval(spec: KernelSpec, u: float) -> float:
    """K(u) en un point."""
    return float(kernel_values(spec, u))


def kernel_cdf(spec: KernelSpec, u: npt.ArrayLike) -> FloatArray:
    """Primitive ∫_{−∞}^u K, forme close (fonction d'erreur pour le gaussien)."""
    u = np.asarray(u, dtype=np.float64)
    if spec.family == "gaussian":
        return np.asarray(stats.norm.cdf(u), dtype=np.float64)
    c = np.clip(u, -1.0, 1.0)
    if spec.family == "rectangular":
        return (c + 1.0) / 2.0
    if spec.family == "triangular":
        return np.where(c <= 0.0, 0.5 * (1.0 + c) ** 2, 1.0 - 0.5 * (1.0 - c) ** 2)
    return 0.5 + 0.75 * (c - c**3 / 3.0)


def kernel_segment_integral(spec: KernelSpec, a: float, b: float) -> float:
    """∫_a^b K(u) du ; les bornes infinies sont acceptées."""
    if a > b:
        raise ValueError(f"Bornes inversées : a={a} > b={b}")
    return float(kernel_cdf(spec, b) - kernel_cdf(spec, a))


def kernel_matrix(
    points: npt.ArrayLike,
    centers: npt.ArrayLike,
    spec: KernelSpec,
    h: Bandwidth,
) -> KernelMatrix:
    """Matrice M[i, j] = K_{j,h}(x_i) = K((x_i − c_j)/h)/h.

    Creuse pour les noyaux compacts : seuls les couples à distance ≤ h sont stockés.
    """
    x = np.asarray(points, dtype=np.float64).ravel()
    c = np.asarray(centers, dtype=np.float64).ravel()
    bw = h.value
    if not spec.compact:
        return kernel_values(spec, (x[:, None] - c[None, :]) / bw) / bw

    order = np.argsort(c, kind="stable")
    sorted_c = c[order]
    lo = np.searchsorted(sorted_c, x - bw, side="left")
    hi = np.searchsorted(sorted_c, x + bw, side="right")
    counts = hi - lo
    total = int(counts.sum())
    rows = np.repeat(np.arange(x.size), counts)
    starts = np.repeat(lo - (np.cumsum(counts) - counts), counts)
    cols = order[starts + np.arange(total)]
    vals = kernel_values(spec, (x[rows] - c[cols]) / bw) / bw
    return sparse.csr_matrix((vals, (rows, cols)), shape=(x.size, c.size))


def weighted_kernel_sum(
    points: npt.ArrayLike,
    centers: npt.ArrayLike,
    weights: npt.ArrayLike,
    spec: KernelSpec,
    h: Bandwidth,
) -> FloatArray:
    """Σ_j w_j K_{j,h}(x) pour chaque x, par blocs de lignes pour borner la mémoire."""
    x = np.asarray(points, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    out = np.empty(x.size, dtype=np.float64)
    for start in range(0, x.size, DENSE_BLOCK_ROWS):
        stop = start + DENSE_BLOCK_ROWS
        out[start:stop] = kernel_matrix(x[start:stop], centers, spec, h) @ w
    return out


def kde_values(sample: PValueSample, spec: KernelSpec, h: Bandwidth, x: npt.ArrayLike) -> FloatArray:
    """ĝ_n(x) = (1/nh) Σ_i K((x − X_i)/h), forme brute sans correction de bord."""
    weights = np.full(sample.n, 1.0 / sample.n)
    return weighted_kernel_sum(x, sample.values, weights, spec, h)


def kde(sample: PValueSample, spec: KernelSpec, h: Bandwidth, x: float) -> float:
    """ĝ_n en un point réel quelconque."""
    return float(kde_values(sample, spec, h, [x])[0])


def loo_kde_all(sample: PValueSample, spec: KernelSpec, h: Bandwidth) -> FloatArray:
    """g̃_n(X_i) = (1/(n−1)) Σ_{j≠i} K_{j,h}(X_i) pour tous les i."""
    n = sample.n
    if n < 2:
        raise DegenerateSample("Le leave-one-out requiert au moins 2 observations")
    out = np.empty(n, dtype=np.float64)
    for start in range(0, n, DENSE_BLOCK_ROWS):
        stop = min(start + DENSE_BLOCK_ROWS, n)
        block = kernel_matrix(sample.values[start:stop], sample.values, spec, h)
        if sparse.issparse(block):
            coo = block.tocoo()
            keep = coo.col != coo.row + start
            out[start:stop] = np.bincount(coo.row[keep], weights=coo.data[keep], minlength=stop - start)
        else:
            block[np.arange(stop - start), np.arange(start, stop)] = 0.0
            out[start:stop] = block.sum(axis=1)
    return out / (n - 1)


def loo_kde(sample: PValueSample, spec: KernelSpec, h: Bandwidth, i: int) -> float:
    """g̃_n(X_i) pour une observation."""
    n = sample.n
    if n < 2:
        raise DegenerateSample("Le leave-one-out requiert au moins 2 observations")
    if not 0 <= i < n:
        raise IndexOutOfRange(f"Indice {i} hors de [0, {n})")
    others = np.delete(sample.values, i)
    weights = np.full(n - 1, 1.0 / (n - 1))
    return float(weighted_kernel_sum([sample.values[i]], others, weights, spec, h)[0])


def silverman_rule(sd: float, iqr: float, n: int) -> float:
    """0.9 · min(SD, IQR/1.34) · n^(−1/5)."""
    spread = min(sd, iqr / IQR_SCALE)
    if spread <= 0.0:
        raise DegenerateSample(f"Dispersion nulle (SD={sd}, IQR={iqr}) : fenêtre de Silverman indéfinie")
    return SILVERMAN_FACTOR * spread * n ** (-0.2)


def silverman_bandwidth(sample: PValueSample) -> Bandwidth:
    """Règle du pouce de Silverman (SD en n−1, IQR par interpolation linéaire)."""
    if sample.n < 2:
        raise DegenerateSample("La règle de Silverman requiert au moins 2 observations")
    sd = float(np.std(sample.values, ddof=1))
    iqr = float(stats.iqr(sample.values, interpolation="linear"))
    value = silverman_rule(sd, iqr, sample.n)
    logger.debug("Fenêtre de Silverman : SD=%.6g IQR=%.6g n=%d → h=%.6g", sd, iqr, sample.n, value)
    return Bandwidth(value=value, rule="silverman")


def fixed_bandwidth(value: float) -> Bandwidth:
    """Fenêtre fixée par l'utilisateur."""
    if not value > 0.0 or not math.isfinite(value):
        raise ConfigError(f"Fenêtre invalide : {value} (doit être un réel > 0)")
    return Bandwidth(value=float(value), rule="fixed")


def component_masses(centers: npt.ArrayLike, spec: KernelSpec, h: Bandwidth) -> FloatArray:
    """∫_0^1 K_{i,h}(s) ds pour chaque centre, par la primitive fermée."""
    c = np.asarray(centers, dtype=np.float64)
    return kernel_cdf(spec, (1.0 - c) / h.value) - kernel_cdf(spec, (0.0 - c) / h.value)


def normalized_kernel_eval(center: float, spec: KernelSpec, h: Bandwidth, x: float) -> float:
    """K̃_{i,h}(x) = K_{i,h}(x) / ∫_0^1 K_{i,h}(s) ds."""
    mass = float(component_masses([center], spec, h)[0])
    if mass <= 0.0:
        raise ZeroMass(f"Le noyau centré en {center} (h={h.value}) ne charge pas [0, 1]")
    return kernel_eval(spec, (x - center) / h.value) / h.value / mass


def mixture_values(density: WeightedKernelDensity, x: npt.ArrayLike) -> FloatArray:
    """Évalue Σ_i w_i K_{i,h}(x), ou Σ_i w_i K̃_{i,h}(x) en mode normalisé."""
    weights = np.asarray(density.weights, dtype=np.float64)
    if density.normalized:
        masses = component_masses(density.centers, density.spec, density.h)
        if np.any(masses[weights > 0] <= 0.0):
            raise ZeroMass("Une composante pondérée ne charge pas [0, 1]")
        weights = np.divide(weights, masses, out=np.zeros_like(weights), where=masses > 0)
    return weighted_kernel_sum(x, density.centers, weights, density.spec, density.h)


def naive_values(density: NaiveDensity, x: npt.ArrayLike) -> FloatArray:
    """max(0, (ĝ_n(x) − θ̂)/(1 − θ̂)), identiquement nul si θ̂ = 1."""
    x = np.asarray(x, dtype=np.float64)
    if density.theta >= 1.0:
        return np.zeros(x.shape, dtype=np.float64)
    g = kde_values(density.sample, density.spec, density.h, x).reshape(x.shape)
    return np.clip((g - density.theta) / (1.0 - density.theta), 0.0, None)


def density_values(density: WeightedKernelDensity | NaiveDensity, x: npt.ArrayLike) -> FloatArray:
    """Évalue n'importe quel estimateur de f renvoyé par les méthodes."""
    if isinstance(density, NaiveDensity):
        return naive_values(density, x)
    x = np.asarray(x, dtype=np.float64)
    return mixture_values(density, x).reshape(x.shape)
