"""Opérateurs de lissage S, S*, N sur grille, log-vraisemblance lissée et divergence de Kullback généralisée.

Grille des milieux x_j = (j + ½)/G, pas Δ = 1/G. La masse d'un noyau centré en x
est évaluée par la même quadrature, m(x) = Δ Σ_b K_h(u_b − x) : S conserve alors
exactement l'intégrale discrète et S* est exactement l'adjoint discret de S.
"""

from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from scipy import sparse, special

from lfdr_mix.estimation.kernels import DENSE_BLOCK_ROWS, density_values, kernel_matrix
from lfdr_mix.models import (
    Bandwidth,
    FloatArray,
    GridFunction,
    KernelSpec,
    LengthMismatch,
    NaiveDensity,
    NonPositiveDensity,
    PValueSample,
    WeightedKernelDensity,
    ZeroMass,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 1024
DEFAULT_POSITIVITY_FLOOR = 1e-12


def grid_points(grid_size: int) -> FloatArray:
    """Milieux (j + ½)/G, j = 0..G−1."""
    if grid_size < 2:
        raise ValueError(f"Taille de grille invalide : {grid_size} (minimum 2)")
    return (np.arange(grid_size, dtype=np.float64) + 0.5) / grid_size


def to_grid(density: WeightedKernelDensity | NaiveDensity, grid_size: int = DEFAULT_GRID_SIZE) -> GridFunction:
    """Échantillonne un estimateur de f sur la grille des milieux."""
    return GridFunction(values=density_values(density, grid_points(grid_size)))


def _kernel_sums(
    points: npt.ArrayLike,
    grid_size: int,
    values: FloatArray,
    spec: KernelSpec,
    h: Bandwidth,
) -> tuple[FloatArray, FloatArray]:
    """(Σ_b K_h(u_b − x) v_b, Σ_b K_h(u_b − x)) pour chaque point x, par blocs."""
    x = np.asarray(points, dtype=np.float64).ravel()
    grid = grid_points(grid_size)
    weighted = np.empty(x.size, dtype=np.float64)
    totals = np.empty(x.size, dtype=np.float64)
    for start in range(0, x.size, DENSE_BLOCK_ROWS):
        stop = start + DENSE_BLOCK_ROWS
        block = kernel_matrix(x[start:stop], grid, spec, h)
        weighted[start:stop] = block @ values
        row_sums = block.sum(axis=1)
        totals[start:stop] = np.asarray(row_sums).ravel() if sparse.issparse(block) else row_sums
    return weighted, totals


def _quadrature_masses(points: npt.ArrayLike, grid_size: int, spec: KernelSpec, h: Bandwidth) -> FloatArray:
    """m(x) = Δ Σ_b K_h(u_b − x)."""
    _, totals = _kernel_sums(points, grid_size, np.zeros(grid_size), spec, h)
    masses = totals / grid_size
    if np.any(masses <= 0.0):
        raise ZeroMass(f"Fenêtre h={h.value:.6g} trop étroite pour une grille de {grid_size} points")
    return masses


def smooth_S_at(f: GridFunction, spec: KernelSpec, h: Bandwidth, points: npt.ArrayLike) -> FloatArray:
    """S f(x) = ∫ K_h(u − x) f(u) / m(u) du, évalué en des points quelconques."""
    masses = _quadrature_masses(f.points, f.grid_size, spec, h)
    weighted, _ = _kernel_sums(points, f.grid_size, f.values / masses, spec, h)
    return weighted / f.grid_size


def smooth_S(f: GridFunction, spec: KernelSpec, h: Bandwidth) -> GridFunction:
    """Opérateur de lissage linéaire S sur la grille de f ; préserve les densités."""
    return GridFunction(values=smooth_S_at(f, spec, h, f.points))


def adjoint_S_star_at(phi: GridFunction, spec: KernelSpec, h: Bandwidth, points: npt.ArrayLike) -> FloatArray:
    """S* φ(x) = ∫ K_h(u − x) φ(u) du / m(x) : moyenne pondérée de φ."""
    weighted, totals = _kernel_sums(points, phi.grid_size, phi.values, spec, h)
    if np.any(totals <= 0.0):
        raise ZeroMass(f"Le noyau (h={h.value:.6g}) ne rencontre aucun point de la grille")
    return weighted / totals


def adjoint_S_star(phi: GridFunction, spec: KernelSpec, h: Bandwidth) -> GridFunction:
    """Adjoint S* de S sur la grille de φ."""
    return GridFunction(values=adjoint_S_star_at(phi, spec, h, phi.points))


def _log_density(f: GridFunction, floor: float | None) -> FloatArray:
    values = f.values
    if floor is None:
        if np.any(values <= 0.0):
            raise NonPositiveDensity(
                f"Densité non strictement positive sur la grille (min={float(values.min()):.3g})"
            )
        return np.log(values)
    return np.log(np.maximum(values, floor))


def nonlinear_N_at(
    f: GridFunction,
    spec: KernelSpec,
    h: Bandwidth,
    points: npt.ArrayLike,
    floor: float | None = DEFAULT_POSITIVITY_FLOOR,
) -> FloatArray:
    """N f(x) = exp(S*(log f)(x)) ; ``floor=None`` désactive le plancher de positivité."""
    log_f = GridFunction(values=_log_density(f, floor))
    return np.exp(adjoint_S_star_at(log_f, spec, h, points))


def nonlinear_N(
    f: GridFunction,
    spec: KernelSpec,
    h: Bandwidth,
    floor: float | None = DEFAULT_POSITIVITY_FLOOR,
) -> GridFunction:
    """Opérateur de lissage non linéaire N = exp ∘ S* ∘ log."""
    return GridFunction(values=nonlinear_N_at(f, spec, h, f.points, floor))


def smoothed_loglik(
    sample: PValueSample,
    theta: float,
    f: GridFunction,
    spec: KernelSpec,
    h: Bandwidth,
    floor: float | None = None,
) -> float:
    """l_n(θ, f) = −(1/n) Σ_i log(θ + (1 − θ) N f(X_i)).

    N f(X_i) passe par la ligne exacte de S* en X_i, comme dans l'itération msl.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"θ={theta} hors de [0, 1]")
    if theta == 1.0:
        return 0.0
    n_at_x = nonlinear_N_at(f, spec, h, sample.values, floor)
    return float(-np.mean(np.log(theta + (1.0 - theta) * n_at_x)))


def kl_divergence(a: GridFunction, b: GridFunction) -> float:
    """D(a | b) = ∫ {a log(a/b) + b − a}, pour des fonctions positives non normalisées."""
    if a.grid_size != b.grid_size:
        raise LengthMismatch(f"Grilles incompatibles : {a.grid_size} ≠ {b.grid_size}")
    if np.any(b.values <= 0.0):
        raise NonPositiveDensity("D(a | b) requiert b > 0 sur toute la grille")
    if np.any(a.values < 0.0):
        raise ValueError("D(a | b) requiert a ≥ 0 sur toute la grille")
    integrand = special.rel_entr(a.values, b.values) + b.values - a.values
    return float(np.mean(integrand))
