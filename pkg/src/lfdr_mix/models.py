"""Modèles de données du mélange de p-valeurs et hiérarchie d'exceptions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

KernelFamily = Literal["rectangular", "triangular", "epanechnikov", "gaussian"]
KERNEL_FAMILIES: tuple[KernelFamily, ...] = ("rectangular", "triangular", "epanechnikov", "gaussian")
COMPACT_FAMILIES = frozenset({"rectangular", "triangular", "epanechnikov"})

Method = Literal["naive", "rwk", "kerfdr", "msl"]
METHODS: tuple[Method, ...] = ("naive", "rwk", "kerfdr", "msl")
ITERATIVE_METHODS = frozenset({"kerfdr", "msl"})

ModelKind = Literal["beta_tail", "gaussian_shift", "laplace_shift"]
MODEL_KINDS: tuple[ModelKind, ...] = ("beta_tail", "gaussian_shift", "laplace_shift")


# --- Exceptions métier ---


class LfdrMixError(Exception):
    """Erreur de base pour l'application lfdr-mix."""


class ConfigError(LfdrMixError):
    """YAML malformé, clé invalide, combinaison d'options incohérente."""


class ParseError(LfdrMixError):
    """Fichier de p-valeurs illisible ou contenant des valeurs invalides."""

    def __init__(self, message: str, lines: list[int] | None = None) -> None:
        super().__init__(message)
        self.lines = lines or []


class DegenerateSample(LfdrMixError):
    """Échantillon trop petit ou constant (dispersion nulle)."""


class IndexOutOfRange(LfdrMixError):
    """Indice d'observation hors de l'échantillon."""


class InvalidLambda(LfdrMixError):
    """Paramètre λ hors de [0, 1)."""


class EmptyGrid(LfdrMixError):
    """Grille de λ vide."""


class DegenerateWeights(LfdrMixError):
    """Tous les poids a posteriori sont nuls."""


class ZeroMass(LfdrMixError):
    """Le noyau ne place aucune masse sur [0, 1]."""


class NonPositiveDensity(LfdrMixError):
    """Densité nulle ou négative là où un logarithme est requis."""


class InvalidTheta(LfdrMixError):
    """Proportion θ̂ hors du domaine accepté par l'estimateur."""


class Indeterminate(LfdrMixError):
    """Forme 0/0 dans l'estimation du lFDR (θ̂ = 0 et f̂ = 0)."""


class EmptyInput(LfdrMixError):
    """Séquence vide."""


class LengthMismatch(LfdrMixError):
    """Séquences de longueurs différentes."""


class DomainError(LfdrMixError):
    """Point d'évaluation hors du domaine de définition de la densité."""


def _frozen_array(values: npt.ArrayLike) -> FloatArray:
    """Copie en float64 non modifiable."""
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


# --- Dataclasses métier (frozen) ---


@dataclass(frozen=True, eq=False)
class PValueSample:
    """Échantillon de p-valeurs X_1..X_n, toutes dans [0, 1]."""

    values: FloatArray

    def __post_init__(self) -> None:
        values = _frozen_array(self.values).ravel()
        if values.size == 0:
            raise ParseError("Échantillon vide : au moins une p-valeur est requise")
        if not np.all(np.isfinite(values)):
            raise ParseError("Échantillon invalide : valeurs non finies")
        if np.any((values < 0.0) | (values > 1.0)):
            raise ParseError("Échantillon invalide : p-valeurs hors de [0, 1]")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class KernelSpec:
    """Famille de noyau et ordre (premier moment non nul)."""

    family: KernelFamily
    order: int = 2

    @property
    def compact(self) -> bool:
        return self.family in COMPACT_FAMILIES


@dataclass(frozen=True)
class Bandwidth:
    """Fenêtre h > 0 et règle qui l'a produite."""

    value: float
    rule: Literal["silverman", "fixed"] = "fixed"


@dataclass(frozen=True)
class ThetaEstimate:
    """Estimation de la proportion de nulles θ."""

    value: float
    lambda_: float
    method: Literal["fixed_lambda", "bootstrap", "fixed"]


@dataclass(frozen=True, eq=False)
class PosteriorWeights:
    """Poids a posteriori τ̂_i ∈ [0, 1], un par observation."""

    tau: FloatArray


@dataclass(frozen=True, eq=False)
class WeightedKernelDensity:
    """Mélange de noyaux pondéré : Σ w_i K_{i,h}(x) (ou K̃_{i,h} si normalized)."""

    centers: FloatArray
    weights: FloatArray
    spec: KernelSpec
    h: Bandwidth
    normalized: bool = False


@dataclass(frozen=True, eq=False)
class NaiveDensity:
    """Estimateur naïf (ĝ_n − θ̂)/(1 − θ̂) tronqué à 0."""

    sample: PValueSample
    theta: float
    spec: KernelSpec
    h: Bandwidth


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Fonction sur [0, 1] échantillonnée aux milieux x_j = (j + ½)/G."""

    values: FloatArray

    def __post_init__(self) -> None:
        values = _frozen_array(self.values).ravel()
        if values.size < 2:
            raise ValueError("Une GridFunction requiert au moins 2 points")
        if not np.all(np.isfinite(values)):
            raise ValueError("Une GridFunction doit avoir des valeurs finies")
        object.__setattr__(self, "values", values)

    @property
    def grid_size(self) -> int:
        return int(self.values.size)

    @property
    def points(self) -> FloatArray:
        return (np.arange(self.grid_size) + 0.5) / self.grid_size


@dataclass(frozen=True)
class IterationRecord:
    """Une itération : indice s, critère, variation relative max des poids.

    Règle msl uniquement : ``kl_step`` = D(f̂⁽ˢ⁾ | f̂⁽ˢ⁻¹⁾) et ``mean_weight`` = Σ_i ω̂_i⁽ˢ⁾ / n.
    """

    iteration: int
    criterion: float
    max_relative_change: float
    kl_step: float | None = None
    mean_weight: float | None = None


@dataclass(frozen=True)
class IterationTrace:
    """Historique complet d'un ajustement itératif."""

    records: list[IterationRecord]
    converged: bool

    @property
    def iterations_used(self) -> int:
        return len(self.records)

    @property
    def criteria(self) -> list[float]:
        return [r.criterion for r in self.records]


@dataclass(frozen=True, eq=False)
class LfdrResult:
    """lFDR estimé par observation, aligné sur l'échantillon d'entrée."""

    lfdr: FloatArray
    method: Method


@dataclass(frozen=True, eq=False)
class FitResult:
    """Résultat complet d'un ajustement : θ̂, f̂, poids, lFDR̂, FDR̂, trace."""

    method: Method
    theta: ThetaEstimate
    bandwidth: Bandwidth
    spec: KernelSpec
    density: WeightedKernelDensity | NaiveDensity
    f_at_observations: FloatArray
    weights: FloatArray
    lfdr: LfdrResult
    fdr: FloatArray
    trace: IterationTrace | None = None


@dataclass(frozen=True)
class Anomaly:
    """Anomalie détectée lors du contrôle d'un ajustement."""

    type: str
    severity: str
    method: str
    detail: str
    expected_value: str | None = None
    actual_value: str | None = None


@dataclass(frozen=True)
class SimulationModel:
    """Modèle génératif de p-valeurs (bêta, décalage gaussien ou laplacien)."""

    kind: ModelKind
    theta: float
    rho: float = 4.0
    mu: float = 2.0


