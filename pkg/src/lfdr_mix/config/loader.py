"""Chargement et validation de la configuration YAML."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from lfdr_mix.estimation.theta import DEFAULT_BOOTSTRAP_REPLICATES, DEFAULT_LAMBDA_GRID
from lfdr_mix.models import KERNEL_FAMILIES, METHODS, ConfigError, Method, ModelKind
from lfdr_mix.simulation.models import model_kind

logger = logging.getLogger(__name__)

VALID_INIT_MODES = {"uniform", "half"}


@dataclass
class EstimationConfig:
    """Paramètres d'estimation (non frozen, dataclass technique)."""

    kernel: str = "triangular"  # naive, rwk, kerfdr
    msl_kernel: str = "gaussian"
    bandwidth: float | str = "silverman"
    theta: float | str = "bootstrap"
    lambda_grid: list[float] = field(default_factory=lambda: list(DEFAULT_LAMBDA_GRID))
    bootstrap_replicates: int = DEFAULT_BOOTSTRAP_REPLICATES
    seed: int = 0
    epsilon: float = 1e-5
    max_iterations: int = 500
    grid_size: int = 1024
    init: str = "uniform"
    positivity_floor: float = 1e-12
    alpha: float = 0.05

    def kernel_for(self, method: Method) -> str:
        """Noyau utilisé par une méthode donnée."""
        return self.msl_kernel if method == "msl" else self.kernel


@dataclass
class BenchmarkConfig:
    """Plan d'expérience Monte Carlo (non frozen, dataclass technique)."""

    models: list[ModelKind] = field(default_factory=lambda: ["beta_tail", "gaussian_shift", "laplace_shift"])
    thetas: list[float] = field(default_factory=lambda: [0.65, 0.85])
    sample_sizes: list[int] = field(default_factory=lambda: [500, 1000, 2000, 5000])
    repeats: int = 100
    methods: list[Method] = field(default_factory=lambda: list(METHODS))
    master_seed: int = 12345
    rho: float = 4.0
    mu: float | None = None  # None : valeur par défaut du modèle
    workers: int = 1
    rmise_grid_size: int = 1024


@dataclass
class AppConfig:
    """Configuration complète de l'application."""

    estimation: EstimationConfig = field(default_factory=EstimationConfig)
    benchmark: BenchmarkConfig = field(default_factory=BenchmarkConfig)


def _load_yaml(filepath: Path) -> dict[str, object]:
    """Charge un fichier YAML et retourne son contenu."""
    if not filepath.exists():
        raise ConfigError(f"Fichier de configuration manquant : {filepath}")
    try:
        with open(filepath, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"YAML malformé dans {filepath} : {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Le fichier {filepath} doit contenir un mapping YAML (reçu : {type(data).__name__})")
    return data


def _section(data: dict[str, object], key: str, context: str) -> dict[str, object]:
    """Extrait une section optionnelle (mapping vide si absente)."""
    section = data.get(key, {})
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"'{key}' doit être un mapping dans {context}")
    return section


def _as_float(value: object, key: str, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' doit être un nombre dans {context} (reçu : {value!r})")
    return float(value)


def _as_int(value: object, key: str, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' doit être un entier dans {context} (reçu : {value!r})")
    return value


def _as_list(value: object, key: str, context: str) -> list[object]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"'{key}' doit être une liste non vide dans {context}")
    return value


def _float_or_keyword(value: object, key: str, keyword: str, context: str) -> float | str:
    """Accepte un réel ou un mot-clé ('silverman', 'bootstrap')."""
    if isinstance(value, str):
        if value.strip().lower() == keyword:
            return keyword
        try:
            return float(value)
        except ValueError:
            raise ConfigError(
                f"'{key}' doit valoir '{keyword}' ou un réel dans {context} (reçu : {value!r})"
            ) from None
    return _as_float(value, key, context)


def validate_estimation(config: EstimationConfig, context: str) -> None:
    """Vérifie la cohérence d'une EstimationConfig (après surcharge éventuelle par la CLI)."""
    for key in ("kernel", "msl_kernel"):
        family = getattr(config, key)
        if family not in KERNEL_FAMILIES:
            raise ConfigError(
                f"'{key}' : noyau '{family}' inconnu dans {context} (attendu : {', '.join(KERNEL_FAMILIES)})"
            )
    if config.msl_kernel != "gaussian":
        raise ConfigError(f"'msl_kernel' doit être 'gaussian' dans {context} (reçu : {config.msl_kernel})")
    if isinstance(config.bandwidth, float) and not (config.bandwidth > 0.0 and math.isfinite(config.bandwidth)):
        raise ConfigError(f"'bandwidth' doit être > 0 dans {context} (reçu : {config.bandwidth})")
    if isinstance(config.theta, float) and not 0.0 <= config.theta <= 1.0:
        raise ConfigError(f"'theta' doit être dans [0, 1] dans {context} (reçu : {config.theta})")
    if not config.lambda_grid:
        raise ConfigError(f"'lambda_grid' ne peut pas être vide dans {context}")
    for lam in config.lambda_grid:
        if not 0.0 <= lam < 1.0:
            raise ConfigError(f"'lambda_grid' : λ={lam} hors de [0, 1) dans {context}")
    if config.bootstrap_replicates < 1:
        raise ConfigError(f"'bootstrap_replicates' doit être ≥ 1 dans {context}")
    if not config.epsilon > 0.0:
        raise ConfigError(f"'epsilon' doit être > 0 dans {context} (reçu : {config.epsilon})")
    if config.max_iterations < 1:
        raise ConfigError(f"'max_iterations' doit être ≥ 1 dans {context}")
    if config.grid_size < 2:
        raise ConfigError(f"'grid_size' doit être ≥ 2 dans {context}")
    if config.init not in VALID_INIT_MODES:
        raise ConfigError(f"'init' doit valoir uniform ou half dans {context} (reçu : {config.init})")
    if config.positivity_floor < 0.0:
        raise ConfigError(f"'positivity_floor' doit être ≥ 0 dans {context}")
    if not 0.0 <= config.alpha <= 1.0:
        raise ConfigError(f"'alpha' doit être dans [0, 1] dans {context} (reçu : {config.alpha})")


def validate_benchmark(config: BenchmarkConfig, context: str) -> None:
    """Vérifie la cohérence d'une BenchmarkConfig."""
    if not config.models or not config.thetas or not config.sample_sizes or not config.methods:
        raise ConfigError(f"models, thetas, sample_sizes et methods doivent être non vides dans {context}")
    for theta in config.thetas:
        if not 0.0 <= theta <= 1.0:
            raise ConfigError(f"'thetas' : θ={theta} hors de [0, 1] dans {context}")
    for n in config.sample_sizes:
        if n < 2:
            raise ConfigError(f"'sample_sizes' : n={n} < 2 dans {context}")
    for method in config.methods:
        if method not in METHODS:
            raise ConfigError(
                f"'methods' : méthode '{method}' inconnue dans {context} (attendu : {', '.join(METHODS)})"
            )
    if config.repeats < 1:
        raise ConfigError(f"'repeats' doit être ≥ 1 dans {context}")
    if not config.rho > 0.0:
        raise ConfigError(f"'rho' doit être > 0 dans {context}")
    if config.workers < 1:
        raise ConfigError(f"'workers' doit être ≥ 1 dans {context}")
    if config.rmise_grid_size < 2:
        raise ConfigError(f"'rmise_grid_size' doit être ≥ 2 dans {context}")


def _parse_estimation(data: dict[str, object], context: str) -> EstimationConfig:
    config = EstimationConfig()
    if "kernel" in data:
        config.kernel = str(data["kernel"])
    if "msl_kernel" in data:
        config.msl_kernel = str(data["msl_kernel"])
    if "bandwidth" in data:
        config.bandwidth = _float_or_keyword(data["bandwidth"], "bandwidth", "silverman", context)
    if "theta" in data:
        config.theta = _float_or_keyword(data["theta"], "theta", "bootstrap", context)
    if "lambda_grid" in data:
        raw_grid = _as_list(data["lambda_grid"], "lambda_grid", context)
        config.lambda_grid = [_as_float(v, "lambda_grid", context) for v in raw_grid]
    for key in ("bootstrap_replicates", "seed", "max_iterations", "grid_size"):
        if key in data:
            setattr(config, key, _as_int(data[key], key, context))
    for key in ("epsilon", "positivity_floor", "alpha"):
        if key in data:
            setattr(config, key, _as_float(data[key], key, context))
    if "init" in data:
        config.init = str(data["init"])
    validate_estimation(config, context)
    return config


def _parse_benchmark(data: dict[str, object], context: str) -> BenchmarkConfig:
    config = BenchmarkConfig()
    if "models" in data:
        try:
            config.models = [model_kind(str(v)) for v in _as_list(data["models"], "models", context)]
        except ConfigError as e:
            raise ConfigError(f"'models' invalide dans {context} : {e}") from e
    if "thetas" in data:
        config.thetas = [_as_float(v, "thetas", context) for v in _as_list(data["thetas"], "thetas", context)]
    if "sample_sizes" in data:
        config.sample_sizes = [
            _as_int(v, "sample_sizes", context) for v in _as_list(data["sample_sizes"], "sample_sizes", context)
        ]
    if "methods" in data:
        config.methods = [str(v) for v in _as_list(data["methods"], "methods", context)]  # type: ignore[misc]
    for key in ("repeats", "master_seed", "workers", "rmise_grid_size"):
        if key in data:
            setattr(config, key, _as_int(data[key], key, context))
    if "rho" in data:
        config.rho = _as_float(data["rho"], "rho", context)
    if data.get("mu") is not None:
        config.mu = _as_float(data["mu"], "mu", context)
    validate_benchmark(config, context)
    return config


def load_config(path: Path | None = None) -> AppConfig:
    """Charge la configuration ; sans fichier, toutes les valeurs par défaut s'appliquent."""
    if path is None:
        return AppConfig()
    data = _load_yaml(path)
    context = path.name
    unknown = set(data) - {"estimation", "benchmark"}
    if unknown:
        raise ConfigError(f"Section(s) inconnue(s) dans {context} : {', '.join(sorted(unknown))}")

    config = AppConfig(
        estimation=_parse_estimation(_section(data, "estimation", context), context),
        benchmark=_parse_benchmark(_section(data, "benchmark", context), context),
    )
    logger.info(
        "Configuration chargée depuis %s : %d modèle(s), %d taille(s), S=%d",
        path,
        len(config.benchmark.models),
        len(config.benchmark.sample_sizes),
        config.benchmark.repeats,
    )
    return config
