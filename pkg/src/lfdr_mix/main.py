"""Point d'entrée CLI de lfdr-mix."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path
from typing import TypeVar

from lfdr_mix.config.loader import (
    AppConfig,
    BenchmarkConfig,
    EstimationConfig,
    load_config,
    validate_benchmark,
    validate_estimation,
)
from lfdr_mix.exporters.excel import export_benchmark_xlsx, print_benchmark_summary
from lfdr_mix.exporters.tables import export_benchmark, export_simulation
from lfdr_mix.models import KERNEL_FAMILIES, METHODS, ConfigError, LfdrMixError, ParseError
from lfdr_mix.pipeline import FitOrchestrator
from lfdr_mix.simulation.benchmark import run_benchmark
from lfdr_mix.simulation.models import (
    clip_open,
    generate_sample,
    make_model,
    model_kind,
    true_f_values,
    true_lfdr_values,
)

logger = logging.getLogger("lfdr_mix.main")

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s — %(message)s"
VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

ConfigT = TypeVar("ConfigT", EstimationConfig, BenchmarkConfig)


def _float_or(keyword: str) -> Callable[[str], float | str]:
    """Type argparse : réel ou mot-clé."""

    def convert(text: str) -> float | str:
        if text.strip().lower() == keyword:
            return keyword
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"attendu : réel ou '{keyword}' (reçu : {text!r})") from None

    convert.__name__ = f"réel|{keyword}"
    return convert


def _model_arg(text: str) -> str:
    try:
        return model_kind(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="Fichier de configuration YAML (optionnel)")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=VALID_LOG_LEVELS,
        help="Niveau de log (défaut : INFO)",
    )


def _add_estimation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kernel",
        choices=KERNEL_FAMILIES,
        default=None,
        help="Noyau (défaut : triangular, gaussian pour msl)",
    )
    parser.add_argument("--bandwidth", type=_float_or("silverman"), default=None, help="Fenêtre h ou 'silverman'")
    parser.add_argument("--epsilon", type=float, default=None, help="Seuil d'arrêt (variation relative des poids)")
    parser.add_argument("--max-iter", type=int, default=None, help="Nombre maximal d'itérations")
    parser.add_argument("--grid-size", type=int, default=None, help="Taille G de la grille de quadrature")
    parser.add_argument("--init", choices=["uniform", "half"], default=None, help="Initialisation des poids")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfdr-mix",
        description="Estimation non paramétrique de la densité alternative et du lFDR",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Ajuste un estimateur sur un fichier de p-valeurs")
    _add_common(fit)
    _add_estimation(fit)
    fit.add_argument("--input", type=Path, required=True, help="Fichier de p-valeurs")
    fit.add_argument("--output-prefix", type=Path, required=True, help="Préfixe des fichiers .json/.csv")
    fit.add_argument("--method", choices=METHODS, default="msl", help="Méthode d'estimation (défaut : msl)")
    fit.add_argument("--theta", type=_float_or("bootstrap"), default=None, help="θ fixé ou 'bootstrap'")
    fit.add_argument("--seed", type=int, default=None, help="Graine (bootstrap et initialisation)")
    fit.add_argument("--column", default=None, help="Colonne des p-valeurs (défaut : p_value et alias)")
    fit.add_argument("--alpha", type=float, default=None, help="Niveau de FDR pour le nombre de découvertes")

    simulate = sub.add_parser("simulate", help="Simule un échantillon de p-valeurs")
    _add_common(simulate)
    simulate.add_argument("--model", type=_model_arg, required=True, help="Modèle : 1, 2, 3 ou nom")
    simulate.add_argument("--theta", type=float, required=True, help="Proportion de nulles θ")
    simulate.add_argument("--n", type=int, required=True, help="Taille d'échantillon")
    simulate.add_argument("--rho", type=float, default=None, help="ρ du modèle 1 (défaut : 4)")
    simulate.add_argument("--mu", type=float, default=None, help="μ des modèles 2-3 (défaut : 2 et 1)")
    simulate.add_argument("--seed", type=int, default=0, help="Graine du tirage")
    simulate.add_argument("--output-prefix", type=Path, required=True, help="Préfixe du fichier .csv")

    bench = sub.add_parser("bench", help="Banc Monte Carlo sur les modèles simulés")
    _add_common(bench)
    _add_estimation(bench)
    bench.add_argument("--model", type=_model_arg, nargs="+", default=None, help="Modèles (1, 2, 3 ou noms)")
    bench.add_argument("--theta", type=float, nargs="+", default=None, help="Valeurs de θ")
    bench.add_argument("--n", type=int, nargs="+", default=None, help="Tailles d'échantillon")
    bench.add_argument("--S", type=int, default=None, help="Nombre de répliques par cellule")
    bench.add_argument("--method", choices=METHODS, nargs="+", default=None, help="Méthodes comparées")
    bench.add_argument("--rho", type=float, default=None, help="ρ du modèle 1")
    bench.add_argument("--mu", type=float, default=None, help="μ des modèles 2-3")
    bench.add_argument("--master-seed", type=int, default=None, help="Graine maîtresse")
    bench.add_argument("--workers", type=int, default=None, help="Nombre de processus")
    bench.add_argument("--output-prefix", type=Path, required=True, help="Préfixe des fichiers .csv/.json")
    bench.add_argument("--xlsx", action="store_true", help="Écrit aussi un classeur Excel")
    return parser


def parse_args(args: list[str] | None = None) -> argparse.Namespace:
    """Parse les arguments CLI ; msl avec un noyau à support compact est refusé dès le parsing."""
    parser = build_parser()
    parsed = parser.parse_args(args)
    if parsed.command == "fit" and parsed.method == "msl" and parsed.kernel not in (None, "gaussian"):
        parser.error(f"la méthode msl requiert le noyau gaussian (reçu : {parsed.kernel})")
    return parsed


def _override(obj: ConfigT, **values: object) -> ConfigT:
    """Applique les options CLI renseignées (None = valeur de la configuration)."""
    return replace(obj, **{k: v for k, v in values.items() if v is not None})  # type: ignore[arg-type]


def _estimation_options(parsed: argparse.Namespace, config: AppConfig) -> EstimationConfig:
    estimation = config.estimation
    if getattr(parsed, "method", None) == "msl" and parsed.kernel is not None:
        estimation = replace(estimation, msl_kernel=parsed.kernel)
    elif parsed.kernel is not None:
        estimation = replace(estimation, kernel=parsed.kernel)
    options = _override(
        estimation,
        bandwidth=parsed.bandwidth,
        epsilon=parsed.epsilon,
        max_iterations=parsed.max_iter,
        grid_size=parsed.grid_size,
        init=parsed.init,
        theta=getattr(parsed, "theta", None) if parsed.command == "fit" else None,
        seed=getattr(parsed, "seed", None),
        alpha=getattr(parsed, "alpha", None),
    )
    validate_estimation(options, "la ligne de commande")
    return options


def cmd_fit(parsed: argparse.Namespace, config: AppConfig) -> int:
    """Ajuste la méthode demandée et écrit <prefix>.json et <prefix>.csv."""
    try:
        options = _estimation_options(parsed, config)
    except ConfigError as e:
        logger.error("Erreur de configuration : %s", e)
        return 2
    try:
        FitOrchestrator().run(parsed.input, parsed.output_prefix, parsed.method, options, column=parsed.column)
    except ParseError as e:
        logger.error("Fichier d'entrée invalide : %s", e)
        return 2
    except ConfigError as e:
        logger.error("Erreur de configuration : %s", e)
        return 2
    except LfdrMixError as e:
        logger.error("Échec de l'estimation (%s) : %s", type(e).__name__, e)
        return 3
    return 0


def cmd_simulate(parsed: argparse.Namespace, config: AppConfig) -> int:
    """Simule un échantillon et écrit p_value, z_label, true_f, true_lfdr."""
    try:
        model = make_model(parsed.model, parsed.theta, rho=parsed.rho, mu=parsed.mu)
        if parsed.n < 1:
            raise ConfigError(f"--n doit être ≥ 1 (reçu : {parsed.n})")
    except ConfigError as e:
        logger.error("Paramètres de simulation invalides : %s", e)
        return 2
    try:
        sample, labels = generate_sample(model, parsed.n, parsed.seed)
        inside = clip_open(sample.values)
        export_simulation(
            sample.values,
            labels,
            true_f_values(model, inside),
            true_lfdr_values(model, inside),
            parsed.output_prefix,
        )
    except LfdrMixError as e:
        logger.error("Échec de la simulation (%s) : %s", type(e).__name__, e)
        return 3
    logger.info("Simulation %s : θ=%g, n=%d, graine %d", model.kind, model.theta, parsed.n, parsed.seed)
    return 0


def cmd_bench(parsed: argparse.Namespace, config: AppConfig) -> int:
    """Exécute le banc et écrit le rapport CSV/JSON (et Excel sur demande)."""
    try:
        options = _estimation_options(parsed, config)
        bench = _override(
            config.benchmark,
            models=parsed.model,
            thetas=parsed.theta,
            sample_sizes=parsed.n,
            repeats=parsed.S,
            methods=parsed.method,
            rho=parsed.rho,
            mu=parsed.mu,
            master_seed=parsed.master_seed,
            workers=parsed.workers,
        )
        validate_benchmark(bench, "la ligne de commande")
    except ConfigError as e:
        logger.error("Erreur de configuration : %s", e)
        return 2

    report = run_benchmark(bench, options)
    export_benchmark(report, parsed.output_prefix)
    if parsed.xlsx:
        export_benchmark_xlsx(report, parsed.output_prefix)
    print_benchmark_summary(report)
    return 0


COMMANDS = {
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
}


def main(args: list[str] | None = None) -> None:
    """Point d'entrée principal."""
    parsed = parse_args(args)

    logging.basicConfig(
        level=getattr(logging, parsed.log_level),
        format=LOG_FORMAT,
    )

    try:
        config = load_config(parsed.config)
    except ConfigError as e:
        logger.error("Erreur de configuration : %s", e)
        sys.exit(2)

    try:
        code = COMMANDS[parsed.command](parsed, config)
    except Exception:
        logger.exception("Erreur inattendue")
        sys.exit(1)
    if code != 0:
        sys.exit(code)


if __name__ == "__main__":
    main()
