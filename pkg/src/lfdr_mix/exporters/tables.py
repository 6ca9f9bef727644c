"""Écriture des résultats en CSV (schéma fixe) et JSON."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
import pandas as pd

from lfdr_mix.models import Anomaly, FitResult, PValueSample

if TYPE_CHECKING:
    from lfdr_mix.simulation.benchmark import BenchmarkReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.15g"

FIT_COLUMNS = ["p_value", "f_hat", "lfdr_hat", "fdr_hat"]
SIMULATION_COLUMNS = ["p_value", "z_label", "true_f", "true_lfdr"]
BENCHMARK_COLUMNS = [
    "model",
    "theta",
    "n",
    "method",
    "rmise",
    "rmse",
    "mean_theta_hat",
    "mean_iters",
    "failures",
]


def with_suffix(prefix: Path, suffix: str) -> Path:
    """``out/run`` + ``.csv`` → ``out/run.csv`` (le préfixe peut contenir des points)."""
    return prefix.with_name(prefix.name + suffix)


def _json_float(value: float) -> float | None:
    """Arrondi à 15 chiffres significatifs ; NaN/inf deviennent null."""
    if not math.isfinite(value):
        return None
    return float(FLOAT_FORMAT % value)


def _write_json(path: Path, payload: dict[str, object]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
        f.write("\n")


def _write_csv(path: Path, df: pd.DataFrame) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _anomaly_dict(anomaly: Anomaly) -> dict[str, object]:
    return asdict(anomaly)


def export_fit(
    sample: PValueSample,
    result: FitResult,
    anomalies: list[Anomaly],
    output_prefix: Path,
    *,
    alpha: float,
    n_discoveries: int,
) -> tuple[Path, Path]:
    """Écrit ``<prefix>.json`` (résumé) et ``<prefix>.csv`` (une ligne par p-valeur, ordre d'entrée)."""
    trace = result.trace
    payload: dict[str, object] = {
        "theta_hat": _json_float(result.theta.value),
        "lambda": _json_float(result.theta.lambda_),
        "method": result.method,
        "converged": trace.converged if trace is not None else True,
        "iterations": trace.iterations_used if trace is not None else 0,
        "theta_method": result.theta.method,
        "kernel": result.spec.family,
        "bandwidth": _json_float(result.bandwidth.value),
        "bandwidth_rule": result.bandwidth.rule,
        "n": sample.n,
        "alpha": _json_float(alpha),
        "n_discoveries": n_discoveries,
        "anomalies": [_anomaly_dict(a) for a in anomalies],
    }
    if trace is not None:
        payload["criteria"] = [_json_float(c) for c in trace.criteria]

    json_path = with_suffix(output_prefix, ".json")
    csv_path = with_suffix(output_prefix, ".csv")
    _write_json(json_path, payload)
    df = pd.DataFrame(
        {
            "p_value": sample.values,
            "f_hat": result.f_at_observations,
            "lfdr_hat": result.lfdr.lfdr,
            "fdr_hat": result.fdr,
        },
        columns=FIT_COLUMNS,
    )
    _write_csv(csv_path, df)
    logger.info("Ajustement exporté : %s, %s", json_path, csv_path)
    return json_path, csv_path


def export_simulation(
    p_values: npt.ArrayLike,
    labels: npt.ArrayLike,
    true_f: npt.ArrayLike,
    true_lfdr: npt.ArrayLike,
    output_prefix: Path,
) -> Path:
    """Écrit ``<prefix>.csv`` : p_value, z_label, true_f, true_lfdr."""
    df = pd.DataFrame(
        {
            "p_value": np.asarray(p_values, dtype=np.float64),
            "z_label": np.asarray(labels, dtype=np.int64),
            "true_f": np.asarray(true_f, dtype=np.float64),
            "true_lfdr": np.asarray(true_lfdr, dtype=np.float64),
        },
        columns=SIMULATION_COLUMNS,
    )
    path = with_suffix(output_prefix, ".csv")
    _write_csv(path, df)
    logger.info("Échantillon simulé exporté : %s (%d lignes)", path, len(df))
    return path


def benchmark_dataframe(report: BenchmarkReport) -> pd.DataFrame:
    """Une ligne par cellule × méthode, colonnes du rapport CSV (sans temps d'exécution)."""
    return pd.DataFrame(
        [{column: getattr(row, column) for column in BENCHMARK_COLUMNS} for row in report.rows],
        columns=BENCHMARK_COLUMNS,
    )


def benchmark_payload(report: BenchmarkReport) -> dict[str, object]:
    """Rapport imbriqué par cellule, avec écarts-types, nombre de répliques et temps."""
    cells: dict[tuple[str, float, int], dict[str, object]] = {}
    methods: dict[tuple[str, float, int], dict[str, object]] = {}
    for row in report.rows:
        key = (row.model, row.theta, row.n)
        if key not in cells:
            methods[key] = {}
            cells[key] = {
                "model": row.model,
                "theta": _json_float(row.theta),
                "n": row.n,
                "wall_time": _json_float(row.wall_time),
                "methods": methods[key],
            }
        methods[key][row.method] = {
            "rmise": _json_float(row.rmise),
            "rmise_sd": _json_float(row.rmise_sd),
            "rmse": _json_float(row.rmse),
            "rmse_sd": _json_float(row.rmse_sd),
            "mean_theta_hat": _json_float(row.mean_theta_hat),
            "mean_iters": _json_float(row.mean_iters),
            "failures": row.failures,
            "replicates": row.replicates,
        }
    config = asdict(report.config)
    return {
        "config": config,
        "wall_time": _json_float(report.wall_time),
        "cells": list(cells.values()),
    }


def export_benchmark(report: BenchmarkReport, output_prefix: Path) -> tuple[Path, Path]:
    """Écrit ``<prefix>.csv`` (déterministe) et ``<prefix>.json``."""
    csv_path = with_suffix(output_prefix, ".csv")
    json_path = with_suffix(output_prefix, ".json")
    _write_csv(csv_path, benchmark_dataframe(report))
    _write_json(json_path, benchmark_payload(report))
    logger.info("Rapport de banc exporté : %s, %s", csv_path, json_path)
    return csv_path, json_path

