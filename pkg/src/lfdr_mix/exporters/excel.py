"""Export Excel du rapport de banc et résumés console."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from lfdr_mix.exporters.tables import BENCHMARK_COLUMNS, benchmark_dataframe, with_suffix
from lfdr_mix.models import Anomaly, FitResult, PValueSample

if TYPE_CHECKING:
    from lfdr_mix.simulation.benchmark import BenchmarkReport

CELL_COLUMNS = [
    "model",
    "theta",
    "n",
    "method",
    "rmise",
    "rmise_sd",
    "rmse",
    "rmse_sd",
    "replicates",
    "failures",
    "wall_time",
]


def export_benchmark_xlsx(report: BenchmarkReport, output_prefix: Path) -> Path:
    """Classeur ``<prefix>.xlsx`` : onglet Rapport (schéma CSV) et onglet Cellules (détail Monte Carlo)."""
    df_report = benchmark_dataframe(report)
    df_cells = pd.DataFrame(
        [{column: getattr(row, column) for column in CELL_COLUMNS} for row in report.rows],
        columns=CELL_COLUMNS,
    )
    path = with_suffix(output_prefix, ".xlsx")
    path.parent.mkdir(parents=True, exist_ok=True)
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        df_report.to_excel(writer, sheet_name="Rapport", index=False)
        df_cells.to_excel(writer, sheet_name="Cellules", index=False)
    return path


def _print_anomalies(anomalies: list[Anomaly]) -> None:
    n_serious = len([a for a in anomalies if a.severity != "info"])
    n_info = len([a for a in anomalies if a.severity == "info"])
    if not anomalies:
        print("Aucune anomalie détectée")
        return
    print(f"Anomalies : {n_serious} warning/error, {n_info} info")
    counts: Counter[str] = Counter(a.type for a in anomalies)
    for anomaly_type, count in counts.items():
        print(f"    {anomaly_type:<22s}: {count}")


def print_fit_summary(
    sample: PValueSample,
    result: FitResult,
    anomalies: list[Anomaly],
    n_discoveries: int,
) -> None:
    """Affiche un résumé de l'ajustement en console."""
    lfdr = result.lfdr.lfdr
    print("=== Résumé ===")
    print(f"Méthode : {result.method} (noyau {result.spec.family}, h={result.bandwidth.value:.6g})")
    print(f"Observations : {sample.n}")
    print(f"θ̂ : {result.theta.value:.6g} (λ={result.theta.lambda_:.3g}, {result.theta.method})")
    if result.trace is not None:
        status = "convergé" if result.trace.converged else "non convergé"
        print(f"Itérations : {result.trace.iterations_used} ({status})")
    print(f"lFDR̂ : min {float(lfdr.min()):.4f}, médiane {float(np.median(lfdr)):.4f}, max {float(lfdr.max()):.4f}")
    print(f"Découvertes : {n_discoveries}")
    _print_anomalies(anomalies)


def print_benchmark_summary(report: BenchmarkReport) -> None:
    """Affiche le tableau RMISE/RMSE par cellule et méthode."""
    df = benchmark_dataframe(report)[BENCHMARK_COLUMNS]
    print("=== Résumé du banc ===")
    print(f"Cellules × méthodes : {len(df)}, répliques par cellule : {report.config.repeats}")
    with pd.option_context("display.max_rows", None, "display.width", 160, "display.float_format", "{:.4f}".format):
        print(df.to_string(index=False))
    total_failures = sum(report.failures.values())
    if total_failures:
        print(f"Échecs : {total_failures}")
        for method, count in report.failures.items():
            if count:
                print(f"  {method} : {count}")
    print(f"Durée : {report.wall_time:.1f} s")
