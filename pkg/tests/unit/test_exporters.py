"""Tests unitaires pour les exports CSV/JSON/Excel et les résumés console."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from openpyxl import load_workbook

from lfdr_mix.config.loader import BenchmarkConfig, EstimationConfig
from lfdr_mix.exporters import (
    export_benchmark,
    export_benchmark_xlsx,
    export_fit,
    export_simulation,
    print_benchmark_summary,
    print_fit_summary,
)
from lfdr_mix.exporters.tables import BENCHMARK_COLUMNS, FIT_COLUMNS, SIMULATION_COLUMNS, with_suffix
from lfdr_mix.models import Anomaly, FitResult, PValueSample
from lfdr_mix.pipeline import fit_sample
from lfdr_mix.simulation.benchmark import BenchmarkReport, BenchmarkRow


def _row(method: str, rmise: float, failures: int = 0) -> BenchmarkRow:
    return BenchmarkRow(
        model="beta_tail",
        theta=0.65,
        n=500,
        method=method,  # type: ignore[arg-type]
        rmise=rmise,
        rmse=0.05,
        mean_theta_hat=0.67,
        mean_iters=12.5 if method in ("kerfdr", "msl") else 0.0,
        failures=failures,
        rmise_sd=0.01,
        rmse_sd=0.002,
        replicates=2 - failures,
        wall_time=0.5,
    )


@pytest.fixture
def report() -> BenchmarkReport:
    config = BenchmarkConfig(
        models=["beta_tail"], thetas=[0.65], sample_sizes=[500], repeats=2, methods=["rwk", "msl"]
    )
    rows = [_row("rwk", 1.0 / 3.0), _row("msl", float("nan"), failures=2)]
    return BenchmarkReport(rows=rows, config=config, wall_time=1.25, failures={"rwk": 0, "msl": 2})


@pytest.fixture
def fitted(beta_sample: PValueSample) -> FitResult:
    return fit_sample(beta_sample, "rwk", EstimationConfig(theta=0.65, bandwidth=0.05))


class TestWithSuffix:
    def test_dotted_prefix(self) -> None:
        assert with_suffix(Path("out/run.v2"), ".csv") == Path("out/run.v2.csv")


class TestExportFit:
    def test_csv_and_json(self, tmp_path: Path, beta_sample: PValueSample, fitted: FitResult) -> None:
        anomaly = Anomaly(type="theta_boundary", severity="info", method="rwk", detail="test")
        json_path, csv_path = export_fit(beta_sample, fitted, [anomaly], tmp_path / "fit", alpha=0.05, n_discoveries=7)
        df = pd.read_csv(csv_path)
        assert list(df.columns) == FIT_COLUMNS
        assert len(df) == beta_sample.n
        np.testing.assert_allclose(df["p_value"].to_numpy(), beta_sample.values, rtol=1e-14)
        np.testing.assert_allclose(df["lfdr_hat"].to_numpy(), fitted.lfdr.lfdr, rtol=1e-14)

        payload = json.loads(json_path.read_text(encoding="utf-8"))
        assert payload["theta_hat"] == 0.65
        assert payload["lambda"] is None
        assert payload["method"] == "rwk"
        assert payload["converged"] is True
        assert payload["iterations"] == 0
        assert payload["kernel"] == "triangular"
        assert payload["bandwidth"] == 0.05
        assert payload["bandwidth_rule"] == "fixed"
        assert payload["n_discoveries"] == 7
        assert payload["anomalies"][0]["type"] == "theta_boundary"
        assert "criteria" not in payload

    def test_creates_parent_directory(self, tmp_path: Path, beta_sample: PValueSample, fitted: FitResult) -> None:
        prefix = tmp_path / "a" / "b" / "fit"
        json_path, csv_path = export_fit(beta_sample, fitted, [], prefix, alpha=0.05, n_discoveries=0)
        assert json_path.exists() and csv_path.exists()


class TestExportSimulation:
    def test_columns_and_precision(self, tmp_path: Path) -> None:
        path = export_simulation([1.0 / 3.0, 0.5], [1, 0], [2.0, 0.0], [0.25, 1.0], tmp_path / "sim")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(SIMULATION_COLUMNS)
        assert lines[1].startswith("0.333333333333333,1,")
        assert len(lines) == 3


class TestExportBenchmark:
    def test_csv_schema(self, tmp_path: Path, report: BenchmarkReport) -> None:
        csv_path, _ = export_benchmark(report, tmp_path / "bench")
        df = pd.read_csv(csv_path)
        assert list(df.columns) == BENCHMARK_COLUMNS
        assert list(df["method"]) == ["rwk", "msl"]
        assert df.loc[1, "failures"] == 2
        assert np.isnan(df.loc[1, "rmise"])

    def test_json_nested_by_cell(self, tmp_path: Path, report: BenchmarkReport) -> None:
        _, json_path = export_benchmark(report, tmp_path / "bench")
        payload = json.loads(json_path.read_text(encoding="utf-8"))
        assert payload["config"]["repeats"] == 2
        assert len(payload["cells"]) == 1
        cell = payload["cells"][0]
        assert cell["model"] == "beta_tail"
        assert set(cell["methods"]) == {"rwk", "msl"}
        assert cell["methods"]["msl"]["rmise"] is None
        assert cell["methods"]["rwk"]["rmise"] == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_xlsx_sheets(self, tmp_path: Path, report: BenchmarkReport) -> None:
        path = export_benchmark_xlsx(report, tmp_path / "bench")
        workbook = load_workbook(path)
        assert workbook.sheetnames == ["Rapport", "Cellules"]
        header = [cell.value for cell in workbook["Rapport"][1]]
        assert header == BENCHMARK_COLUMNS


class TestConsoleSummaries:
    def test_fit_summary(
        self, capsys: pytest.CaptureFixture[str], beta_sample: PValueSample, fitted: FitResult
    ) -> None:
        print_fit_summary(beta_sample, fitted, [], n_discoveries=3)
        out = capsys.readouterr().out
        assert "=== Résumé ===" in out
        assert "Méthode : rwk" in out
        assert "Découvertes : 3" in out
        assert "Aucune anomalie détectée" in out

    def test_benchmark_summary(self, capsys: pytest.CaptureFixture[str], report: BenchmarkReport) -> None:
        print_benchmark_summary(report)
        out = capsys.readouterr().out
        assert "=== Résumé du banc ===" in out
        assert "Échecs : 2" in out
        assert "msl : 2" in out
