"""Tests unitaires pour le point d'entrée CLI main.py."""

from __future__ import annotations

from pathlib import Path

import pandas as pd
import pytest

from lfdr_mix.main import main, parse_args


class TestParseArgs:
    def test_fit_defaults(self) -> None:
        args = parse_args(["fit", "--input", "p.txt", "--output-prefix", "out/run"])
        assert args.command == "fit"
        assert args.method == "msl"
        assert args.input == Path("p.txt")
        assert args.kernel is None
        assert args.theta is None
        assert args.log_level == "INFO"

    def test_fit_keywords_and_numbers(self) -> None:
        args = parse_args(
            ["fit", "--input", "p.txt", "--output-prefix", "o", "--method", "rwk", "--theta", "bootstrap",
             "--bandwidth", "0.05"]
        )
        assert args.theta == "bootstrap"
        assert args.bandwidth == 0.05

    def test_invalid_theta_keyword(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args(["fit", "--input", "p.txt", "--output-prefix", "o", "--theta", "auto"])
        assert exc_info.value.code == 2

    def test_msl_with_compact_kernel(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args(["fit", "--input", "p.txt", "--output-prefix", "o", "--kernel", "rectangular"])
        assert exc_info.value.code == 2

    def test_rwk_with_compact_kernel(self) -> None:
        args = parse_args(["fit", "--input", "p.txt", "--output-prefix", "o", "--method", "rwk", "--kernel",
                           "rectangular"])
        assert args.kernel == "rectangular"

    def test_missing_command(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args([])
        assert exc_info.value.code == 2

    def test_simulate_model_by_number(self) -> None:
        args = parse_args(["simulate", "--model", "2", "--theta", "0.8", "--n", "10", "--output-prefix", "s"])
        assert args.model == "gaussian_shift"
        assert args.seed == 0

    def test_unknown_model(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args(["simulate", "--model", "4", "--theta", "0.8", "--n", "10", "--output-prefix", "s"])
        assert exc_info.value.code == 2

    def test_bench_lists(self) -> None:
        args = parse_args(["bench", "--model", "1", "3", "--n", "100", "200", "--S", "3", "--output-prefix", "b"])
        assert args.model == ["beta_tail", "laplace_shift"]
        assert args.n == [100, 200]
        assert args.S == 3
        assert args.xlsx is False

    def test_log_level_invalid(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args(["simulate", "--model", "1", "--theta", "0.5", "--n", "5", "--output-prefix", "s",
                        "--log-level", "VERBOSE"])
        assert exc_info.value.code == 2


class TestMainFit:
    def test_invalid_value_exits_2(self, tmp_path: Path) -> None:
        source = tmp_path / "p.txt"
        source.write_text("0.1\n1.5\n0.3\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", str(source), "--output-prefix", str(tmp_path / "out")])
        assert exc_info.value.code == 2
        assert not (tmp_path / "out.csv").exists()

    def test_undecodable_input_exits_2(self, tmp_path: Path) -> None:
        source = tmp_path / "p.txt"
        source.write_bytes(b"0.1\n0.2\n\xff\xfe0.3\n")
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", str(source), "--output-prefix", str(tmp_path / "out")])
        assert exc_info.value.code == 2

    def test_missing_config_exits_2(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", "p.txt", "--output-prefix", "o", "--config", str(tmp_path / "absent.yaml")])
        assert exc_info.value.code == 2

    def test_invalid_cli_option_exits_2(self, tmp_path: Path, fixtures_dir: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", str(fixtures_dir / "pvalues" / "plain.txt"), "--output-prefix",
                  str(tmp_path / "o"), "--method", "rwk", "--alpha", "2"])
        assert exc_info.value.code == 2

    def test_degenerate_estimation_exits_3(self, tmp_path: Path) -> None:
        source = tmp_path / "p.txt"
        source.write_text("0.1\n0.5\n0.9\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", str(source), "--output-prefix", str(tmp_path / "out"), "--method", "rwk",
                  "--kernel", "rectangular", "--bandwidth", "0.01", "--theta", "0.5"])
        assert exc_info.value.code == 3

    def test_theta_zero_iterative_exits_3(self, tmp_path: Path, fixtures_dir: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["fit", "--input", str(fixtures_dir / "pvalues" / "plain.txt"), "--output-prefix",
                  str(tmp_path / "out"), "--theta", "0", "--grid-size", "128"])
        assert exc_info.value.code == 3

    def test_success(self, tmp_path: Path, fixtures_dir: Path) -> None:
        main(["fit", "--input", str(fixtures_dir / "pvalues" / "semicolon.csv"), "--output-prefix",
              str(tmp_path / "out"), "--method", "naive", "--theta", "0.5", "--bandwidth", "0.3"])
        df = pd.read_csv(tmp_path / "out.csv")
        assert list(df.columns) == ["p_value", "f_hat", "lfdr_hat", "fdr_hat"]
        assert len(df) == 3


class TestMainSimulate:
    def _simulate(self, prefix: Path, *extra: str) -> pd.DataFrame:
        main(["simulate", "--model", "1", "--theta", "0.65", "--n", "200", "--seed", "4", "--output-prefix",
              str(prefix), *extra])
        return pd.read_csv(prefix.with_name(prefix.name + ".csv"))

    def test_columns(self, tmp_path: Path) -> None:
        df = self._simulate(tmp_path / "sim")
        assert list(df.columns) == ["p_value", "z_label", "true_f", "true_lfdr"]
        assert len(df) == 200

    def test_same_seed_same_file(self, tmp_path: Path) -> None:
        self._simulate(tmp_path / "a")
        self._simulate(tmp_path / "b")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_pure_null(self, tmp_path: Path) -> None:
        main(["simulate", "--model", "2", "--theta", "1", "--n", "50", "--output-prefix", str(tmp_path / "null")])
        df = pd.read_csv(tmp_path / "null.csv")
        assert (df["z_label"] == 0).all()
        assert (df["true_lfdr"] == 1.0).all()

    def test_invalid_theta_exits_2(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["simulate", "--model", "1", "--theta", "1.5", "--n", "10", "--output-prefix", str(tmp_path / "s")])
        assert exc_info.value.code == 2

    def test_invalid_size_exits_2(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["simulate", "--model", "1", "--theta", "0.5", "--n", "0", "--output-prefix", str(tmp_path / "s")])
        assert exc_info.value.code == 2


class TestMainBench:
    def test_invalid_sample_size_exits_2(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["bench", "--n", "1", "--S", "1", "--output-prefix", str(tmp_path / "b")])
        assert exc_info.value.code == 2

    def test_compact_kernel_for_msl_in_config_exits_2(self, tmp_path: Path) -> None:
        config = tmp_path / "c.yaml"
        config.write_text("estimation:\n  msl_kernel: triangular\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc_info:
            main(["bench", "--config", str(config), "--output-prefix", str(tmp_path / "b")])
        assert exc_info.value.code == 2
