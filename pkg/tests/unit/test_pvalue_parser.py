"""Tests unitaires pour le parser de fichiers de p-valeurs."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from lfdr_mix.models import ParseError
from lfdr_mix.parsers import PValueParser


def _write(tmp_path: Path, text: str, name: str = "pvalues.csv") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestDetectSeparator:
    @pytest.mark.parametrize(("header", "expected"), [("a,b", ","), ("a;b;c", ";"), ("a\tb", "\t"), ("p", ",")])
    def test_detection(self, header: str, expected: str) -> None:
        assert PValueParser.detect_separator(header) == expected


class TestParse:
    def test_one_value_per_line(self, fixtures_dir: Path) -> None:
        sample = PValueParser().parse(fixtures_dir / "pvalues" / "plain.txt")
        np.testing.assert_allclose(sample.values, [0.001, 0.2, 0.35, 0.9, 0.5])

    def test_semicolon_with_alias(self, fixtures_dir: Path) -> None:
        sample = PValueParser().parse(fixtures_dir / "pvalues" / "semicolon.csv")
        np.testing.assert_allclose(sample.values, [0.01, 0.4, 0.77])

    def test_tab_separated(self, tmp_path: Path) -> None:
        sample = PValueParser().parse(_write(tmp_path, "id\tp_value\nx\t0.3\ny\t1\n"))
        np.testing.assert_allclose(sample.values, [0.3, 1.0])

    def test_custom_column(self, tmp_path: Path) -> None:
        path = _write(tmp_path, "id,p_value,score\na,0.9,0.1\nb,0.8,0.2\n")
        np.testing.assert_allclose(PValueParser().parse(path, column="score").values, [0.1, 0.2])

    def test_boundaries_accepted(self, tmp_path: Path) -> None:
        sample = PValueParser().parse(_write(tmp_path, "0\n1\n0.5\n"))
        np.testing.assert_allclose(sample.values, [0.0, 1.0, 0.5])

    def test_invalid_values_reported_with_lines(self, fixtures_dir: Path) -> None:
        with pytest.raises(ParseError) as exc_info:
            PValueParser().parse(fixtures_dir / "pvalues" / "invalid.csv")
        assert exc_info.value.lines == [3, 4]
        assert "ligne 3 ('1.5')" in str(exc_info.value)
        assert "ligne 4 ('abc')" in str(exc_info.value)

    def test_invalid_value_without_header(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError) as exc_info:
            PValueParser().parse(_write(tmp_path, "0.1\n1.5\n0.2\n-0.01\n"))
        assert exc_info.value.lines == [2, 4]

    def test_line_numbers_count_blank_lines(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError) as exc_info:
            PValueParser().parse(_write(tmp_path, "\np_value\n0.2\n\n7\n"))
        assert exc_info.value.lines == [5]

    def test_missing_column(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="score"):
            PValueParser().parse(_write(tmp_path, "id,p_value\na,0.1\n"), column="score")

    def test_empty_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="vide"):
            PValueParser().parse(_write(tmp_path, "\n\n"))

    def test_header_only(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="Aucune"):
            PValueParser().parse(_write(tmp_path, "p_value\n"))

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="introuvable"):
            PValueParser().parse(tmp_path / "absent.csv")

    def test_non_numeric_first_line_without_header(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError) as exc_info:
            PValueParser().parse(_write(tmp_path, "abc\n0.2\n0.3\n"))
        assert exc_info.value.lines == [1]
        assert "ligne 1 ('abc')" in str(exc_info.value)

    def test_single_column_header_alias(self, tmp_path: Path) -> None:
        np.testing.assert_allclose(PValueParser().parse(_write(tmp_path, "pval\n0.3\n0.6\n")).values, [0.3, 0.6])

    def test_single_column_custom_header(self, tmp_path: Path) -> None:
        sample = PValueParser().parse(_write(tmp_path, "score\n0.25\n"), column="score")
        np.testing.assert_allclose(sample.values, [0.25])

    def test_not_utf8(self, tmp_path: Path) -> None:
        path = tmp_path / "latin.txt"
        path.write_bytes(b"0.1\n0.2\n\xff\xfe0.3\n")
        with pytest.raises(ParseError, match="illisible"):
            PValueParser().parse(path)
