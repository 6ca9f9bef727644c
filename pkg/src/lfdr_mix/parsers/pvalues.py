"""Parser des fichiers de p-valeurs (une valeur par ligne ou CSV avec en-tête)."""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from lfdr_mix.models import ParseError, PValueSample

logger = logging.getLogger(__name__)

DEFAULT_COLUMN = "p_value"
COLUMN_ALIASES: dict[str, list[str]] = {
    DEFAULT_COLUMN: ["pvalue", "p.value", "pval", "p"],
}
SEPARATOR_CANDIDATES = (",", ";", "\t")
MAX_REPORTED_LINES = 20


class PValueParser:
    """Lit un fichier de p-valeurs et construit un PValueSample validé."""

    @staticmethod
    def detect_separator(header: str, candidates: tuple[str, ...] = SEPARATOR_CANDIDATES) -> str:
        """Détecte le séparateur en comptant les occurrences dans l'en-tête."""
        best = candidates[0]
        best_count = 0
        for sep in candidates:
            count = header.count(sep)
            if count > best_count:
                best_count = count
                best = sep
        return best

    @staticmethod
    def _first_line(source: Path) -> tuple[str, int]:
        """Première ligne non vide et son numéro (1-based)."""
        try:
            with open(source, encoding="utf-8-sig") as f:
                for number, line in enumerate(f, start=1):
                    if line.strip():
                        return line.rstrip("\r\n"), number
        except UnicodeDecodeError as e:
            raise ParseError(f"Fichier illisible {source} : encodage UTF-8 attendu ({e.reason})") from e
        raise ParseError(f"Fichier vide : {source}")

    @staticmethod
    def _is_number(text: str) -> bool:
        try:
            float(text)
        except ValueError:
            return False
        return True

    @classmethod
    def _has_header(cls, first: str, separator: str, column: str | None) -> bool:
        """En-tête si le premier champ n'est pas numérique ; une ligne à champ unique
        n'est un en-tête que si elle nomme la colonne attendue ou l'un de ses alias.
        """
        fields = [field.strip() for field in first.split(separator)]
        if cls._is_number(fields[0]):
            return False
        if len(fields) > 1:
            return True
        known = {column} if column is not None else {DEFAULT_COLUMN, *COLUMN_ALIASES[DEFAULT_COLUMN]}
        return fields[0] in known

    @staticmethod
    def apply_column_aliases(df: pd.DataFrame, aliases: dict[str, list[str]]) -> pd.DataFrame:
        """Renomme la première colonne alias trouvée vers le nom attendu."""
        rename_map: dict[str, str] = {}
        for expected, alternatives in aliases.items():
            if expected not in df.columns:
                for alt in alternatives:
                    if alt in df.columns:
                        rename_map[alt] = expected
                        break
        return df.rename(columns=rename_map) if rename_map else df

    def parse(self, source: Path, column: str | None = None) -> PValueSample:
        """Parse ``source`` ; toutes les valeurs invalides sont signalées en une seule ParseError."""
        if not source.exists():
            raise ParseError(f"Fichier introuvable : {source}")
        first, first_number = self._first_line(source)
        separator = self.detect_separator(first)
        has_header = self._has_header(first, separator, column)

        try:
            df = pd.read_csv(
                source,
                sep=separator,
                header=first_number - 1 if has_header else None,
                dtype=str,
                skip_blank_lines=False,
                keep_default_na=False,
                encoding="utf-8-sig",
            )
        except (pd.errors.ParserError, UnicodeDecodeError) as e:
            raise ParseError(f"Fichier illisible {source} : {e}") from e

        if has_header:
            df.columns = df.columns.str.strip()
            target = column or DEFAULT_COLUMN
            if column is None:
                df = self.apply_column_aliases(df, COLUMN_ALIASES)
            if target not in df.columns:
                raise ParseError(f"Colonne '{target}' absente de {source} (colonnes : {', '.join(df.columns)})")
            raw = df[target]
            offset = first_number + 1
        else:
            if column is not None:
                logger.warning("Fichier sans en-tête : l'option de colonne '%s' est ignorée", column)
            raw = df.iloc[:, 0]
            offset = 1

        text = raw.fillna("").astype(str).str.strip()
        lines = pd.Series(range(offset, offset + len(text)), index=text.index)
        filled = text != ""
        values = pd.to_numeric(text[filled], errors="coerce")
        invalid = values.isna() | (values < 0.0) | (values > 1.0)

        if invalid.any():
            bad = [(int(lines[i]), text[i]) for i in values.index[invalid]]
            listed = ", ".join(f"ligne {line} ('{value}')" for line, value in bad[:MAX_REPORTED_LINES])
            more = f" et {len(bad) - MAX_REPORTED_LINES} autre(s)" if len(bad) > MAX_REPORTED_LINES else ""
            raise ParseError(
                f"{len(bad)} p-valeur(s) invalide(s) dans {source} (attendu : réel dans [0, 1]) : {listed}{more}",
                lines=[line for line, _ in bad],
            )
        if values.empty:
            raise ParseError(f"Aucune p-valeur dans {source}")

        logger.info("%d p-valeurs lues depuis %s", len(values), source)
        return PValueSample(values=values.to_numpy(dtype=float))
