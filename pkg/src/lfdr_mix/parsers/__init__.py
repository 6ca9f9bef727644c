"""Lecture des fichiers de p-valeurs."""

from lfdr_mix.parsers.pvalues import PValueParser

__all__ = ["PValueParser"]
