"""Exporteurs CSV, JSON et Excel."""

from lfdr_mix.exporters.excel import export_benchmark_xlsx, print_benchmark_summary, print_fit_summary
from lfdr_mix.exporters.tables import export_benchmark, export_fit, export_simulation

__all__ = [
    "export_benchmark",
    "export_benchmark_xlsx",
    "export_fit",
    "export_simulation",
    "print_benchmark_summary",
    "print_fit_summary",
]
