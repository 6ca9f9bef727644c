"""Contrôles de cohérence d'un ajustement (convergence, descente, bornes des poids et du lFDR)."""

from __future__ import annotations

import logging

import numpy as np

from lfdr_mix.models import Anomaly, FitResult

logger = logging.getLogger(__name__)

DESCENT_TOLERANCE = 1e-10
RANGE_TOLERANCE = 1e-12


class FitChecker:
    """Produit la liste des anomalies d'un FitResult."""

    @staticmethod
    def check(result: FitResult, *, descent_tolerance: float = DESCENT_TOLERANCE) -> list[Anomaly]:
        anomalies: list[Anomaly] = []
        method = result.method
        trace = result.trace

        if trace is not None and not trace.converged:
            last = trace.records[-1]
            anomalies.append(
                Anomaly(
                    type="no_convergence",
                    severity="warning",
                    method=method,
                    detail=(
                        f"Arrêt après {trace.iterations_used} itérations sans atteindre le seuil "
                        f"(variation relative {last.max_relative_change:.3g})"
                    ),
                    actual_value=str(trace.iterations_used),
                )
            )

        if trace is not None and method == "msl":
            criteria = np.asarray(trace.criteria)
            increases = np.diff(criteria)
            worst = int(np.argmax(increases)) if increases.size else -1
            if increases.size and increases[worst] > descent_tolerance:
                anomalies.append(
                    Anomaly(
                        type="descent_violation",
                        severity="error",
                        method=method,
                        detail=(
                            f"La log-vraisemblance lissée augmente de {increases[worst]:.3g} "
                            f"entre les itérations {worst + 1} et {worst + 2}"
                        ),
                        expected_value=f"<= {criteria[worst]:.15g}",
                        actual_value=f"{criteria[worst + 1]:.15g}",
                    )
                )

        for name, values in (("weights", result.weights), ("lfdr", result.lfdr.lfdr)):
            out = (values < -RANGE_TOLERANCE) | (values > 1.0 + RANGE_TOLERANCE)
            if np.any(out):
                anomalies.append(
                    Anomaly(
                        type=f"{name}_out_of_range",
                        severity="error",
                        method=method,
                        detail=f"{int(out.sum())} valeur(s) de {name} hors de [0, 1]",
                        expected_value="[0, 1]",
                        actual_value=f"[{float(values.min()):.6g}, {float(values.max()):.6g}]",
                    )
                )

        theta = result.theta.value
        if theta in (0.0, 1.0):
            anomalies.append(
                Anomaly(
                    type="theta_boundary",
                    severity="info",
                    method=method,
                    detail=f"θ̂ = {theta:g} : estimation dégénérée de la proportion de nulles",
                    actual_value=f"{theta:g}",
                )
            )

        for anomaly in anomalies:
            level = logging.INFO if anomaly.severity == "info" else logging.WARNING
            logger.log(level, "FitChecker [%s] %s : %s", anomaly.severity, anomaly.type, anomaly.detail)
        return anomalies
