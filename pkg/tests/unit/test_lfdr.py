"""Tests unitaires pour le lFDR plug-in et le FDR cumulé."""

from __future__ import annotations

import numpy as np
import pytest

from lfdr_mix.estimation.lfdr import (
    fdr_from_lfdr,
    fdr_in_input_order,
    lfdr_estimate,
    lfdr_values,
    select_discoveries,
)
from lfdr_mix.models import EmptyInput, Indeterminate, LengthMismatch


class TestLfdrEstimate:
    def test_reference_value(self) -> None:
        assert lfdr_estimate(0.65, 4.0) == pytest.approx(0.317073170, abs=1e-9)

    def test_theta_one(self) -> None:
        assert lfdr_estimate(1.0, 0.0) == 1.0
        assert lfdr_estimate(1.0, 12.0) == 1.0

    def test_zero_alternative_density(self) -> None:
        assert lfdr_estimate(0.4, 0.0) == 1.0

    def test_indeterminate(self) -> None:
        with pytest.raises(Indeterminate):
            lfdr_estimate(0.0, 0.0)

    def test_theta_zero_with_positive_density(self) -> None:
        assert lfdr_estimate(0.0, 2.0) == 0.0

    def test_decreasing_in_density(self) -> None:
        values = [lfdr_estimate(0.7, f) for f in (0.0, 0.5, 1.0, 2.0, 10.0)]
        assert values == sorted(values, reverse=True)
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_invalid_inputs(self) -> None:
        with pytest.raises(ValueError):
            lfdr_estimate(1.2, 1.0)
        with pytest.raises(ValueError):
            lfdr_estimate(0.5, -1.0)

    def test_vectorised_matches_scalar(self) -> None:
        f = np.array([0.0, 0.3, 1.0, 4.0])
        expected = [lfdr_estimate(0.65, float(v)) for v in f]
        np.testing.assert_allclose(lfdr_values(0.65, f), expected, rtol=1e-15)

    def test_vectorised_indeterminate(self) -> None:
        with pytest.raises(Indeterminate):
            lfdr_values(0.0, np.array([1.0, 0.0]))


class TestFdr:
    def test_single_value(self) -> None:
        np.testing.assert_allclose(fdr_from_lfdr([0.3]), [0.3])

    def test_constant(self) -> None:
        np.testing.assert_allclose(fdr_from_lfdr([0.2, 0.2, 0.2]), [0.2, 0.2, 0.2])

    def test_running_mean(self) -> None:
        np.testing.assert_allclose(fdr_from_lfdr([0.1, 0.3]), [0.1, 0.2])

    def test_bounded_by_prefix_extremes(self) -> None:
        values = np.random.default_rng(3).random(50)
        fdr = fdr_from_lfdr(values)
        for i in range(values.size):
            assert values[: i + 1].min() - 1e-15 <= fdr[i] <= values[: i + 1].max() + 1e-15

    def test_empty(self) -> None:
        with pytest.raises(EmptyInput):
            fdr_from_lfdr([])

    def test_input_order_restored(self) -> None:
        p = np.array([0.5, 0.1, 0.3])
        lfdr = np.array([0.9, 0.1, 0.5])
        np.testing.assert_allclose(fdr_in_input_order(p, lfdr), [0.5, 0.1, 0.3])

    def test_ties_keep_input_order(self) -> None:
        p = np.array([0.2, 0.2, 0.1])
        lfdr = np.array([0.4, 0.8, 0.0])
        np.testing.assert_allclose(fdr_in_input_order(p, lfdr), [0.2, 0.4, 0.0])

    def test_length_mismatch(self) -> None:
        with pytest.raises(LengthMismatch):
            fdr_in_input_order([0.1, 0.2], [0.5])


class TestSelectDiscoveries:
    def test_largest_index_below_alpha(self) -> None:
        assert select_discoveries([0.01, 0.02, 0.06, 0.05, 0.2], 0.05) == 4

    def test_none(self) -> None:
        assert select_discoveries([0.3, 0.4], 0.05) == 0

    def test_all(self) -> None:
        assert select_discoveries([0.0, 0.01], 0.05) == 2

    def test_invalid_alpha(self) -> None:
        with pytest.raises(ValueError):
            select_discoveries([0.1], 1.5)
