"""Tests unitaires pour les modèles génératifs de p-valeurs."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import integrate, stats

from lfdr_mix.models import ConfigError, DomainError
from lfdr_mix.simulation.models import (
    clip_open,
    generate_sample,
    make_model,
    model_kind,
    true_f,
    true_f_values,
    true_lfdr,
    true_lfdr_values,
)


class TestModelKind:
    @pytest.mark.parametrize(
        ("value", "expected"),
        [("1", "beta_tail"), (2, "gaussian_shift"), ("3", "laplace_shift"), ("laplace_shift", "laplace_shift")],
    )
    def test_resolution(self, value: str | int, expected: str) -> None:
        assert model_kind(value) == expected

    @pytest.mark.parametrize("value", ["4", "0", "cauchy"])
    def test_unknown(self, value: str) -> None:
        with pytest.raises(ConfigError):
            model_kind(value)


class TestMakeModel:
    def test_defaults(self) -> None:
        assert make_model(1, 0.65).rho == 4.0
        assert make_model(2, 0.65).mu == 2.0
        assert make_model(3, 0.65).mu == 1.0

    def test_overrides(self) -> None:
        model = make_model("gaussian_shift", 0.8, mu=1.5)
        assert model.mu == 1.5
        assert model.theta == 0.8

    @pytest.mark.parametrize(("theta", "rho"), [(1.2, None), (-0.1, None), (0.5, 0.0), (0.5, -2.0)])
    def test_invalid(self, theta: float, rho: float | None) -> None:
        with pytest.raises(ConfigError):
            make_model(1, theta, rho=rho)


class TestGenerateSample:
    def test_same_seed_same_sample(self) -> None:
        model = make_model(2, 0.7)
        first, labels_first = generate_sample(model, 300, seed=5)
        second, labels_second = generate_sample(model, 300, seed=5)
        np.testing.assert_array_equal(first.values, second.values)
        np.testing.assert_array_equal(labels_first, labels_second)

    def test_values_in_unit_interval(self) -> None:
        for kind in (1, 2, 3):
            sample, _ = generate_sample(make_model(kind, 0.5), 2000, seed=kind)
            assert np.all((sample.values >= 0.0) & (sample.values <= 1.0))

    def test_pure_null_is_uniform(self) -> None:
        sample, labels = generate_sample(make_model(1, 1.0), 5000, seed=3)
        assert not labels.any()
        assert stats.kstest(sample.values, "uniform").pvalue > 0.01

    def test_null_component_is_uniform(self) -> None:
        sample, labels = generate_sample(make_model(2, 0.6), 5000, seed=4)
        assert stats.kstest(sample.values[labels == 0], "uniform").pvalue > 0.01

    def test_beta_alternative_mean(self) -> None:
        sample, labels = generate_sample(make_model(1, 0.0), 100_000, seed=6)
        assert labels.all()
        standard_error = np.sqrt(4.0 / (25.0 * 6.0) / 100_000)
        assert abs(float(sample.values.mean()) - 0.2) <= 3.0 * standard_error

    def test_label_proportions(self) -> None:
        theta, n = 0.65, 1000
        bound = 4.0 * np.sqrt(theta * (1.0 - theta) / n)
        inside = 0
        for seed in range(100):
            _, labels = generate_sample(make_model(1, theta), n, seed=seed)
            if abs(float(np.mean(labels == 0)) - theta) <= bound:
                inside += 1
        assert inside >= 99

    def test_invalid_size(self) -> None:
        with pytest.raises(ValueError):
            generate_sample(make_model(1, 0.5), 0, seed=0)


class TestTrueDensity:
    def test_beta_at_zero(self) -> None:
        assert true_f(make_model(1, 0.65), 0.0) == pytest.approx(4.0)
        assert true_f(make_model(1, 0.65), 1.0) == 0.0

    def test_beta_integrates_to_one(self) -> None:
        model = make_model(1, 0.65)
        total, _ = integrate.quad(lambda x: true_f(model, x), 0.0, 1.0, epsabs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_gaussian_integrates_to_one(self) -> None:
        model = make_model(2, 0.65)
        total, _ = integrate.quad(
            lambda t: true_f(model, float(stats.norm.sf(t))) * float(stats.norm.pdf(t)), -8.0, 12.0, epsabs=1e-12
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_laplace_integrates_to_one(self) -> None:
        model = make_model(3, 0.65)
        total, _ = integrate.quad(
            lambda t: true_f(model, float(stats.laplace.sf(t))) * float(stats.laplace.pdf(t)),
            -30.0,
            30.0,
            points=[0.0, model.mu],
            epsabs=1e-12,
            limit=200,
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_gaussian_matches_histogram(self) -> None:
        model = make_model(2, 0.0)
        n = 1_000_000
        sample, _ = generate_sample(model, n, seed=12)
        edges = np.linspace(0.0, 1.0, 21)
        counts, _ = np.histogram(sample.values, bins=edges)
        for b in range(20):
            expected, _ = integrate.quad(lambda x: true_f(model, x), edges[b], edges[b + 1], limit=200)
            standard_error = np.sqrt(expected * (1.0 - expected) / n)
            assert abs(counts[b] / n - expected) <= 3.0 * standard_error + 1e-6

    @pytest.mark.parametrize("kind", [2, 3])
    def test_open_interval_only(self, kind: int) -> None:
        model = make_model(kind, 0.5)
        with pytest.raises(DomainError):
            true_f(model, 0.0)
        with pytest.raises(DomainError):
            true_f(model, 1.0)

    def test_beta_outside_unit_interval(self) -> None:
        with pytest.raises(DomainError):
            true_f(make_model(1, 0.5), 1.2)

    def test_clip_open_keeps_extremes_defined(self) -> None:
        values = true_f_values(make_model(2, 0.5), clip_open([0.0, 0.5, 1.0]))
        assert np.all(np.isfinite(values))


class TestTrueLfdr:
    def test_reference_values(self) -> None:
        model = make_model(1, 0.65)
        assert true_lfdr(model, 0.0) == pytest.approx(0.317073170, abs=1e-9)
        assert true_lfdr(model, 1.0) == 1.0

    def test_pure_null(self) -> None:
        np.testing.assert_array_equal(true_lfdr_values(make_model(2, 1.0), [0.1, 0.5, 0.9]), [1.0, 1.0, 1.0])

    @pytest.mark.parametrize("kind", [1, 2, 3])
    def test_increasing_and_bounded(self, kind: int) -> None:
        x = np.linspace(0.001, 0.999, 200)
        values = true_lfdr_values(make_model(kind, 0.65), x)
        assert np.all(np.diff(values) >= -1e-12)
        assert np.all((values >= 0.0) & (values <= 1.0))
