from pathlib import Path

import numpy as np
import pytest

from lfdr_mix.config.loader import EstimationConfig
from lfdr_mix.models import PValueSample, SimulationModel
from lfdr_mix.simulation.models import generate_sample, make_model


@pytest.fixture
def fixtures_dir() -> Path:
    """Chemin vers le répertoire de fixtures."""
    return Path(__file__).parent / "fixtures"


@pytest.fixture
def beta_model() -> SimulationModel:
    """Modèle 1 (queue bêta, ρ = 4) avec θ = 0,65."""
    return make_model("beta_tail", 0.65)


@pytest.fixture
def beta_sample(beta_model: SimulationModel) -> PValueSample:
    """500 p-valeurs tirées du modèle 1, graine fixe."""
    sample, _labels = generate_sample(beta_model, 500, seed=7)
    return sample


@pytest.fixture
def uniform_sample() -> PValueSample:
    """1000 p-valeurs uniformes (pur bruit)."""
    return PValueSample(values=np.random.default_rng(11).random(1000))


@pytest.fixture
def fast_options() -> EstimationConfig:
    """Options d'estimation allégées pour les tests (grille et bootstrap réduits)."""
    return EstimationConfig(grid_size=256, bootstrap_replicates=20, max_iterations=300)
