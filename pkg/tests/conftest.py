import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "palmid",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("palmid")


@pytest.fixture(scope="session")
def seed42_corpus_dir(tmp_path_factory):
    """The reference benchmark corpus (seed 42, 20x12, side 128) on disk."""
    from palmid import dataset

    root = tmp_path_factory.mktemp("seed42") / "corpus"
    corpus = dataset.synth_generate(n_subjects=20, n_samples=12, side=128, seed=42)
    dataset.write_corpus(corpus, root)
    return root


@pytest.fixture(scope="session")
def seed42_corpus(seed42_corpus_dir):
    from palmid import dataset

    return dataset.load_corpus(seed42_corpus_dir)


@pytest.fixture(scope="session")
def seed42_features(seed42_corpus):
    from palmid.config import PipelineConfig
    from palmid.evaluation import extract_corpus_features

    return extract_corpus_features(seed42_corpus, PipelineConfig())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
