import pytest

from explora.config import default_fixture_dir, default_training_path
from explora.dialogue import DialogueManager
from explora.intents import QueryArchive, load_training_set
from explora.search import FixtureBackend
from explora.summarize import SummarizerConfig


@pytest.fixture(scope="session")
def fixture_backend():
    return FixtureBackend(default_fixture_dir())


@pytest.fixture(scope="session")
def training_set():
    return load_training_set(default_training_path())


@pytest.fixture
def make_manager(fixture_backend, training_set):
    """Factory for a manager with a fresh in-memory archive per call."""

    def build(**overrides) -> DialogueManager:
        kwargs = dict(
            backend=fixture_backend,
            training=training_set,
            archive=QueryArchive(),
            summarizer=SummarizerConfig(),
        )
        kwargs.update(overrides)
        return DialogueManager(**kwargs)

    return build


@pytest.fixture
def manager(make_manager):
    return make_manager()
