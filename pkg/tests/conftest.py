from importlib import resources
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def mini_corpus_path() -> Path:
    return Path(str(resources.files("jmsnet.data").joinpath("mini_corpus.csv")))


@pytest.fixture
def data_dir() -> Path:
    return DATA
