import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_corpus import build_fixture_store  # noqa: E402


@pytest.fixture(scope="session")
def fixture_world(tmp_path_factory):
    """Full bilingual pipeline run plus persisted store, built once."""
    base = tmp_path_factory.mktemp("world")
    return build_fixture_store(base)
