import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corefie.resources import biz_ontology, airline_article  # noqa: E402


@pytest.fixture(scope="session")
def article():
    return airline_article()


@pytest.fixture(scope="session")
def biz():
    return biz_ontology()
