import os
from pathlib import Path

import pytest

from altpoly.cache import Cache


@pytest.fixture(scope="session")
def disk_cache():
    """Shared content-addressed cache so heavy verdicts are computed once."""
    directory = os.environ.get("ALTPOLY_TEST_CACHE",
                               str(Path.home() / ".cache" / "altpoly"))
    return Cache(directory)


@pytest.fixture(scope="session")
def registry():
    from altpoly.pipeline import Registry

    return Registry()
