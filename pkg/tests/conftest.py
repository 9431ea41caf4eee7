import functools
import os

import pytest
from hypothesis import HealthCheck, settings

from oschen import corpus

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def arrangement(name):
    return corpus.example(name)


@pytest.fixture(scope="session")
def braid():
    return arrangement("braid")


@pytest.fixture(scope="session")
def ceva():
    return arrangement("ceva3")


@pytest.fixture(scope="session")
def delmac():
    return arrangement("deleted-maclane")
