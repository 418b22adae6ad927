import pytest
from hypothesis import settings

from ncyclepp.field import make_field

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")

_CACHE = {}


def field(p, n):
    """Session-wide field cache; contexts are immutable so sharing is safe."""
    key = (p, n)
    if key not in _CACHE:
        _CACHE[key] = make_field(p, n)
    return _CACHE[key]


@pytest.fixture(scope="session")
def fields():
    return field
