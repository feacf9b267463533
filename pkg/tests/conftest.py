import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.variety import VarietyEngine, get_variety, load_registry  # noqa: E402


@pytest.fixture(scope='session')
def registry():
    return load_registry()


@pytest.fixture(scope='session')
def engines(registry):
    """One engine per built-in variety, shared across the session."""
    built = {}

    def get(name):
        if name not in built:
            built[name] = VarietyEngine(get_variety(name, registry))
        return built[name]
    return get
