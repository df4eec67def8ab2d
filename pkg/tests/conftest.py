import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from camel_qldpc.codes import preset_code  # noqa: E402


@lru_cache(maxsize=None)
def cached_preset(name: str):
    return preset_code(name)


@pytest.fixture
def code():
    return cached_preset
