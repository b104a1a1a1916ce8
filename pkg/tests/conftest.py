import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import intercalc as ic  # noqa: E402


@pytest.fixture(scope="session")
def systems():
    return {name: ic.builtin(name).system for name in ic.BUILTINS}


@pytest.fixture(scope="session")
def linlam(systems):
    return systems["linlam"]
