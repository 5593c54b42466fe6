import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_manifest() -> dict:
    return json.loads((FIXTURES / "manifest.json").read_text())


def load_fixture(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


@pytest.fixture(scope="session")
def caps_130_basic() -> bytes:
    return load_fixture("caps_130_basic.xml")


@pytest.fixture(scope="session")
def caps_130_nested() -> bytes:
    return load_fixture("caps_130_nested.xml")


@pytest.fixture(scope="session")
def caps_111_basic() -> bytes:
    return load_fixture("caps_111_basic.xml")
