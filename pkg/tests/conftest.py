"""
Pytest configuration and common fixtures for leibniz-hnn tests.
"""

import json
import shutil
import tempfile
from pathlib import Path

import pytest

from core.config import FIXTURES_DIR
from core.fdalg import StructureAlgebra
from core.scalars import Field
from infra.fixtures import load_algebra_fixture
from services.analysis_service import AnalysisService


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def write_json(temp_dir):
    """Write a JSON document into the temporary directory and return its path."""

    def _write(name, data):
        path = temp_dir / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture(scope="session")
def field_q():
    return Field.rationals()


@pytest.fixture(scope="session")
def gf5():
    return Field.gf(5)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def n2():
    """[e2, e2] = e1, everything else zero."""
    return load_algebra_fixture("n2").algebra


@pytest.fixture(scope="session")
def n2_gf5(gf5):
    return load_algebra_fixture("n2", gf5).algebra


@pytest.fixture(scope="session")
def solvable3():
    return load_algebra_fixture("solvable3").algebra


@pytest.fixture(scope="session")
def sl2():
    """sl2 over Q with basis (e, f, h)."""
    return load_algebra_fixture("sl2_q").algebra


@pytest.fixture(scope="session")
def sl2_gf5():
    return load_algebra_fixture("sl2_gf5").algebra


@pytest.fixture(scope="session")
def abelian2(field_q):
    return StructureAlgebra.abelian(field_q, 2)


@pytest.fixture(scope="session")
def non_leibniz():
    """[e1, e1] = e1 fails the identity at (0, 0, 0)."""
    return load_algebra_fixture("control_nonleibniz").algebra


@pytest.fixture
def service():
    """Analysis service with default settings."""
    return AnalysisService()


@pytest.fixture
def isolated_settings(temp_dir, monkeypatch):
    """Point the settings manager at an empty per-test location."""
    path = temp_dir / "settings.json"
    monkeypatch.setenv("LEIBNIZ_HNN_SETTINGS", str(path))
    return path
