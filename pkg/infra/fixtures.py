"""
Shipped fixture corpus: algebras with curated subalgebras and expected
analysis results, plus small equation systems with known verdicts.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from core.config import FIXTURES_DIR
from core.equations import EqSystem
from core.errors import ParseError, UsageError
from core.fdalg import StructureAlgebra
from core.linalg import Subspace
from core.scalars import Field, Vector

from .codec import (
    algebra_from_dict,
    assignment_from_dict,
    parse_field,
    parse_vector,
    read_json,
    system_from_dict,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraFixture:
    name: str
    path: Path
    algebra: StructureAlgebra
    subalgebras: Tuple[Tuple[str, Subspace], ...] = ()
    expected: Dict[str, Any] = field(default_factory=dict, compare=False)
    description: str = ""


@dataclass(frozen=True)
class SystemFixture:
    name: str
    path: Path
    base: AlgebraFixture
    system: EqSystem
    assignment: Optional[Dict[str, Vector]] = None
    expected: Dict[str, Any] = field(default_factory=dict, compare=False)
    description: str = ""


def _algebra_dir(root: Path) -> Path:
    return root / "algebras"


def _system_dir(root: Path) -> Path:
    return root / "systems"


def list_algebra_fixtures(root: Path = FIXTURES_DIR) -> List[str]:
    return sorted(p.stem for p in _algebra_dir(root).glob("*.json"))


def list_system_fixtures(root: Path = FIXTURES_DIR) -> List[str]:
    return sorted(p.stem for p in _system_dir(root).glob("*.json"))


def load_algebra_fixture(
    name: str, field_override: Optional[Field] = None, root: Path = FIXTURES_DIR
) -> AlgebraFixture:
    """Load ``fixtures/algebras/<name>.json`` (the ``.json`` suffix is optional)."""
    path = _algebra_dir(root) / (name if name.endswith(".json") else f"{name}.json")
    if not path.exists():
        raise UsageError(f"Unknown algebra fixture '{name}'")
    return load_algebra_file(path, field_override)


def load_algebra_source(
    source: str, field_override: Optional[Field] = None
) -> AlgebraFixture:
    """A path to an algebra document, or the name of a shipped fixture."""
    path = Path(source)
    if path.exists():
        return load_algebra_file(path, field_override)
    return load_algebra_fixture(source, field_override)


def load_algebra_file(
    path: Path, field_override: Optional[Field] = None
) -> AlgebraFixture:
    data = read_json(path)
    a = algebra_from_dict(data, field_override, where=str(path))
    subalgebras = []
    for i, entry in enumerate(data.get("subalgebras", [])):
        where = f"{path}.subalgebras[{i}]"
        if not isinstance(entry, dict) or "basis" not in entry:
            raise ParseError(f"{where}: expected an object with a 'basis'")
        vectors = [
            parse_vector(a.field, v, a.dim, f"{where}.basis[{j}]")
            for j, v in enumerate(entry["basis"])
        ]
        name = str(entry.get("name", f"A{i}"))
        subalgebras.append((name, Subspace.from_vectors(a.field, a.dim, vectors)))
    logger.debug(f"Fixture {a.name}: {len(subalgebras)} subalgebras")
    return AlgebraFixture(
        name=path.stem,
        path=path,
        algebra=a,
        subalgebras=tuple(subalgebras),
        expected=dict(data.get("expected", {})),
        description=str(data.get("description", "")),
    )


def load_system_fixture(name: str, root: Path = FIXTURES_DIR) -> SystemFixture:
    """A system fixture names its algebra and the field it is solved over."""
    path = _system_dir(root) / (name if name.endswith(".json") else f"{name}.json")
    if not path.exists():
        raise UsageError(f"Unknown system fixture '{name}'")
    data = read_json(path)
    if "algebra" not in data:
        raise ParseError(f"{path}: missing key 'algebra'")
    f = parse_field(data["field"], f"{path}.field") if "field" in data else None
    base = load_algebra_fixture(Path(data["algebra"]).stem, f, root)
    dim = base.algebra.dim
    system = system_from_dict(data, base.algebra.field, dim, where=str(path))
    assignment = None
    if "assignment" in data:
        assignment = assignment_from_dict(
            base.algebra.field, data["assignment"], dim, f"{path}.assignment"
        )
    return SystemFixture(
        name=path.stem,
        path=path,
        base=base,
        system=system,
        assignment=assignment,
        expected=dict(data.get("expected", {})),
        description=str(data.get("description", "")),
    )


def leibniz_fixtures(
    field_override: Optional[Field] = None, root: Path = FIXTURES_DIR
) -> List[AlgebraFixture]:
    """Every algebra fixture expected to satisfy the Leibniz identity."""
    loaded = [
        load_algebra_fixture(n, field_override, root)
        for n in list_algebra_fixtures(root)
    ]
    return [fx for fx in loaded if fx.expected.get("leibniz", True)]


def resolve_system_path(source: str, root: Path = FIXTURES_DIR) -> Path:
    """A path to a system document, or the name of a shipped system fixture."""
    path = Path(source)
    if path.exists():
        return path
    filename = source if source.endswith(".json") else f"{source}.json"
    shipped = _system_dir(root) / filename
    if shipped.exists():
        return shipped
    raise UsageError(f"No such system file or fixture: {source}")
