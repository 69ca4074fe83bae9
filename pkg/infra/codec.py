"""
JSON codecs for algebras, vectors, matrices and equation systems.

Algebra documents::

    {"dim": n, "field": "Q" | {"gfp": p}, "name": "...",
     "brackets": [{"left": i, "right": j, "out": [{"k": k, "c": "num/den"}]}]}

Indices are 0-based; unlisted pairs bracket to zero. System documents::

    {"vars": ["x"], "eqs": [term...], "neqs": [term...]}

with terms ``["var", "x"]``, ``["const", [coords]]``, ``["br", t1, t2]``,
``["add", t...]`` and ``["smul", "c", t]``.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from core.equations import Bracket, Const, EqSystem, Scale, Sum, TermExpr, Var
from core.errors import ParseError, UsageError
from core.fdalg import StructureAlgebra
from core.linalg import Matrix, Subspace
from core.scalars import Field, Scalar, Vector

logger = logging.getLogger(__name__)

Json = Any


def read_json(path: Union[str, Path]) -> Json:
    """Load a JSON document; syntax errors become ``ParseError`` with a location."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"No such file: {path}")
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
            e.pos,
        )


def parse_field(value: Json, where: str = "field") -> Field:
    if isinstance(value, str):
        try:
            return Field.parse(value)
        except UsageError as e:
            raise ParseError(f"{where}: {e}")
    if (
        isinstance(value, dict)
        and set(value) == {"gfp"}
        and isinstance(value["gfp"], int)
    ):
        try:
            return Field.gf(value["gfp"])
        except UsageError as e:
            raise ParseError(f"{where}: {e}")
    raise ParseError(f"{where}: expected \"Q\" or {{\"gfp\": p}}, got {value!r}")


def field_to_json(f: Field) -> Json:
    return {"gfp": f.characteristic} if f.is_finite else "Q"


def parse_scalar(f: Field, value: Json, where: str) -> Scalar:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(
            f"{where}: coefficient must be an integer or a \"num/den\" string"
        )
    try:
        return f(value)
    except ParseError as e:
        raise ParseError(f"{where}: {e}")


def parse_vector(
    f: Field, values: Json, dim: Optional[int] = None, where: str = "vector"
) -> Vector:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list of coefficients")
    if dim is not None and len(values) != dim:
        raise ParseError(f"{where}: expected {dim} coordinates, got {len(values)}")
    return tuple(parse_scalar(f, v, f"{where}[{i}]") for i, v in enumerate(values))


def parse_matrix(
    f: Field, rows: Json, shape: Tuple[int, int], where: str = "matrix"
) -> Matrix:
    """Row-major nested list of the given shape."""
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ParseError(f"{where}: expected {shape[0]} rows")
    parsed = [
        parse_vector(f, row, shape[1], f"{where}[{i}]") for i, row in enumerate(rows)
    ]
    return Matrix.from_rows(f, parsed, shape[1])


def parse_vector_text(f: Field, text: str, dim: int, where: str = "vector") -> Vector:
    """Command-line vector: comma-separated coefficients, e.g. ``1,0,-1/2``."""
    return parse_vector(f, [c.strip() for c in text.split(",")], dim, where)


def parse_rows_text(f: Field, text: str, dim: int, where: str = "rows") -> List[Vector]:
    """Semicolon-separated vectors, e.g. ``1,0;0,1``."""
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise ParseError(f"{where}: no vectors given")
    return [parse_vector_text(f, p, dim, f"{where}[{i}]") for i, p in enumerate(parts)]


def vector_to_json(f: Field, v: Sequence[Scalar]) -> List[str]:
    return f.format_vector(v)


def subspace_to_json(s: Subspace) -> Dict[str, Json]:
    return {"dim": s.dim, "basis": s.to_json()}


def _require(data: Mapping[str, Json], key: str, where: str) -> Json:
    if key not in data:
        raise ParseError(f"{where}: missing key '{key}'")
    return data[key]


def algebra_from_dict(
    data: Json, field: Optional[Field] = None, where: str = "algebra"
) -> StructureAlgebra:
    """Build an algebra; ``field`` overrides the document's field."""
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    dim = _require(data, "dim", where)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{where}.dim: expected a positive integer")
    f = field or parse_field(data.get("field", "Q"), f"{where}.field")
    brackets = data.get("brackets", [])
    if not isinstance(brackets, list):
        raise ParseError(f"{where}.brackets: expected a list")
    table: Dict[Tuple[int, int], List[Scalar]] = {}
    for b, entry in enumerate(brackets):
        at = f"{where}.brackets[{b}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{at}: expected an object")
        i, j = _require(entry, "left", at), _require(entry, "right", at)
        for label, index in (("left", i), ("right", j)):
            valid = isinstance(index, int) and not isinstance(index, bool)
            if not valid or not 0 <= index < dim:
                raise ParseError(f"{at}.{label}: index must lie in [0, {dim})")
        if (i, j) in table:
            raise ParseError(f"{at}: bracket ({i}, {j}) listed twice")
        terms = _require(entry, "out", at)
        if not isinstance(terms, list):
            raise ParseError(f"{at}.out: expected a list")
        out = [f.zero] * dim
        for t, term in enumerate(terms):
            at_term = f"{at}.out[{t}]"
            if not isinstance(term, dict):
                raise ParseError(f"{at_term}: expected an object")
            k = _require(term, "k", at_term)
            if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < dim:
                raise ParseError(f"{at_term}.k: index must lie in [0, {dim})")
            c = parse_scalar(f, _require(term, "c", at_term), f"{at_term}.c")
            out[k] = f.add(out[k], c)
        table[(i, j)] = out
    return StructureAlgebra.from_table(f, dim, table, str(data.get("name", "")))


def algebra_to_dict(a: StructureAlgebra) -> Dict[str, Json]:
    brackets = []
    for i in range(a.dim):
        for j in range(a.dim):
            out = [
                {"k": k, "c": a.field.format(c)}
                for k, c in enumerate(a.constants[i][j])
                if c != 0
            ]
            if out:
                brackets.append({"left": i, "right": j, "out": out})
    data: Dict[str, Json] = {
        "dim": a.dim,
        "field": field_to_json(a.field),
        "brackets": brackets,
    }
    if a.name:
        data["name"] = a.name
    return data


def load_algebra(
    path: Union[str, Path], field: Optional[Field] = None
) -> StructureAlgebra:
    a = algebra_from_dict(read_json(path), field, where=str(path))
    logger.debug(f"Loaded {a.name or path}: dim {a.dim} over {a.field}")
    return a


# Terms and systems


def parse_term(f: Field, node: Json, dim: int, where: str = "term") -> TermExpr:
    if not isinstance(node, list) or not node or not isinstance(node[0], str):
        raise ParseError(f"{where}: expected [tag, ...]")
    tag, args = node[0], node[1:]
    if tag == "var" and len(args) == 1 and isinstance(args[0], str):
        return Var(args[0])
    if tag == "const" and len(args) == 1:
        return Const(parse_vector(f, args[0], dim, f"{where}[1]"))
    if tag == "br" and len(args) == 2:
        return Bracket(
            parse_term(f, args[0], dim, f"{where}[1]"),
            parse_term(f, args[1], dim, f"{where}[2]"),
        )
    if tag == "add":
        return Sum(
            tuple(
                parse_term(f, a, dim, f"{where}[{i + 1}]") for i, a in enumerate(args)
            )
        )
    if tag == "smul" and len(args) == 2:
        return Scale(
            parse_scalar(f, args[0], f"{where}[1]"),
            parse_term(f, args[1], dim, f"{where}[2]"),
        )
    raise ParseError(f"{where}: malformed '{tag}' node with {len(args)} arguments")


def term_to_json(f: Field, t: TermExpr) -> Json:
    if isinstance(t, Var):
        return ["var", t.name]
    if isinstance(t, Const):
        return ["const", f.format_vector(t.coords)]
    if isinstance(t, Bracket):
        return ["br", term_to_json(f, t.left), term_to_json(f, t.right)]
    if isinstance(t, Scale):
        return ["smul", f.format(f(t.coeff)), term_to_json(f, t.term)]
    return ["add"] + [term_to_json(f, c) for c in t.terms]


def system_from_dict(data: Json, f: Field, dim: int, where: str = "system") -> EqSystem:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    variables = data.get("vars", [])
    names_ok = isinstance(variables, list) and all(
        isinstance(v, str) for v in variables
    )
    if not names_ok:
        raise ParseError(f"{where}.vars: expected a list of names")
    eqs = [
        parse_term(f, t, dim, f"{where}.eqs[{i}]")
        for i, t in enumerate(data.get("eqs", []))
    ]
    neqs = [
        parse_term(f, t, dim, f"{where}.neqs[{i}]")
        for i, t in enumerate(data.get("neqs", []))
    ]
    try:
        return EqSystem(tuple(variables), tuple(eqs), tuple(neqs))
    except UsageError as e:
        raise ParseError(f"{where}: {e}")


def system_to_dict(f: Field, s: EqSystem) -> Dict[str, Json]:
    return {
        "vars": list(s.variables),
        "eqs": [term_to_json(f, t) for t in s.equations],
        "neqs": [term_to_json(f, t) for t in s.inequations],
    }


def assignment_from_dict(
    f: Field, data: Json, dim: int, where: str = "assignment"
) -> Dict[str, Vector]:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object of variable -> coordinates")
    return {
        name: parse_vector(f, v, dim, f"{where}.{name}") for name, v in data.items()
    }


def assignment_to_json(
    f: Field, asg: Mapping[str, Sequence[Scalar]]
) -> Dict[str, List[str]]:
    return {name: f.format_vector(v) for name, v in sorted(asg.items())}


def load_system(
    path: Union[str, Path], f: Field, dim: int
) -> Tuple[EqSystem, Optional[Dict[str, Vector]]]:
    """System plus its optional ``"assignment"`` block."""
    data = read_json(path)
    system = system_from_dict(data, f, dim, where=str(path))
    assignment = None
    if isinstance(data, dict) and "assignment" in data:
        assignment = assignment_from_dict(
            f, data["assignment"], dim, f"{path}.assignment"
        )
    return system, assignment
