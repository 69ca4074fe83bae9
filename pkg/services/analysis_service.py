import logging
import random
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.config import (
    DEFAULT_BUDGET,
    DEFAULT_DEGREE,
    DEFAULT_FIELD,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    RANDOM_TRIPLES,
)
from core.derivations import (
    Biderivation,
    antiderivation_space,
    biderivation_space,
    derivation_space,
    maps_of,
)
from core.equations import (
    Embedding,
    Side,
    SolveStatus,
    centralizer,
    check_solution,
    division_witness,
    normalizer,
    nz_to_bider,
    solve_in,
)
from core.errors import LibraryInvariantError, MathematicalRejection, UsageError
from core.expressions import parse_dialgebra, parse_free
from core.fdalg import (
    IdentityViolation,
    StructureAlgebra,
    bracket,
    center,
    derived_series,
    is_ideal,
    is_simple,
    is_subalgebra,
    random_triples,
    verify_leibniz,
)
from core.linalg import Matrix, Subspace
from core.presentations import (
    EmbeddingStatus,
    HnnKind,
    embedding_check,
    exact_model_check,
    hnn_extend,
)
from core.scalars import Field
from core.validators import validate_budget, validate_degree
from infra.codec import (
    assignment_from_dict,
    assignment_to_json,
    parse_field,
    parse_rows_text,
    read_json,
    subspace_to_json,
    system_from_dict,
)
from infra.enumeration import make_runner
from infra.events import Report, Status
from infra.fixtures import (
    AlgebraFixture,
    list_algebra_fixtures,
    list_system_fixtures,
    load_algebra_source,
    resolve_system_path,
)

logger = logging.getLogger(__name__)

_SOLVE_STATUS = {
    SolveStatus.SOLVED: Status.SOLVED,
    SolveStatus.NO_SOLUTION: Status.NO_SOLUTION,
    SolveStatus.UNDECIDED_BUDGET: Status.UNDECIDED_BUDGET,
}

_EMBEDDING_STATUS = {
    EmbeddingStatus.NO_COLLAPSE: Status.NO_COLLAPSE,
    EmbeddingStatus.COLLAPSE: Status.COLLAPSE,
}


def _witness_json(field: Field, witness: Any) -> Any:
    """Render a rejection witness so it can be replayed through the library."""
    if isinstance(witness, IdentityViolation):
        return witness.to_dict(field)
    if isinstance(witness, Subspace):
        return subspace_to_json(witness)
    if isinstance(witness, Matrix):
        return witness.to_json()
    if isinstance(witness, tuple) and witness and not isinstance(witness[0], int):
        return field.format_vector(witness)
    return witness


def _rejection(command: str, field: Field, e: MathematicalRejection) -> Report:
    logger.info(f"{command}: rejected: {e}")
    return Report(
        command,
        Status.REJECTED,
        {"witness": _witness_json(field, e.witness)},
        [str(e)],
    )


def _algebra_summary(a: StructureAlgebra) -> Dict[str, Any]:
    return {"algebra": a.name, "dim": a.dim, "field": a.field.to_spec()}


def _map_to_json(m: Matrix) -> List[List[str]]:
    return m.to_json()


def parse_subspace(a: StructureAlgebra, text: str) -> Tuple[str, Subspace]:
    """``[name=]v1;v2;...`` with comma-separated coordinates, e.g. ``A=1,0;0,1``."""
    name, _, rows = text.rpartition("=")
    vectors = parse_rows_text(a.field, rows, a.dim, "subspace")
    sub = Subspace.from_vectors(a.field, a.dim, vectors)
    return name or f"span of {len(vectors)} vectors", sub


def parse_map(a: StructureAlgebra, sub: Subspace, text: str) -> Matrix:
    """Map on ``sub`` as ``n`` rows of ``dim A`` entries.

    A bare scalar ``c`` stands for ``c`` times the inclusion.

    Column ``s`` is the image of the ``s``-th echelon basis vector of ``sub``.
    """
    f = a.field
    if ";" not in text and "," not in text:
        c = f(text.strip())
        return Matrix.from_columns(f, [f.scale_vector(c, b) for b in sub.basis], a.dim)
    rows = parse_rows_text(f, text, sub.dim, "map")
    if len(rows) != a.dim:
        raise UsageError(f"Map needs {a.dim} rows, got {len(rows)}")
    return Matrix.from_rows(f, rows, sub.dim)


class AnalysisService:
    """Runs analyses on algebras and wraps the outcomes in reports."""

    def __init__(
        self,
        field: Optional[Field] = None,
        degree: int = DEFAULT_DEGREE,
        budget: int = DEFAULT_BUDGET,
        seed: int = DEFAULT_SEED,
        workers: int = DEFAULT_WORKERS,
        force: bool = False,
    ):
        for ok, msg in (validate_degree(degree, force), validate_budget(budget)):
            if not ok:
                raise UsageError(msg)
        self.field = field
        self.degree = degree
        self.budget = budget
        self.seed = seed
        self.workers = workers
        self.force = force

    def _load(self, source: str) -> AlgebraFixture:
        fixture = load_algebra_source(source, self.field)
        a = fixture.algebra
        logger.debug(f"Loaded {fixture.name}: dim {a.dim} over {a.field}")
        return fixture

    # verify

    def cmd_verify(self, source: str) -> Report:
        """Leibniz identity on all basis triples, plus a seeded random sample."""
        a = self._load(source).algebra
        report = verify_leibniz(a)
        payload = _algebra_summary(a)
        payload["checked_triples"] = a.dim ** 3
        if not report.holds:
            first = report.violations[0]
            payload["violations"] = [v.to_dict(a.field) for v in report.violations]
            payload["witness"] = first.to_dict(a.field)
            message = f"identity fails at basis triple {first.triple}"
            return Report("verify", Status.FAIL, payload, [message])

        # [x, [y, z] + [z, y]] = 0 holds in every right Leibniz algebra.
        rng = random.Random(self.seed)
        f = a.field
        failures = 0
        for x, y, z in random_triples(a, rng, RANDOM_TRIPLES):
            sym = f.add_vectors(bracket(a, y, z), bracket(a, z, y))
            if not f.is_zero_vector(bracket(a, x, sym)):
                failures += 1
        payload["random_triples"] = RANDOM_TRIPLES
        payload["seed"] = self.seed
        if failures:
            raise LibraryInvariantError(
                f"{failures} random triples violate a consequence of the identity"
            )
        logger.info(f"{a.name or source}: Leibniz identity holds")
        return Report("verify", Status.PASS, payload)

    # analyze

    def cmd_analyze(
        self,
        source: str,
        subspaces: Optional[Sequence[Union[str, Tuple[str, Subspace]]]] = None,
    ) -> Report:
        """Derived series, simplicity, center and per-subspace normalizers.

        Without explicit subspaces the fixture's curated subalgebras are used.
        """
        fixture = self._load(source)
        a = fixture.algebra
        try:
            a = a.require_verified()
        except MathematicalRejection as e:
            return _rejection("analyze", a.field, e)
        series = derived_series(a)
        simplicity = is_simple(a)
        payload = _algebra_summary(a)
        payload["derived_series"] = {
            "dims": series.dimensions,
            "solvable": series.solvable,
            "stabilization_index": series.stabilization_index,
        }
        payload["simplicity"] = {
            "verdict": simplicity.verdict,
            "complete": simplicity.complete,
            "derived_algebra": subspace_to_json(simplicity.derived_algebra),
            "offending_ideal": (
                subspace_to_json(simplicity.offending_ideal)
                if simplicity.offending_ideal
                else None
            ),
            "warnings": list(simplicity.warnings),
        }
        payload["center"] = subspace_to_json(center(a))
        chosen = fixture.subalgebras if subspaces is None else subspaces
        entries = []
        for item in chosen:
            name, sub = parse_subspace(a, item) if isinstance(item, str) else item
            entries.append(self._subspace_entry(a, name, sub))
        payload["subspaces"] = entries
        return Report("analyze", Status.PASS, payload, list(simplicity.warnings))

    def _subspace_entry(
        self, a: StructureAlgebra, name: str, sub: Subspace
    ) -> Dict[str, Any]:
        entry: Dict[str, Any] = {"name": name, "basis": sub.to_json()}
        entry["is_subalgebra"] = is_subalgebra(a, sub)
        entry["is_ideal"] = is_ideal(a, sub)
        entry["centralizer"] = subspace_to_json(centralizer(a, sub.basis))
        nz = normalizer(a, sub)
        entry["normalizer"] = {
            "left": subspace_to_json(nz.left),
            "right": subspace_to_json(nz.right),
            "both": subspace_to_json(nz.both),
        }
        if entry["is_subalgebra"] and not sub.is_zero:
            report = nz_to_bider(a, sub, self.seed)
            entry["nz_to_bider"] = {
                "pairs_valid": report.pairs_valid,
                "literal_pairs_valid": report.literal_pairs_valid,
                "linear": report.linear,
                "kernel": subspace_to_json(report.kernel),
                "kernel_contains_centralizer": report.kernel_contains_centralizer,
                "image_dim": report.image_dim,
                "bider_dim": report.bider_dim,
            }
        return entry

    # derivations

    def cmd_derivations(self, source: str, kind: str = "all") -> Report:
        """Dimensions and bases of the derivation-type spaces."""
        a = self._load(source).algebra
        try:
            a = a.require_verified()
        except MathematicalRejection as e:
            return _rejection("derivations", a.field, e)
        if kind not in ("all", "derivation", "anti", "anti-derivation", "bider"):
            raise UsageError(
                f"Unknown kind '{kind}' (expected derivation, anti, bider or all)"
            )
        payload = _algebra_summary(a)
        if kind in ("all", "derivation"):
            space = derivation_space(a)
            payload["derivation"] = {
                "dim": space.dim,
                "basis": [_map_to_json(m) for m in maps_of(a, space)],
            }
        if kind in ("all", "anti", "anti-derivation"):
            space = antiderivation_space(a)
            payload["antiderivation"] = {
                "dim": space.dim,
                "basis": [_map_to_json(m) for m in maps_of(a, space)],
            }
        if kind in ("all", "bider"):
            space = biderivation_space(a)
            pairs = [Biderivation.from_vector(a, v) for v in space.basis]
            payload["biderivation"] = {
                "dim": space.dim,
                "basis": [
                    {"d": _map_to_json(p.d), "D": _map_to_json(p.D)} for p in pairs
                ],
            }
        return Report("derivations", Status.PASS, payload)

    # hnn

    def cmd_hnn(
        self,
        source: str,
        sub: Union[str, Subspace],
        d: Union[str, Matrix],
        kind: str = "derivation",
        degree: Optional[int] = None,
    ) -> Report:
        """HNN-extension along ``d: A -> L``, its embedding check and exact model."""
        a = self._load(source).algebra
        degree = self.degree if degree is None else degree
        ok, msg = validate_degree(degree, self.force)
        if not ok:
            raise UsageError(msg)
        if isinstance(sub, str):
            sub = parse_subspace(a, sub)[1]
        if isinstance(d, str):
            d = parse_map(a, sub, d)
        try:
            h = hnn_extend(a, sub, d, HnnKind.parse(kind))
        except MathematicalRejection as e:
            return _rejection("hnn", a.field, e)
        verdict = embedding_check(h, degree)
        model = exact_model_check(h)
        payload = _algebra_summary(a)
        payload.update(
            {
                "kind": h.kind.value,
                "degree": verdict.degree,
                "quotient_dims_per_degree": list(verdict.quotient_dims_per_degree),
                "relators": h.presentation.format_relators(),
                "exact_model": {
                    "exists": model.exists,
                    "reason": model.reason,
                    "dim": model.algebra.dim if model.algebra else None,
                },
            }
        )
        if verdict.witness_text is not None:
            payload["witness"] = verdict.witness_text
        status = _EMBEDDING_STATUS[verdict.status]
        return Report(
            "hnn", status, payload, [verdict.message], degree=verdict.degree
        )

    # solve

    def cmd_solve(
        self,
        source: str,
        system_path: Optional[str] = None,
        mode: str = "solve",
        x: Optional[Sequence[Any]] = None,
        b: Optional[Sequence[Any]] = None,
        side: str = "right",
    ) -> Report:
        """``solve`` and ``check`` read a system file.

        ``divide`` solves ``[v, x] = b`` or ``[x, v] = b`` for ``v``.
        """
        if mode == "divide":
            return self._divide(source, x, b, side)
        if mode not in ("solve", "check"):
            raise UsageError(f"Unknown mode '{mode}' (expected solve, check or divide)")
        if system_path is None:
            raise UsageError(f"Mode '{mode}' needs a system file")
        system_file = resolve_system_path(system_path)
        data = read_json(system_file)
        field = self.field
        if field is None and isinstance(data, dict) and "field" in data:
            field = parse_field(data["field"], f"{system_file}.field")
        a = load_algebra_source(source, field).algebra
        if mode == "solve" and not a.field.is_finite:
            logger.warning(
                f"Exhaustive search needs a finite field: solving over {DEFAULT_FIELD}"
            )
            a = load_algebra_source(source, Field.parse(DEFAULT_FIELD)).algebra
        try:
            a = a.require_verified()
        except MathematicalRejection as e:
            return _rejection("solve", a.field, e)
        system = system_from_dict(data, a.field, a.dim, where=str(system_file))
        payload = _algebra_summary(a)
        payload["system"] = system_file.name
        payload["mode"] = mode

        if mode == "check":
            if "assignment" not in data:
                raise UsageError(
                    f"{system_file}: check mode needs an 'assignment' block"
                )
            asg = assignment_from_dict(
                a.field, data["assignment"], a.dim, f"{system_file}.assignment"
            )
            result = check_solution(system, asg, a, Embedding.identity(a))
            payload["constraints"] = [
                {
                    "kind": c.kind,
                    "index": c.index,
                    "value": a.field.format_vector(c.value),
                    "satisfied": c.satisfied,
                }
                for c in result.constraints
            ]
            status = Status.PASS if result.holds else Status.FAIL
            return Report("solve", status, payload)

        runner = make_runner(self.workers)
        solved = solve_in(system, a, budget=self.budget, runner=runner)
        payload["search_space"] = solved.search_space
        payload["budget"] = self.budget
        if solved.assignment is not None:
            payload["assignment"] = assignment_to_json(a.field, solved.assignment)
        messages = []
        if solved.status is SolveStatus.UNDECIDED_BUDGET:
            messages.append(
                f"search space {solved.search_space} exceeds budget {self.budget}"
            )
        return Report("solve", _SOLVE_STATUS[solved.status], payload, messages)

    def _divide(
        self,
        source: str,
        x: Optional[Sequence[Any]],
        b: Optional[Sequence[Any]],
        side: str,
    ) -> Report:
        if x is None or b is None:
            raise UsageError("Division needs both x and b")
        a = self._load(source).algebra
        try:
            a = a.require_verified()
        except MathematicalRejection as e:
            return _rejection("solve", a.field, e)
        try:
            which = Side(side.lower())
        except ValueError:
            raise UsageError(f"Unknown side '{side}' (expected left or right)")
        result = division_witness(a, a.element(x), a.element(b), which, self.degree)
        payload = _algebra_summary(a)
        payload.update(
            {"mode": "divide", "side": which.value, "model_kind": result.model_kind}
        )
        if not result.assignment.success:
            contradiction = result.assignment.contradiction
            payload["contradiction"] = (
                a.field.format_vector(contradiction) if contradiction else None
            )
            return Report(
                "solve",
                Status.INCONSISTENT,
                payload,
                ["no derivation-type map on the generated subalgebra sends x to b"],
            )
        if result.verdict is not None:
            payload["embedding"] = {
                "status": result.verdict.label,
                "quotient_dims_per_degree": list(
                    result.verdict.quotient_dims_per_degree
                ),
            }
        if result.model is not None:
            payload["model_dim"] = result.model.dim
        status = Status.SOLVED if result.success else Status.FAIL
        return Report("solve", status, payload)

    # free

    def cmd_free(self, expr: str, dialgebra: bool = False) -> Report:
        """Normal form of a free Leibniz (or free dialgebra) expression."""
        field = self.field or Field.rationals()
        if dialgebra:
            element: Any = parse_dialgebra(expr, field)
        else:
            element = parse_free(expr, field)
        payload = {
            "expression": expr,
            "normal_form": str(element),
            "terms": len(element),
            "field": field.to_spec(),
            "algebra": "dialgebra" if dialgebra else "leibniz",
        }
        return Report("free", Status.PASS, payload)

    # fixtures

    def cmd_fixtures(self) -> Report:
        return Report(
            "fixtures",
            Status.PASS,
            {"algebras": list_algebra_fixtures(), "systems": list_system_fixtures()},
        )
