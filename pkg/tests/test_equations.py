"""
Unit tests for equation systems, division, centralizers and normalizers.
"""

import pytest

import itertools
import json
import random
from fractions import Fraction

from core.config import FIXTURES_DIR
from core.errors import MathematicalRejection, UsageError
from core.equations import (
    Bracket,
    Const,
    Embedding,
    EqSystem,
    Scale,
    Side,
    SolveStatus,
    Sum,
    Var,
    _pair_map_is_linear,
    _restricted_pair,
    centralizer,
    centralizer_witness,
    check_solution,
    closedness_check,
    difference,
    division_witness,
    eval_term,
    normalizer,
    nz_to_bider,
    search_space_size,
    simple_embedding_check,
    solve_in,
    system_from_constants,
    term_variables,
)
from core.fdalg import StructureAlgebra, direct_product, span
from core.linalg import Matrix, Subspace
from core.presentations import EmbeddingStatus, EmbeddingVerdict, ExactModel
from core.scalars import Field
from infra.codec import system_from_dict
from infra.enumeration import BlockSearch
from infra.fixtures import (
    leibniz_fixtures,
    list_system_fixtures,
    load_algebra_fixture,
    load_system_fixture,
)


def var(name):
    return ["var", name]


def const(*coords):
    return ["const", [str(c) for c in coords]]


def br(left, right):
    return ["br", left, right]


def minus(term, other):
    return ["add", term, ["smul", "-1", other]]


def add(*terms):
    return ["add", *terms]


def system_doc(variables, eqs=(), neqs=()):
    return {"vars": list(variables), "eqs": list(eqs), "neqs": list(neqs)}


E1_2, E2_2 = const(1, 0), const(0, 1)
E1_3, E2_3, E3_3 = const(1, 0, 0), const(0, 1, 0), const(0, 0, 1)
X, Y = var("x"), var("y")

CURATED_SYSTEMS = [
    # GF(5)
    ("n2", 5, system_doc("x", [minus(br(X, X), E1_2)])),
    ("n2", 5, system_doc("x", [minus(br(X, X), E2_2)])),
    ("n2", 5, system_doc("x", [minus(br(X, E2_2), E1_2)])),
    ("n2", 5, system_doc("x", [minus(br(E2_2, X), const(3, 0))])),
    ("n2", 5, system_doc("x", [minus(br(X, E1_2), E1_2)])),
    ("n2", 5, system_doc("xy", [minus(br(X, Y), E1_2), br(Y, X)])),
    ("n2", 5, system_doc("xy", [minus(br(X, Y), const(2, 0))], [minus(X, Y)])),
    ("n2", 5, system_doc("", [minus(br(E2_2, E2_2), E1_2)])),
    ("n2", 5, system_doc("", [minus(br(E2_2, E2_2), E2_2)])),
    ("abelian2", 5, system_doc("x", [br(X, X)], [X])),
    ("abelian2", 5, system_doc("xy", [minus(br(X, Y), E1_2)])),
    ("solvable3", 5, system_doc("x", [minus(br(X, E3_3), E2_3)])),
    ("solvable3", 5, system_doc("x", [minus(br(E3_3, X), E2_3)])),
    ("solvable3", 5, system_doc("x", [minus(br(X, X), E2_3)])),
    ("solvable3", 5, system_doc("x", [minus(br(X, X), const(3, 0, 0))])),
    ("solvable3", 5, system_doc("x", [minus(br(X, X), const(4, 0, 0))])),
    ("sl2_gf5", 5, system_doc("x", [minus(br(E1_3, X), E3_3)])),
    ("sl2_gf5", 5, system_doc("x", [], [br(X, X)])),
    ("sl2_gf5", 5, system_doc("x", [minus(br(E3_3, X), const(2, 0, 0))])),
    ("sl2_gf5", 5, system_doc("x", [br(X, E3_3)], [X])),
    ("sl2_gf5", 5, system_doc("x", [minus(br(X, E1_3), E1_3)])),
    (
        "sl2_gf5",
        5,
        system_doc("x", [minus(br(X, E1_3), E1_3), minus(br(X, E2_3), E2_3)]),
    ),
    # GF(3)
    ("n2", 3, system_doc("x", [minus(br(X, X), E1_2)])),
    ("n2", 3, system_doc("x", [minus(br(X, X), const(2, 0))])),
    ("n2", 3, system_doc("xy", [minus(add(br(X, Y), br(Y, X)), E1_2)])),
    ("abelian3", 3, system_doc("x", [br(X, X)], [X])),
    ("abelian3", 3, system_doc("x", [minus(br(X, X), E1_3)])),
    ("abelian4", 3, system_doc("x", [br(X, X)], [X])),
    ("solvable3", 3, system_doc("x", [minus(br(X, X), const(2, 0, 0))])),
    ("solvable3", 3, system_doc("xy", [minus(br(X, Y), E2_3), br(Y, X)])),
    ("solvable3", 3, system_doc("xy", [minus(br(X, Y), E2_3)], [br(X, E3_3)])),
    ("sl2_q", 3, system_doc("x", [minus(br(E1_3, X), E3_3)])),
    ("sl2_q", 3, system_doc("x", [], [br(X, X)])),
    ("sl2_q", 3, system_doc("xy", [minus(br(X, Y), E1_3)], [br(X, E1_3)])),
]


def naive_table(name, p):
    """Structure constants mod ``p`` read straight from the fixture file."""
    path = FIXTURES_DIR / "algebras" / f"{name}.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    n = data["dim"]
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    for entry in data.get("brackets", []):
        for term in entry["out"]:
            c = Fraction(term["c"])
            value = c.numerator * pow(c.denominator, -1, p) % p
            table[entry["left"]][entry["right"]][term["k"]] = value
    return table


def naive_eval(node, values, table, p):
    n = len(table)
    tag = node[0]
    if tag == "var":
        return values[node[1]]
    if tag == "const":
        return tuple(int(c) % p for c in node[1])
    if tag == "br":
        u = naive_eval(node[1], values, table, p)
        v = naive_eval(node[2], values, table, p)
        return tuple(
            sum(u[i] * v[j] * table[i][j][k] for i in range(n) for j in range(n)) % p
            for k in range(n)
        )
    if tag == "add":
        parts = [naive_eval(t, values, table, p) for t in node[1:]]
        return tuple(sum(col) % p for col in zip(*parts)) if parts else (0,) * n
    if tag == "smul":
        c = int(node[1]) % p
        return tuple(c * x % p for x in naive_eval(node[2], values, table, p))
    raise ValueError(tag)


def brute_force(name, p, doc):
    """First solution in lexicographic order, or None."""
    table = naive_table(name, p)
    n, names = len(table), doc["vars"]
    for flat in itertools.product(range(p), repeat=n * len(names)):
        values = {v: flat[i * n : (i + 1) * n] for i, v in enumerate(names)}
        evaluated = [naive_eval(t, values, table, p) for t in doc["eqs"]]
        if any(any(x) for x in evaluated):
            continue
        if all(any(naive_eval(t, values, table, p)) for t in doc["neqs"]):
            return values
    return None


def central_system(field):
    """Nonzero x commuting with e2 and outside span{e1}."""
    e1, e2 = Const((field(1), field(0))), Const((field(0), field(1)))
    x = Var("x")
    inequations = [x] + [Sum((x, Scale(field(-c), e1))) for c in range(1, field.order)]
    return EqSystem(("x",), (Bracket(x, e2), Bracket(e2, x)), tuple(inequations))


@pytest.mark.unit
class TestTerms:
    """Test term construction and evaluation."""

    def test_variables_in_order(self, field_q):
        """Test variables are listed once in order of appearance."""
        t = Sum((Bracket(Var("y"), Var("x")), Scale(field_q(2), Var("y"))))
        assert term_variables(t) == ["y", "x"]

    def test_undeclared_variable(self):
        """Test systems refuse unknown variables and duplicates."""
        with pytest.raises(UsageError):
            EqSystem(("x",), (Bracket(Var("x"), Var("y")),))
        with pytest.raises(UsageError):
            EqSystem(("x", "x"))

    def test_eval_term(self, n2):
        """Test [x, x] - e1 vanishes at x = e2."""
        f = n2.field
        t = difference(Bracket(Var("x"), Var("x")), Const(n2.element([1, 0])), f)
        inclusion = Embedding.identity(n2)
        assert f.is_zero_vector(eval_term(t, {"x": n2.element([0, 1])}, n2, inclusion))
        value = eval_term(t, {"x": n2.element([1, 0])}, n2, inclusion)
        assert value == n2.element([-1, 0])
        with pytest.raises(UsageError):
            eval_term(t, {}, n2, inclusion)

    def test_constants_pass_through_inclusion(self, n2, field_q):
        """Test constants land in the first block of a product."""
        ext = direct_product(n2, StructureAlgebra.abelian(field_q, 1))
        inclusion = Embedding.first_block(n2, ext)
        value = eval_term(Const(n2.element([0, 1])), {}, ext, inclusion)
        assert value == ext.element([0, 1, 0])

    def test_embedding_must_be_homomorphism(self, n2):
        """Test a non-homomorphic inclusion is rejected with a witness."""
        with pytest.raises(MathematicalRejection) as exc:
            Embedding.checked(n2, n2, Matrix.from_rows(n2.field, [[2, 0], [0, 2]]))
        assert exc.value.witness == (1, 1)

    def test_check_solution_reports_constraints(self, n2_gf5):
        """Test each constraint is reported with its value."""
        fx = load_system_fixture("n2_square_root")
        inclusion = Embedding.identity(n2_gf5)
        result = check_solution(fx.system, fx.assignment, n2_gf5, inclusion)
        assert result.holds
        assert [c.kind for c in result.constraints] == ["eq"]
        bad = check_solution(
            fx.system, {"x": n2_gf5.element([1, 0])}, n2_gf5, Embedding.identity(n2_gf5)
        )
        assert not bad.holds
        assert bad.failed()[0].index == 0
        with pytest.raises(UsageError):
            check_solution(fx.system, {}, n2_gf5, Embedding.identity(n2_gf5))


@pytest.mark.unit
class TestSolve:
    """Test exhaustive solving against the shipped system fixtures."""

    @pytest.mark.parametrize("name", list_system_fixtures())
    def test_fixture_verdicts(self, name):
        """Test status, first assignment and search space size."""
        fx = load_system_fixture(name)
        a = fx.base.algebra
        result = solve_in(fx.system, a)
        expected = fx.expected
        assert result.status.value == expected["status"]
        assert result.search_space == expected["search_space"]
        if "assignment" in expected:
            found = {k: a.field.format_vector(v) for k, v in result.assignment.items()}
            assert found == expected["assignment"]

    @pytest.mark.parametrize(
        "name,p,doc",
        CURATED_SYSTEMS,
        ids=[f"{i:02d}-{name}-gf{p}" for i, (name, p, _) in enumerate(CURATED_SYSTEMS)],
    )
    def test_matches_brute_force(self, name, p, doc):
        """Test verdict and first assignment agree with a naive enumeration."""
        field = Field.gf(p)
        a = load_algebra_fixture(name, field).algebra
        result = solve_in(system_from_dict(doc, field, a.dim), a)
        expected = brute_force(name, p, doc)
        assert result.search_space == p ** (a.dim * len(doc["vars"]))
        if expected is None:
            assert result.status is SolveStatus.NO_SOLUTION
            assert result.assignment is None
        else:
            assert result.status is SolveStatus.SOLVED
            found = {k: tuple(int(c) for c in v) for k, v in result.assignment.items()}
            assert found == expected

    def test_curated_systems_cover_both_verdicts(self):
        """Test the curated corpus has GF(3) cases and absence cases."""
        primes = {p for _, p, _ in CURATED_SYSTEMS}
        absent = [
            doc
            for name, p, doc in CURATED_SYSTEMS
            if brute_force(name, p, doc) is None
        ]
        assert len(CURATED_SYSTEMS) >= 30
        assert primes == {3, 5}
        assert len(absent) >= 5

    def test_no_solution_is_rechecked(self):
        """Test an absence verdict comes with the reverse pass."""
        fx = load_system_fixture("n2_no_root")
        result = solve_in(fx.system, fx.base.algebra)
        assert result.status is SolveStatus.NO_SOLUTION
        assert result.rechecked

    def test_budget(self):
        """Test a space above the budget is undecided."""
        fx = load_system_fixture("n2_square_root")
        result = solve_in(fx.system, fx.base.algebra, budget=10)
        assert result.status is SolveStatus.UNDECIDED_BUDGET
        assert result.assignment is None
        assert result.search_space == 25

    def test_rationals_rejected(self, n2):
        """Test exhaustive search refuses an infinite field."""
        system = EqSystem(("x",), (Bracket(Var("x"), Var("x")),))
        with pytest.raises(UsageError):
            solve_in(system, n2)

    def test_parallel_runner_agrees(self):
        """Test a thread pool finds the same first solution."""
        fx = load_system_fixture("abelian2_commuting_pair")
        a = fx.base.algebra
        sequential = solve_in(fx.system, a)
        parallel = solve_in(fx.system, a, runner=BlockSearch(workers=3))
        assert parallel == sequential

    def test_search_space_size(self, n2_gf5):
        """Test p**(dim * variables)."""
        system = EqSystem(("x", "y"))
        assert search_space_size(system, n2_gf5) == 625

    def test_system_from_constants(self, n2_gf5):
        """Test a copy of N2 is found inside N2."""
        system = system_from_constants(n2_gf5)
        assert system.variables == ("x1", "x2")
        assert len(system.equations) == 4
        assert len(system.inequations) == 2
        result = solve_in(system, n2_gf5)
        assert result.solved
        assert result.assignment == {"x1": (1, 0), "x2": (0, 1)}


@pytest.mark.unit
class TestDivision:
    """Test division equations solved in HNN-extensions."""

    def test_right_division_in_semidirect_model(self, abelian2):
        """Test [e1, v] = e2 is solved by a stable letter on a proper subalgebra."""
        result = division_witness(abelian2, (1, 0), (0, 1), Side.RIGHT, degree=2)
        assert result.success
        assert result.model_kind == "semidirect"
        assert result.model.dim == 3
        assert result.verdict is not None and not result.verdict.collapsed

    def test_left_division_in_exact_model(self, n2):
        """Test [v, e2] = e1 where e2 generates N2."""
        result = division_witness(n2, (0, 1), (1, 0), Side.LEFT, degree=2)
        assert result.success
        assert result.model_kind == "exact"
        assert result.extension.kind.value == "anti-derivation"

    @pytest.fixture
    def no_finite_model(self, mocker):
        """Force the truncated branch by hiding both finite models."""
        mocker.patch(
            "core.equations.exact_model_check",
            return_value=ExactModel(None, None, reason="hidden"),
        )
        mocker.patch("core.equations.extend_to_algebra", return_value=None)

    def test_truncated_witness_needs_no_collapse(self, abelian2, no_finite_model):
        """Test the truncated certificate holds when the base survives."""
        result = division_witness(abelian2, (1, 0), (0, 1), Side.RIGHT, degree=2)
        assert result.model_kind == "truncated"
        assert result.model is None
        assert result.verdict.status is EmbeddingStatus.NO_COLLAPSE
        assert result.solution.holds
        assert result.success

    def test_truncated_witness_fails_on_collapse(
        self, abelian2, no_finite_model, mocker
    ):
        """Test a collapsing verdict voids the truncated certificate."""
        collapsed = EmbeddingVerdict(EmbeddingStatus.COLLAPSE, 2, (2, 1), None, "x1")
        mocker.patch("core.equations.embedding_check", return_value=collapsed)
        result = division_witness(abelian2, (1, 0), (0, 1), Side.RIGHT, degree=2)
        assert result.model_kind == "truncated"
        assert result.solution.holds
        assert not result.success

    def test_zero_divisor(self, n2):
        """Test dividing by zero is a usage error."""
        with pytest.raises(UsageError):
            division_witness(n2, (0, 0), (1, 0), Side.RIGHT)

    @pytest.mark.slow
    @pytest.mark.property
    @pytest.mark.parametrize(
        "fx", leibniz_fixtures(Field.gf(5)), ids=lambda fx: fx.name
    )
    def test_random_divisions_over_gf5(self, fx):
        """Test random divisions succeed or report an inconsistent assignment."""
        a = fx.algebra
        rng = random.Random(5)
        abelian = fx.name.startswith("abelian")
        for i in range(20):
            x = a.random_element(rng)
            while a.field.is_zero_vector(x):
                x = a.random_element(rng)
            b = a.random_element(rng)
            side = Side.RIGHT if i % 2 == 0 else Side.LEFT
            result = division_witness(a, x, b, side, degree=3)
            if abelian:
                assert result.success, (x, b, side)
            elif not result.assignment.success:
                assert result.assignment.contradiction is not None
            else:
                assert result.success, (x, b, side)

    def test_side_kinds(self):
        """Test left division needs anti-derivations, right needs derivations."""
        assert Side.LEFT.kind.value == "anti-derivation"
        assert Side("right").kind.value == "derivation"


@pytest.mark.unit
class TestCentralizersAndNormalizers:
    """Test annihilator computations and the normalizer-to-biderivation map."""

    def test_centralizer(self, n2, sl2):
        """Test the centralizer of e2 in N2 and of h in sl2."""
        e1_line = Subspace.from_vectors(n2.field, 2, [[1, 0]])
        assert centralizer(n2, [n2.basis_vector(1)]) == e1_line
        h_line = Subspace.from_vectors(sl2.field, 3, [[0, 0, 1]])
        assert centralizer(sl2, [sl2.basis_vector(2)]) == h_line
        assert centralizer(sl2, [sl2.basis_vector(2)], side="left") == h_line
        with pytest.raises(UsageError):
            centralizer(sl2, [sl2.basis_vector(2)], side="middle")

    def test_normalizer(self, n2, sl2):
        """Test span{e1} is normalized by N2 and span{h} only by itself."""
        nz = normalizer(n2, Subspace.from_vectors(n2.field, 2, [[1, 0]]))
        assert nz.left.is_full and nz.right.is_full and nz.both.is_full
        h_line = Subspace.from_vectors(sl2.field, 3, [[0, 0, 1]])
        assert normalizer(sl2, h_line).both == h_line

    def test_nz_to_bider_on_central_line(self, n2):
        """Test every element of N2 acts trivially on span{e1}."""
        report = nz_to_bider(n2, Subspace.from_vectors(n2.field, 2, [[1, 0]]))
        assert report.normalizer.is_full
        assert report.centralizer.is_full
        assert report.kernel.is_full
        assert report.image_dim == 0
        assert report.bider_dim == 2
        assert report.pairs_valid and report.linear
        assert report.kernel_contains_centralizer

    def test_nz_to_bider_full_sl2(self, sl2):
        """Test A = L recovers the inner biderivations and the signed pairs."""
        report = nz_to_bider(sl2, Subspace.full(sl2.field, 3))
        assert report.image_dim == 3
        assert report.bider_dim == 3
        assert report.kernel.is_zero
        assert report.pairs_valid
        assert not report.literal_pairs_valid
        assert report.inner_matches == (True, True, True)

    def test_pair_map_linearity_checks_scalars(self, sl2, mocker):
        """Test a single-vector normalizer still has its scalar multiples checked."""
        full = Subspace.full(sl2.field, 3)
        e_line = Subspace.from_vectors(sl2.field, 3, [[1, 0, 0]])
        minus_one = sl2.field(-1)
        d, dm = _restricted_pair(sl2, full, sl2.basis_vector(0), minus_one)
        true_vector = d.entries + dm.entries
        doubled = sl2.field.scale_vector(sl2.field(2), true_vector)
        rng = mocker.Mock(spec=random.Random)
        rng.randint.return_value = 2
        assert _pair_map_is_linear(sl2, full, e_line, [true_vector], minus_one, rng)
        assert not _pair_map_is_linear(sl2, full, e_line, [doubled], minus_one, rng)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_nz_to_bider_is_linear(self, solvable3, seed):
        """Test the pair map is linear on every seeded sample."""
        report = nz_to_bider(solvable3, Subspace.full(solvable3.field, 3), seed)
        assert report.linear
        assert report.pairs_valid

    def test_nz_to_bider_needs_subalgebra(self, sl2):
        """Test a non-subalgebra is rejected."""
        with pytest.raises(MathematicalRejection):
            nz_to_bider(sl2, span(sl2, [sl2.basis_vector(0), sl2.basis_vector(1)]))


@pytest.mark.unit
class TestFiniteChecks:
    """Test the supplementary finite checks over GF(5)."""

    def test_centralizer_witness(self, n2_gf5):
        """Test e1 centralizes e2 in N2 and t does in the product."""
        witness = centralizer_witness(n2_gf5, [(0, 1)])
        assert witness.centralizer_dim == 1
        assert witness.in_algebra.solved
        assert witness.in_algebra.assignment == {"x": (1, 0)}
        assert witness.extension_check.holds

    def test_simple_embedding_check(self, n2_gf5, gf5):
        """Test a line embeds into N2 and into N2 x line."""
        report = simple_embedding_check(StructureAlgebra.abelian(gf5, 1), n2_gf5)
        assert report.product_check.holds
        assert report.in_target.solved

    def test_closedness_counterexample(self, n2_gf5, gf5):
        """Test a central element off span{e1} exists only after adjoining a line."""
        ext = direct_product(n2_gf5, StructureAlgebra.abelian(gf5, 1))
        inclusion = Embedding.first_block(n2_gf5, ext)
        trivial = EqSystem(("x",), (Bracket(Var("x"), Var("x")),))
        systems = [central_system(gf5), trivial]
        report = closedness_check(n2_gf5, ext, inclusion, systems)
        assert report.counterexamples == [0]
        assert report.decided
        assert report.closed is False

    def test_closedness_undecided(self, n2_gf5, gf5):
        """Test a tiny budget leaves the verdict open."""
        ext = direct_product(n2_gf5, StructureAlgebra.abelian(gf5, 1))
        inclusion = Embedding.first_block(n2_gf5, ext)
        trivial = EqSystem(("x",), (Bracket(Var("x"), Var("x")),))
        report = closedness_check(n2_gf5, ext, inclusion, [trivial], budget=30)
        assert not report.decided
        assert report.closed is None

    def test_closedness_inclusion_checked(self, n2_gf5, gf5):
        """Test the inclusion must match the algebras."""
        ext = direct_product(n2_gf5, StructureAlgebra.abelian(gf5, 1))
        with pytest.raises(UsageError):
            closedness_check(n2_gf5, ext, Embedding.identity(n2_gf5), [])
