"""
Systems of equations and inequations over a structure-constant algebra.

A term is an unreduced expression tree over variables, constants of a fixed
algebra ``L``, brackets, scalar multiples and sums. Terms are evaluated in a
target algebra through an embedding of ``L``. Over GF(p) systems are solved
by exhaustive enumeration, which is a complete decision within the budget.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from .config import (
    DEFAULT_BUDGET,
    DEFAULT_DEGREE,
    DEFAULT_SEED,
    RANDOM_COEFFICIENT_BOUND,
)
from .derivations import (
    AssignmentResult,
    biderivation_space,
    extend_to_algebra,
    inner_biderivation,
    is_biderivation,
    map_from_assignment,
)
from .errors import LibraryInvariantError, MathematicalRejection, UsageError
from .fdalg import (
    Element,
    StructureAlgebra,
    bracket,
    direct_product,
    is_homomorphism,
    is_subalgebra,
    restrict_bracket_to,
    span,
)
from .free_leibniz import FreeElement, free_bracket
from .linalg import Matrix, Subspace, null_space, rank, stack_all
from .presentations import (
    EmbeddingVerdict,
    ExactModel,
    HnnExtension,
    HnnKind,
    build_truncated_quotient,
    embedding_check,
    exact_model_check,
    hnn_extend,
    one_dim_model,
)
from .scalars import Field, Scalar, Vector

logger = logging.getLogger(__name__)

T = TypeVar("T")


# Terms


@dataclass(frozen=True)
class Var:
    name: str

    def format(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    coords: Vector

    def format(self) -> str:
        return "<" + ", ".join(str(c) for c in self.coords) + ">"


@dataclass(frozen=True)
class Bracket:
    left: "TermExpr"
    right: "TermExpr"

    def format(self) -> str:
        return f"[{self.left.format()}, {self.right.format()}]"


@dataclass(frozen=True)
class Scale:
    coeff: Scalar
    term: "TermExpr"

    def format(self) -> str:
        return f"{self.coeff}*{self.term.format()}"


@dataclass(frozen=True)
class Sum:
    terms: Tuple["TermExpr", ...]

    def format(self) -> str:
        if not self.terms:
            return "0"
        return "(" + " + ".join(t.format() for t in self.terms) + ")"


TermExpr = Union[Var, Const, Bracket, Scale, Sum]


def term_variables(t: TermExpr) -> List[str]:
    """Variables in order of first appearance."""
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, Const):
        return []
    if isinstance(t, Bracket):
        children: Sequence[TermExpr] = (t.left, t.right)
    elif isinstance(t, Scale):
        children = (t.term,)
    else:
        children = t.terms
    seen: List[str] = []
    for child in children:
        for name in term_variables(child):
            if name not in seen:
                seen.append(name)
    return seen


def difference(lhs: TermExpr, rhs: TermExpr, field: Field) -> TermExpr:
    """``lhs - rhs`` as a term, for writing ``lhs = rhs`` as ``lhs - rhs = 0``."""
    return Sum((lhs, Scale(field.neg(field.one), rhs)))


@dataclass(frozen=True)
class EqSystem:
    """Equations ``t = 0`` and inequations ``t != 0`` in the listed variables."""

    variables: Tuple[str, ...]
    equations: Tuple[TermExpr, ...] = ()
    inequations: Tuple[TermExpr, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise UsageError(f"Duplicate variable names in {list(self.variables)}")
        declared = set(self.variables)
        for t in self.equations + self.inequations:
            unknown = [v for v in term_variables(t) if v not in declared]
            if unknown:
                raise UsageError(f"Undeclared variable '{unknown[0]}' in {t.format()}")


@dataclass(frozen=True)
class Embedding:
    """Homomorphism ``L -> target`` given by a ``target.dim x L.dim`` matrix."""

    source: StructureAlgebra
    target: StructureAlgebra
    matrix: Matrix

    @classmethod
    def identity(cls, a: StructureAlgebra) -> "Embedding":
        return cls(a, a, Matrix.identity(a.field, a.dim))

    @classmethod
    def checked(
        cls, source: StructureAlgebra, target: StructureAlgebra, matrix: Matrix
    ) -> "Embedding":
        failure = is_homomorphism(source, target, matrix)
        if failure is not None:
            raise MathematicalRejection(
                f"Inclusion is not a homomorphism at basis pair {failure}",
                witness=failure,
            )
        return cls(source, target, matrix)

    @classmethod
    def first_block(
        cls, source: StructureAlgebra, target: StructureAlgebra
    ) -> "Embedding":
        """Inclusion onto the first ``source.dim`` coordinates."""
        f = source.field
        m = Matrix.identity(f, source.dim)
        if target.dim > source.dim:
            m = m.stack(Matrix.zeros(f, target.dim - source.dim, source.dim))
        return cls.checked(source, target, m)

    def apply(self, v: Sequence[Scalar]) -> Element:
        if len(v) != self.source.dim:
            raise UsageError(
                f"Constant has {len(v)} coordinates, L has dim {self.source.dim}"
            )
        return self.matrix.apply(v)


Assignment = Mapping[str, Element]


def eval_term(
    t: TermExpr, asg: Assignment, target: StructureAlgebra, inclusion: Embedding
) -> Element:
    """Evaluate inside-out; constants pass through ``inclusion``."""
    f = target.field
    if isinstance(t, Var):
        if t.name not in asg:
            raise UsageError(f"No value for variable '{t.name}'")
        return target.element(asg[t.name])
    if isinstance(t, Const):
        return inclusion.apply(inclusion.source.element(t.coords))
    if isinstance(t, Bracket):
        left = eval_term(t.left, asg, target, inclusion)
        right = eval_term(t.right, asg, target, inclusion)
        return bracket(target, left, right)
    if isinstance(t, Scale):
        return f.scale_vector(f(t.coeff), eval_term(t.term, asg, target, inclusion))
    total = target.zero()
    for child in t.terms:
        total = f.add_vectors(total, eval_term(child, asg, target, inclusion))
    return total


@dataclass(frozen=True)
class ConstraintResult:
    kind: str  # "eq" or "neq"
    index: int
    value: Element
    satisfied: bool


@dataclass(frozen=True)
class SolutionCheck:
    holds: bool
    constraints: Tuple[ConstraintResult, ...] = ()

    def failed(self) -> List[ConstraintResult]:
        return [c for c in self.constraints if not c.satisfied]


def check_solution(
    s: EqSystem, asg: Assignment, target: StructureAlgebra, inclusion: Embedding
) -> SolutionCheck:
    missing = [v for v in s.variables if v not in asg]
    if missing:
        raise UsageError(f"Assignment misses variable '{missing[0]}'")
    results = []
    for i, t in enumerate(s.equations):
        value = eval_term(t, asg, target, inclusion)
        holds = target.field.is_zero_vector(value)
        results.append(ConstraintResult("eq", i, value, holds))
    for i, t in enumerate(s.inequations):
        value = eval_term(t, asg, target, inclusion)
        holds = not target.field.is_zero_vector(value)
        results.append(ConstraintResult("neq", i, value, holds))
    return SolutionCheck(all(r.satisfied for r in results), tuple(results))


# Exhaustive solving


class SolveStatus(Enum):
    SOLVED = "solved"
    NO_SOLUTION = "no-solution"
    UNDECIDED_BUDGET = "undecided-budget"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    assignment: Optional[Dict[str, Element]] = None
    search_space: int = 0
    rechecked: bool = False

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


BlockRunner = Callable[[Callable[[int], Optional[T]], Sequence[int]], List[Optional[T]]]


def sequential_runner(
    fn: Callable[[int], Optional[T]], blocks: Sequence[int]
) -> List[Optional[T]]:
    return [fn(b) for b in blocks]


def _elements(target: StructureAlgebra, reverse: bool = False) -> List[Element]:
    values = list(target.field.elements())
    if reverse:
        values.reverse()
    return [tuple(v) for v in itertools.product(values, repeat=target.dim)]


def _assignments(
    variables: Sequence[str], elements: Sequence[Element]
) -> Iterator[Dict[str, Element]]:
    for combo in itertools.product(elements, repeat=len(variables)):
        yield dict(zip(variables, combo))


def search_space_size(s: EqSystem, target: StructureAlgebra) -> int:
    return target.field.order ** (target.dim * len(s.variables))


def solve_in(
    s: EqSystem,
    target: StructureAlgebra,
    inclusion: Optional[Embedding] = None,
    budget: int = DEFAULT_BUDGET,
    runner: BlockRunner = sequential_runner,
    recheck: bool = True,
) -> SolveResult:
    """Exhaustively search ``target`` (over GF(p)) for a solution.

    The first solution in lexicographic order is returned. Blocks fixed by
    the value of the first variable may run in any order; the verdict only
    depends on the lowest block that found something. An absence verdict is
    confirmed by a second enumeration in reverse order.
    """
    if not target.field.is_finite:
        raise UsageError("Exhaustive solving needs a finite field")
    if budget < 1:
        raise UsageError(f"Budget must be positive, got {budget}")
    inclusion = inclusion or Embedding.identity(target)
    size = search_space_size(s, target)
    if size > budget:
        logger.warning(f"Search space {size} exceeds budget {budget}: undecided")
        return SolveResult(SolveStatus.UNDECIDED_BUDGET, search_space=size)
    elements = _elements(target)
    if not s.variables:
        check = check_solution(s, {}, target, inclusion)
        status = SolveStatus.SOLVED if check.holds else SolveStatus.NO_SOLUTION
        return SolveResult(status, {} if check.holds else None, size)
    first, rest = s.variables[0], s.variables[1:]

    def search_block(b: int) -> Optional[Dict[str, Element]]:
        for asg in _assignments(rest, elements):
            asg = {first: elements[b], **asg}
            if check_solution(s, asg, target, inclusion).holds:
                return asg
        return None

    hits = runner(search_block, range(len(elements)))
    for hit in hits:
        if hit is not None:
            return SolveResult(SolveStatus.SOLVED, hit, size)
    if recheck:
        for asg in _assignments(s.variables, _elements(target, reverse=True)):
            if check_solution(s, asg, target, inclusion).holds:
                raise LibraryInvariantError(
                    "Reverse enumeration found a solution the forward pass missed"
                )
    logger.info(f"No solution among {size} assignments")
    return SolveResult(SolveStatus.NO_SOLUTION, None, size, rechecked=recheck)


# Division equations


class Side(Enum):
    LEFT = "left"  # [x, a] = b
    RIGHT = "right"  # [a, y] = b

    @property
    def kind(self) -> HnnKind:
        return HnnKind.ANTIDERIVATION if self is Side.LEFT else HnnKind.DERIVATION


def division_system(
    a: StructureAlgebra, x: Sequence[Scalar], b: Sequence[Scalar], side: Side
) -> EqSystem:
    """``[v, x] = b`` (left) or ``[x, v] = b`` (right) in the single variable ``v``."""
    f = a.field
    var, const = Var("v"), Const(a.element(x))
    lhs = Bracket(var, const) if side is Side.LEFT else Bracket(const, var)
    return EqSystem(("v",), (difference(lhs, Const(a.element(b)), f),))


@dataclass(frozen=True)
class DivisionWitness:
    """Extension in which ``[t, a] = b`` or ``[a, t] = b`` is solved by ``t``."""

    side: Side
    assignment: AssignmentResult
    extension: Optional[HnnExtension] = None
    verdict: Optional[EmbeddingVerdict] = None
    model_kind: str = "none"  # exact | semidirect | truncated | none
    model: Optional[StructureAlgebra] = None
    solution: Optional[SolutionCheck] = None

    @property
    def success(self) -> bool:
        if not self.assignment.success or self.solution is None:
            return False
        if self.model_kind == "truncated":
            # The residue vanishes by construction; only the verdict certifies.
            if self.verdict is None or self.verdict.collapsed:
                return False
        return self.solution.holds


def division_witness(
    a: StructureAlgebra,
    x: Sequence[Scalar],
    b: Sequence[Scalar],
    side: Side,
    degree: int = DEFAULT_DEGREE,
    span_only: bool = False,
) -> DivisionWitness:
    """Solve ``[v, x] = b`` (left) or ``[x, v] = b`` (right) in an HNN-extension.

    The defining map sends ``x`` to ``b``. The equation is then checked in the
    best model available: an exact one-dimensional extension when the map
    lives on all of ``L`` or extends to it, otherwise membership of the
    relator in the truncated ideal.
    """
    a = a.require_verified()
    x, b = a.element(x), a.element(b)
    f = a.field
    if f.is_zero_vector(x):
        raise UsageError("Division by the zero element is not defined")
    kind = side.kind
    assignment = map_from_assignment(a, [(x, b)], kind.map_kind, span_only)
    if not assignment.success:
        return DivisionWitness(side, assignment)
    assert assignment.map is not None
    h = hnn_extend(a, assignment.subalgebra, assignment.map, kind)
    verdict = embedding_check(h, degree)
    system = division_system(a, x, b, side)

    exact: ExactModel = exact_model_check(h)
    model, model_kind = exact.algebra, "exact"
    if model is None:
        full = extend_to_algebra(
            a, assignment.subalgebra, assignment.map, kind.map_kind
        )
        model = one_dim_model(a, full, kind).algebra if full is not None else None
        model_kind = "semidirect"
    if model is not None:
        inclusion = Embedding.first_block(a, model)
        t = model.basis_vector(a.dim)
        check = check_solution(system, {"v": t}, model, inclusion)
        return DivisionWitness(side, assignment, h, verdict, model_kind, model, check)

    # No finite model: [x, t] - b (or [t, x] - b) must lie in the truncated ideal.
    quotient = build_truncated_quotient(h.presentation, max(degree, 2))
    xe = FreeElement.from_terms(f, [((k,), c) for k, c in enumerate(x)])
    be = FreeElement.from_terms(f, [((k,), c) for k, c in enumerate(b)])
    t_letter = FreeElement.generator(f, h.stable_letter)
    if side is Side.LEFT:
        lhs = free_bracket(t_letter, xe, None)
    else:
        lhs = free_bracket(xe, t_letter, None)
    residue = quotient.reduce(lhs - be)
    value = tuple(residue.coefficient((k,)) for k in range(a.dim))
    check = SolutionCheck(
        residue.is_zero(), (ConstraintResult("eq", 0, value, residue.is_zero()),)
    )
    return DivisionWitness(side, assignment, h, verdict, "truncated", None, check)


# Centralizers and normalizers


def centralizer(
    a: StructureAlgebra, s: Sequence[Sequence[Scalar]], side: str = "both"
) -> Subspace:
    """``{x : [x, s] = 0 and [s, x] = 0}`` for all ``s`` in the span of ``s``.

    ``side="left"`` keeps only ``[x, s] = 0``; ``side="right"`` only ``[s, x] = 0``.
    """
    if side not in ("left", "right", "both"):
        raise UsageError(f"Unknown side '{side}'")
    blocks = []
    for v in span(a, s).basis:
        if side in ("left", "both"):
            blocks.append(a.right_multiplication(v))
        if side in ("right", "both"):
            blocks.append(a.left_multiplication(v))
    return null_space(stack_all(a.field, a.dim, blocks))


@dataclass(frozen=True)
class NormalizerResult:
    left: Subspace  # {x : [A, x] in A}
    right: Subspace  # {y : [y, A] in A}
    both: Subspace


def normalizer(a: StructureAlgebra, sub: Subspace) -> NormalizerResult:
    q = sub.quotient_map()
    left_blocks = [q @ a.left_multiplication(v) for v in sub.basis]
    right_blocks = [q @ a.right_multiplication(v) for v in sub.basis]
    left = null_space(stack_all(a.field, a.dim, left_blocks))
    right = null_space(stack_all(a.field, a.dim, right_blocks))
    return NormalizerResult(left, right, left.intersection(right))


@dataclass(frozen=True)
class NzBiderReport:
    """Normalizer-to-biderivation map ``z -> (ad z|A, Ad z|A)``.

    Only containments and dimensions are reported; no isomorphism is claimed
    for a finite-dimensional ambient algebra.
    """

    normalizer: Subspace
    centralizer: Subspace
    kernel: Subspace
    pairs_valid: bool
    literal_pairs_valid: bool
    linear: bool
    kernel_contains_centralizer: bool
    image_dim: int
    bider_dim: int
    inner_matches: Tuple[bool, ...] = ()
    pairs: Tuple[Tuple[Matrix, Matrix], ...] = dataclass_field(
        default=(), compare=False
    )


def _restricted_pair(
    a: StructureAlgebra, sub: Subspace, z: Element, sign: Scalar
) -> Tuple[Matrix, Matrix]:
    f = a.field
    right, left = [], []
    for v in sub.basis:
        r = sub.coordinates(f.scale_vector(sign, bracket(a, v, z)))
        lv = sub.coordinates(bracket(a, z, v))
        if r is None or lv is None:
            raise LibraryInvariantError("Normalizer element moved A outside itself")
        right.append(r)
        left.append(lv)
    return (
        Matrix.from_columns(f, right, sub.dim),
        Matrix.from_columns(f, left, sub.dim),
    )


def _pair_map_is_linear(
    a: StructureAlgebra,
    sub: Subspace,
    nz: Subspace,
    vectors: Sequence[Tuple[Scalar, ...]],
    sign: Scalar,
    rng: random.Random,
) -> bool:
    """Scalar multiples of each basis vector and one random combination."""
    f = a.field

    def image(z: Element) -> Tuple[Scalar, ...]:
        d, dm = _restricted_pair(a, sub, z, sign)
        return d.entries + dm.entries

    for z, v in zip(nz.basis, vectors):
        c = f.random_element(rng, RANDOM_COEFFICIENT_BOUND)
        if image(f.scale_vector(c, z)) != f.scale_vector(c, v):
            return False
    coeffs = f.random_vector(rng, nz.dim, RANDOM_COEFFICIENT_BOUND)
    expected = f.zero_vector(2 * sub.dim**2)
    for c, v in zip(coeffs, vectors):
        expected = f.axpy(c, v, expected)
    return image(nz.combine(coeffs)) == expected


def nz_to_bider(
    a: StructureAlgebra, sub: Subspace, seed: int = DEFAULT_SEED
) -> NzBiderReport:
    a = a.require_verified()
    if not is_subalgebra(a, sub):
        raise MathematicalRejection("A is not a subalgebra", witness=sub)
    f = a.field
    inner = restrict_bracket_to(a, sub)
    nz = normalizer(a, sub).both
    minus_one = f.neg(f.one)
    pairs = [_restricted_pair(a, sub, z, minus_one) for z in nz.basis]
    literal = [_restricted_pair(a, sub, z, f.one) for z in nz.basis]
    pairs_valid = all(is_biderivation(inner, d, dm).holds for d, dm in pairs)
    literal_valid = all(is_biderivation(inner, d, dm).holds for d, dm in literal)

    vectors = [d.entries + dm.entries for d, dm in pairs]
    width = 2 * sub.dim**2
    if vectors:
        images = Matrix.from_columns(f, vectors, width)
    else:
        images = Matrix.zeros(f, width, 0)
    rng = random.Random(seed)
    linear = _pair_map_is_linear(a, sub, nz, vectors, minus_one, rng)

    kernel_coords = null_space(images)
    kernel = span(a, [nz.combine(k) for k in kernel_coords.basis])
    cent = centralizer(a, sub.basis)
    contains = cent.is_subspace_of(kernel)
    if not contains:
        raise LibraryInvariantError(
            "Centralizer is not contained in the kernel of z -> pair"
        )

    matches: Tuple[bool, ...] = ()
    if sub.is_full:
        # A = L in the standard basis: compare with the inner biderivations.
        matches = tuple(
            (pair[0], pair[1]) == (inner_pair.d, inner_pair.D)
            for pair, inner_pair in zip(
                pairs, (inner_biderivation(a, z) for z in nz.basis)
            )
        )
    bider_dim = biderivation_space(inner).dim
    return NzBiderReport(
        normalizer=nz,
        centralizer=cent,
        kernel=kernel,
        pairs_valid=pairs_valid,
        literal_pairs_valid=literal_valid,
        linear=linear,
        kernel_contains_centralizer=contains,
        image_dim=rank(images),
        bider_dim=bider_dim,
        inner_matches=matches,
        pairs=tuple(pairs),
    )


def system_from_constants(h: StructureAlgebra) -> EqSystem:
    """``[x_i, x_j] = sum_r c_ij^r x_r`` and ``x_i != 0``: copies of ``h``."""
    h = h.require_verified()
    f = h.field
    names = tuple(f"x{i + 1}" for i in range(h.dim))
    equations: List[TermExpr] = []
    for i, j in itertools.product(range(h.dim), repeat=2):
        rhs = [
            Scale(c, Var(names[r]))
            for r, c in enumerate(h.constants[i][j])
            if c != 0
        ]
        lhs: TermExpr = Bracket(Var(names[i]), Var(names[j]))
        equations.append(difference(lhs, Sum(tuple(rhs)), f) if rhs else lhs)
    inequations = tuple(Var(n) for n in names)
    return EqSystem(names, tuple(equations), inequations)


# Supplementary finite checks


@dataclass(frozen=True)
class CentralizerWitness:
    system: EqSystem
    centralizer_dim: int
    in_algebra: Optional[SolveResult]
    extension_check: SolutionCheck


def centralizer_system(a: StructureAlgebra, xs: Sequence[Sequence[Scalar]]) -> EqSystem:
    equations: List[TermExpr] = []
    for c in xs:
        const = Const(a.element(c))
        equations += [Bracket(Var("x"), const), Bracket(const, Var("x"))]
    return EqSystem(("x",), tuple(equations), (Var("x"),))


def centralizer_witness(
    a: StructureAlgebra,
    xs: Sequence[Sequence[Scalar]],
    budget: int = DEFAULT_BUDGET,
    runner: BlockRunner = sequential_runner,
) -> CentralizerWitness:
    """Nonzero common centralizer element.

    Searched in ``L`` when possible, and always found in ``L x <x>``.
    """
    a = a.require_verified()
    system = centralizer_system(a, xs)
    cent = centralizer(a, xs)
    in_algebra = None
    if a.field.is_finite:
        in_algebra = solve_in(system, a, budget=budget, runner=runner)
    extended = direct_product(a, StructureAlgebra.abelian(a.field, 1))
    inclusion = Embedding.first_block(a, extended)
    witness = {"x": extended.basis_vector(a.dim)}
    check = check_solution(system, witness, extended, inclusion)
    return CentralizerWitness(system, cent.dim, in_algebra, check)


@dataclass(frozen=True)
class SimpleEmbeddingReport:
    system: EqSystem
    product_check: SolutionCheck
    in_target: Optional[SolveResult]


def simple_embedding_check(
    h: StructureAlgebra,
    target: StructureAlgebra,
    budget: int = DEFAULT_BUDGET,
    runner: BlockRunner = sequential_runner,
) -> SimpleEmbeddingReport:
    """Solve "contains a copy of ``h``" in ``target x h``.

    When the search fits the budget it is also solved in ``target`` itself.
    """
    h = h.require_verified()
    target = target.require_verified()
    system = system_from_constants(h)
    product = direct_product(target, h)
    inclusion = Embedding.first_block(target, product)
    asg = {
        name: product.basis_vector(target.dim + i)
        for i, name in enumerate(system.variables)
    }
    product_check = check_solution(system, asg, product, inclusion)
    in_target = None
    if target.field.is_finite:
        in_target = solve_in(system, target, budget=budget, runner=runner)
    return SimpleEmbeddingReport(system, product_check, in_target)


@dataclass(frozen=True)
class ClosednessEntry:
    index: int
    in_extension: SolveResult
    in_algebra: SolveResult

    @property
    def counterexample(self) -> bool:
        if not self.in_extension.solved:
            return False
        return self.in_algebra.status is SolveStatus.NO_SOLUTION


@dataclass(frozen=True)
class ClosednessReport:
    entries: Tuple[ClosednessEntry, ...]

    @property
    def counterexamples(self) -> List[int]:
        return [e.index for e in self.entries if e.counterexample]

    @property
    def decided(self) -> bool:
        return all(
            SolveStatus.UNDECIDED_BUDGET
            not in (e.in_extension.status, e.in_algebra.status)
            for e in self.entries
        )

    @property
    def closed(self) -> Optional[bool]:
        """``False`` on any counterexample, ``True`` if decided without one.

        ``None`` when some search ran out of budget.
        """
        if self.counterexamples:
            return False
        return True if self.decided else None


def closedness_check(
    a: StructureAlgebra,
    extension: StructureAlgebra,
    inclusion: Embedding,
    systems: Sequence[EqSystem],
    budget: int = DEFAULT_BUDGET,
    runner: BlockRunner = sequential_runner,
) -> ClosednessReport:
    """Existential closedness of ``a`` relative to ``extension``.

    Only the given finite family of systems is checked.
    """
    if inclusion.source != a or inclusion.target != extension:
        raise UsageError("Inclusion must map the algebra into the extension")
    entries = []
    for i, s in enumerate(systems):
        outer = solve_in(s, extension, inclusion, budget, runner)
        inner = solve_in(s, a, Embedding.identity(a), budget, runner)
        entries.append(ClosednessEntry(i, outer, inner))
    report = ClosednessReport(tuple(entries))
    if report.counterexamples:
        logger.info(
            f"Systems {report.counterexamples} are solvable in the extension only"
        )
    return report
