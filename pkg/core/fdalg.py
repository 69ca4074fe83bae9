"""
Finite-dimensional right Leibniz algebras given by structure constants.

An algebra of dimension ``n`` stores ``constants[i][j]``, the coordinate
vector of ``[e_i, e_j]``. Elements are plain coordinate tuples. The module
covers identity verification, subalgebras and ideals, the derived series,
simplicity, direct products and one-dimensional extensions.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .config import RANDOM_COEFFICIENT_BOUND, RATIONAL_LINE_COEFFICIENTS
from .errors import MathematicalRejection, UsageError
from .linalg import Matrix, Subspace
from .scalars import Field, Scalar, Vector

logger = logging.getLogger(__name__)

# An element is its coordinate vector in the standard basis.
Element = Vector


@dataclass(frozen=True)
class StructureAlgebra:
    """Algebra with ``[e_i, e_j] = sum_k constants[i][j][k] e_k``."""

    field: Field
    dim: int
    constants: Tuple[Tuple[Vector, ...], ...]
    name: str = ""
    verified: bool = dataclass_field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.constants) != self.dim or any(
            len(row) != self.dim or any(len(v) != self.dim for v in row)
            for row in self.constants
        ):
            raise UsageError(f"Structure constants do not match dimension {self.dim}")

    @classmethod
    def from_table(
        cls,
        field: Field,
        dim: int,
        table: Dict[Tuple[int, int], Sequence[Scalar]],
        name: str = "",
    ) -> "StructureAlgebra":
        """Build from ``{(i, j): coords of [e_i, e_j]}``; missing pairs are zero."""
        for (i, j), out in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise UsageError(f"Bracket index ({i}, {j}) outside [0, {dim})")
            if len(out) != dim:
                raise UsageError(
                    f"Bracket ({i}, {j}) has {len(out)} coordinates, expected {dim}"
                )
        zero = field.zero_vector(dim)
        constants = tuple(
            tuple(
                field.vector(table[(i, j)]) if (i, j) in table else zero
                for j in range(dim)
            )
            for i in range(dim)
        )
        return cls(field, dim, constants, name)

    @classmethod
    def abelian(cls, field: Field, dim: int) -> "StructureAlgebra":
        return cls.from_table(field, dim, {}, name=f"abelian{dim}")

    def basis_vector(self, i: int) -> Element:
        if not 0 <= i < self.dim:
            raise UsageError(f"Basis index {i} outside [0, {self.dim})")
        return self.field.unit_vector(self.dim, i)

    def basis(self) -> List[Element]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def element(self, coords: Sequence[object]) -> Element:
        if len(coords) != self.dim:
            raise UsageError(
                f"Element has {len(coords)} coordinates, algebra has dim {self.dim}"
            )
        return self.field.vector(coords)  # type: ignore[arg-type]

    def zero(self) -> Element:
        return self.field.zero_vector(self.dim)

    def check_element(self, x: Sequence[Scalar]) -> None:
        if len(x) != self.dim:
            raise UsageError(
                f"Element has {len(x)} coordinates, algebra has dim {self.dim}"
            )

    def structure_constant(self, i: int, j: int, k: int) -> Scalar:
        return self.constants[i][j][k]

    def is_abelian(self) -> bool:
        return all(self.field.is_zero_vector(v) for row in self.constants for v in row)

    def right_multiplication(self, z: Element) -> Matrix:
        """Matrix of ``x -> [x, z]``."""
        columns = [bracket(self, e, z) for e in self.basis()]
        return Matrix.from_columns(self.field, columns, self.dim)

    def left_multiplication(self, z: Element) -> Matrix:
        """Matrix of ``x -> [z, x]``."""
        columns = [bracket(self, z, e) for e in self.basis()]
        return Matrix.from_columns(self.field, columns, self.dim)

    def random_element(self, rng: random.Random) -> Element:
        return self.field.random_vector(rng, self.dim, RANDOM_COEFFICIENT_BOUND)

    def require_verified(self) -> "StructureAlgebra":
        """Return a verified copy, or raise with the first violating triple."""
        if self.verified:
            return self
        report = verify_leibniz(self)
        if not report.holds:
            raise MathematicalRejection(
                f"Leibniz identity fails for {self.name or 'algebra'} "
                f"at basis triple {report.violations[0].triple}",
                witness=report.violations[0],
            )
        return replace(self, verified=True)


@dataclass(frozen=True)
class IdentityViolation:
    """A basis triple where ``[[x,y],z] != [[x,z],y] + [x,[y,z]]``."""

    triple: Tuple[int, int, int]
    lhs: Vector
    rhs: Vector

    def to_dict(self, field: Field) -> dict:
        return {
            "triple": list(self.triple),
            "lhs": field.format_vector(self.lhs),
            "rhs": field.format_vector(self.rhs),
        }


@dataclass(frozen=True)
class LeibnizReport:
    holds: bool
    violations: Tuple[IdentityViolation, ...] = ()


@dataclass(frozen=True)
class DerivedSeriesResult:
    """``L^[1] = L`` down to the stabilizing term."""

    terms: Tuple[Subspace, ...]
    solvable: bool
    stabilization_index: int

    @property
    def dimensions(self) -> List[int]:
        return [t.dim for t in self.terms]


@dataclass(frozen=True)
class SimplicityResult:
    """Literal verdict of "only ideals are 0, [L, L] and L"."""

    simple: bool
    complete: bool
    derived_algebra: Subspace
    ideals_found: Tuple[Subspace, ...]
    offending_ideal: Optional[Subspace] = None
    warnings: Tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        if not self.simple:
            return "not simple"
        return "simple" if self.complete else "no counterexample found"


@dataclass(frozen=True)
class ExtensionResult:
    """Outcome of a construct-then-verify extension."""

    algebra: Optional[StructureAlgebra]
    report: LeibnizReport

    @property
    def accepted(self) -> bool:
        return self.algebra is not None


def bracket(a: StructureAlgebra, x: Sequence[Scalar], y: Sequence[Scalar]) -> Element:
    """Bilinear expansion of ``[x, y]`` through the structure constants."""
    a.check_element(x)
    a.check_element(y)
    f = a.field
    result = [f.zero] * a.dim
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        row = a.constants[i]
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            coeff = f.mul(xi, yj)
            for k, c in enumerate(row[j]):
                if c != 0:
                    result[k] = f.add(result[k], f.mul(coeff, c))
    return tuple(result)


def leibniz_defect(
    a: StructureAlgebra, x: Sequence[Scalar], y: Sequence[Scalar], z: Sequence[Scalar]
) -> Tuple[Element, Element]:
    """Both sides of the identity ``[[x,y],z] = [[x,z],y] + [x,[y,z]]``."""
    lhs = bracket(a, bracket(a, x, y), z)
    rhs = a.field.add_vectors(
        bracket(a, bracket(a, x, z), y), bracket(a, x, bracket(a, y, z))
    )
    return lhs, rhs


def verify_leibniz(a: StructureAlgebra) -> LeibnizReport:
    """Check the identity on all basis triples; trilinearity makes this complete."""
    basis = a.basis()
    violations = []
    for i, j, k in itertools.product(range(a.dim), repeat=3):
        lhs, rhs = leibniz_defect(a, basis[i], basis[j], basis[k])
        if lhs != rhs:
            violations.append(IdentityViolation((i, j, k), lhs, rhs))
    if violations:
        logger.info(f"{a.name or 'algebra'}: {len(violations)} Leibniz violations")
    return LeibnizReport(not violations, tuple(violations))


def span(a: StructureAlgebra, vectors: Iterable[Sequence[Scalar]]) -> Subspace:
    return Subspace.from_vectors(a.field, a.dim, vectors)


def product_space(a: StructureAlgebra, u: Subspace, w: Subspace) -> Subspace:
    """``[U, W]``, the span of all brackets of basis vectors."""
    return span(a, (bracket(a, x, y) for x in u.basis for y in w.basis))


def derived_algebra(a: StructureAlgebra) -> Subspace:
    full = Subspace.full(a.field, a.dim)
    return product_space(a, full, full)


def subalgebra_generated(
    a: StructureAlgebra, vectors: Iterable[Sequence[Scalar]]
) -> Subspace:
    """Smallest bracket-closed subspace containing ``vectors``."""
    current = span(a, vectors)
    while True:
        grown = current.sum(product_space(a, current, current))
        if grown == current:
            return current
        current = grown


def is_subalgebra(a: StructureAlgebra, v: Subspace) -> bool:
    return product_space(a, v, v).is_subspace_of(v)


def ideal_closure(a: StructureAlgebra, vectors: Iterable[Sequence[Scalar]]) -> Subspace:
    """Least two-sided ideal containing ``vectors``."""
    full = Subspace.full(a.field, a.dim)
    current = span(a, vectors)
    while True:
        grown = current.sum(product_space(a, current, full)).sum(
            product_space(a, full, current)
        )
        if grown == current:
            return current
        current = grown


def is_left_ideal(a: StructureAlgebra, v: Subspace) -> bool:
    """``[L, V]`` is contained in ``V``."""
    return all(v.contains(bracket(a, e, x)) for e in a.basis() for x in v.basis)


def is_right_ideal(a: StructureAlgebra, v: Subspace) -> bool:
    """``[V, L]`` is contained in ``V``."""
    return all(v.contains(bracket(a, x, e)) for e in a.basis() for x in v.basis)


def is_ideal(a: StructureAlgebra, v: Subspace) -> bool:
    return is_left_ideal(a, v) and is_right_ideal(a, v)


def derived_series(a: StructureAlgebra) -> DerivedSeriesResult:
    terms = [Subspace.full(a.field, a.dim)]
    while not terms[-1].is_zero:
        following = product_space(a, terms[-1], terms[-1])
        if following == terms[-1]:
            break
        terms.append(following)
    solvable = terms[-1].is_zero
    return DerivedSeriesResult(tuple(terms), solvable, len(terms))


def _candidate_lines(a: StructureAlgebra) -> Iterable[Vector]:
    """Representatives of lines: first nonzero coordinate normalized to one."""
    f = a.field
    if f.is_finite:
        values = list(f.elements())
    else:
        values = [f(c) for c in RATIONAL_LINE_COEFFICIENTS]
    for lead in range(a.dim):
        for tail in itertools.product(values, repeat=a.dim - lead - 1):
            yield tuple([f.zero] * lead + [f.one] + list(tail))


def is_simple(a: StructureAlgebra) -> SimplicityResult:
    """Enumerate ideal closures of lines and compare against ``{0, [L,L], L}``.

    Over GF(p) every line is tried, which is complete: a nonzero ideal other
    than ``[L,L]`` and ``L`` would contain a line whose closure is neither.
    Over Q only lines with coordinates in ``{-1, 0, 1}`` are tried.
    """
    a = a.require_verified()
    full = Subspace.full(a.field, a.dim)
    zero = Subspace.zero(a.field, a.dim)
    derived = derived_algebra(a)
    allowed = {zero, derived, full}
    found: Dict[Tuple[Vector, ...], Subspace] = {}
    offending = None
    for line in _candidate_lines(a):
        closure = ideal_closure(a, [line])
        found.setdefault(closure.basis, closure)
        if closure not in allowed:
            offending = closure
            break
    complete = a.field.is_finite
    warnings = []
    if offending is None:
        if a.dim <= 1 or derived.is_zero:
            warnings.append("degenerate: [L, L] = 0 or dim <= 1, simple only vacuously")
        elif derived_series(a).solvable:
            warnings.append(
                "degenerate: algebra is solvable yet simple by the literal definition"
            )
        if not complete:
            warnings.append(
                "over Q only small-coefficient lines were tried: "
                "no counterexample found"
            )
    for w in warnings:
        logger.warning(f"{a.name or 'algebra'}: {w}")
    return SimplicityResult(
        simple=offending is None,
        complete=complete or offending is not None,
        derived_algebra=derived,
        ideals_found=tuple(sorted(found.values(), key=lambda s: (s.dim, s.basis))),
        offending_ideal=offending,
        warnings=tuple(warnings),
    )


def direct_product(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    """Componentwise bracket on ``A (+) B``; both factors become ideals."""
    if a.field != b.field:
        raise UsageError(f"Cannot multiply algebras over {a.field} and {b.field}")
    f = a.field
    n, m = a.dim, b.dim
    table = {}
    for i, j in itertools.product(range(n), repeat=2):
        table[(i, j)] = a.constants[i][j] + f.zero_vector(m)
    for i, j in itertools.product(range(m), repeat=2):
        table[(n + i, n + j)] = f.zero_vector(n) + b.constants[i][j]
    name = f"{a.name or 'A'} x {b.name or 'B'}"
    product = StructureAlgebra.from_table(f, n + m, table, name)
    if a.verified and b.verified:
        product = replace(product, verified=True)
    return product


def one_dim_extension(a: StructureAlgebra, d: Matrix, dm: Matrix) -> ExtensionResult:
    """Adjoin ``t`` with ``[a, t] = d(a)``, ``[t, a] = -dm(a)``, ``[t, t] = 0``.

    The candidate is verified before it is returned.
    """
    n = a.dim
    for label, m in (("d", d), ("D", dm)):
        if (m.rows, m.cols) != (n, n):
            raise UsageError(f"Map {label} must be {n}x{n}, got {m.rows}x{m.cols}")
    f = a.field
    table = {}
    for i, j in itertools.product(range(n), repeat=2):
        table[(i, j)] = a.constants[i][j] + (f.zero,)
    for i in range(n):
        table[(i, n)] = d.column(i) + (f.zero,)
        table[(n, i)] = tuple(f.neg(x) for x in dm.column(i)) + (f.zero,)
    candidate = StructureAlgebra.from_table(f, n + 1, table, f"{a.name or 'L'} + <t>")
    report = verify_leibniz(candidate)
    if not report.holds:
        logger.info(
            f"One-dimensional extension rejected at {report.violations[0].triple}"
        )
        return ExtensionResult(None, report)
    return ExtensionResult(replace(candidate, verified=True), report)


def restrict_bracket_to(a: StructureAlgebra, v: Subspace) -> StructureAlgebra:
    """The subalgebra ``v`` as an algebra in its own echelon basis."""
    if not is_subalgebra(a, v):
        raise MathematicalRejection(
            "Subspace is not closed under the bracket", witness=v
        )
    k = v.dim
    table = {}
    for s, u in itertools.product(range(k), repeat=2):
        coords = v.coordinates(bracket(a, v.basis[s], v.basis[u]))
        assert coords is not None
        table[(s, u)] = coords
    sub = StructureAlgebra.from_table(a.field, k, table, f"sub({a.name or 'L'})")
    return replace(sub, verified=a.verified)


def mutate(
    a: StructureAlgebra, i: int, j: int, k: int, delta: Scalar
) -> StructureAlgebra:
    """Copy with ``c_ij^k`` shifted by ``delta`` (unverified)."""
    f = a.field
    table = {
        (p, q): a.constants[p][q] for p in range(a.dim) for q in range(a.dim)
    }
    out = list(table[(i, j)])
    out[k] = f.add(out[k], f(delta))
    table[(i, j)] = tuple(out)
    name = f"{a.name or 'L'}~mut({i},{j},{k})"
    return StructureAlgebra.from_table(f, a.dim, table, name)


def center(a: StructureAlgebra) -> Subspace:
    """Two-sided annihilator ``{x : [x, L] = [L, x] = 0}``."""
    from .equations import centralizer

    return centralizer(a, a.basis())


def left_center(a: StructureAlgebra) -> Subspace:
    """``{x : [x, L] = 0}``."""
    from .equations import centralizer

    return centralizer(a, a.basis(), side="left")


def right_center(a: StructureAlgebra) -> Subspace:
    """``{x : [L, x] = 0}``."""
    from .equations import centralizer

    return centralizer(a, a.basis(), side="right")


def is_homomorphism(
    source: StructureAlgebra, target: StructureAlgebra, m: Matrix
) -> Optional[Tuple[int, int]]:
    """First basis pair where ``m`` fails to preserve brackets, or ``None``."""
    if (m.rows, m.cols) != (target.dim, source.dim):
        raise UsageError(
            f"Map must be {target.dim}x{source.dim}, got {m.rows}x{m.cols}"
        )
    images = m.columns()
    for i, j in itertools.product(range(source.dim), repeat=2):
        lhs = bracket(target, images[i], images[j])
        rhs = m.apply(source.constants[i][j])
        if lhs != rhs:
            return (i, j)
    return None


def random_triples(
    a: StructureAlgebra, rng: random.Random, count: int
) -> List[Tuple[Element, Element, Element]]:
    return [
        (a.random_element(rng), a.random_element(rng), a.random_element(rng))
        for _ in range(count)
    ]
