"""
Derivations, anti-derivations and biderivations of structure-constant algebras.

A linear map ``d`` on an ``n``-dimensional algebra is an ``n x n`` matrix
whose column ``i`` is ``d(e_i)``. Solution spaces are ``Subspace`` objects in
the space of row-major matrix entries (``n*n`` coordinates, or ``2*n*n`` for
biderivation pairs ``(d, D)``).

Defining identities:

* derivation: ``d[x, y] = [d x, y] + [x, d y]``
* anti-derivation: ``d[x, y] = [d x, y] - [d y, x]``
* biderivation ``(d, D)``: ``d`` a derivation, ``D`` an anti-derivation and
  ``[x, d y] = [x, D y]`` for all ``x, y``.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import DefaultDict, Dict, List, Optional, Sequence, Tuple

from .errors import LibraryInvariantError, MathematicalRejection, UsageError
from .fdalg import StructureAlgebra, bracket, is_subalgebra, span, subalgebra_generated
from .linalg import Matrix, Subspace, null_space, solve_with_certificate
from .scalars import Field, Scalar, Vector

logger = logging.getLogger(__name__)

LinearMap = Matrix


class MapKind(Enum):
    """Which defining identity a map is asked to satisfy."""

    DERIVATION = "derivation"
    ANTIDERIVATION = "anti-derivation"

    @classmethod
    def parse(cls, text: str) -> "MapKind":
        for kind in cls:
            aliases = (
                kind.value,
                kind.name.lower(),
                kind.value.replace("-", ""),
                kind.value.split("-")[0],
            )
            if text.lower() in aliases:
                return kind
        raise UsageError(
            f"Unknown map kind '{text}' (expected derivation or anti-derivation)"
        )


@dataclass(frozen=True)
class IdentityCheck:
    """Result of testing a map identity on all basis pairs."""

    holds: bool
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Restriction:
    """Restriction of a map to a subspace, or the image vector that escapes it."""

    matrix: Optional[Matrix]
    witness: Optional[Vector] = None

    @property
    def exists(self) -> bool:
        return self.matrix is not None


@dataclass(frozen=True)
class AssignmentResult:
    """Outcome of solving for a map on ``A`` from prescribed values.

    On success ``map`` is the ``n x k`` matrix of ``A -> L`` in the echelon
    basis of ``A`` and ``freedom`` the dimension of the solution family. On
    failure ``contradiction`` lists the combination of linear conditions that
    reads ``0 = nonzero``.
    """

    subalgebra: Subspace
    kind: MapKind
    map: Optional[Matrix]
    freedom: int = 0
    contradiction: Optional[Vector] = None

    @property
    def success(self) -> bool:
        return self.map is not None

    def image_of(self, x: Sequence[Scalar]) -> Vector:
        if self.map is None:
            raise UsageError("Assignment is inconsistent; no map to evaluate")
        coords = self.subalgebra.coordinates(x)
        if coords is None:
            raise UsageError("Element lies outside the subalgebra of the assignment")
        return self.map.apply(coords)


# Linear systems

Row = Dict[int, Scalar]


def _add(
    row: DefaultDict[int, Scalar], field: Field, index: int, value: Scalar
) -> None:
    if value != 0:
        row[index] = field.add(row[index], value)


def _identity_rows(
    a: StructureAlgebra, kind: MapKind, offset: int = 0
) -> List[Row]:
    """One linear condition per basis pair and output coordinate.

    Unknown ``offset + r*n + c`` is the matrix entry ``m[r][c]``.
    """
    n, f = a.dim, a.field
    c = a.constants
    rows: List[Row] = []
    for i, j, k in itertools.product(range(n), repeat=3):
        row: DefaultDict[int, Scalar] = defaultdict(lambda: f.zero)
        # m([e_i, e_j])_k
        for m, coeff in enumerate(c[i][j]):
            _add(row, f, offset + k * n + m, coeff)
        for r in range(n):
            # [m e_i, e_j]_k
            _add(row, f, offset + r * n + i, f.neg(c[r][j][k]))
            if kind is MapKind.DERIVATION:
                # [e_i, m e_j]_k
                _add(row, f, offset + r * n + j, f.neg(c[i][r][k]))
            else:
                # [m e_j, e_i]_k
                _add(row, f, offset + r * n + j, c[r][i][k])
        rows.append({key: value for key, value in row.items() if value != 0})
    return rows


def _compatibility_rows(a: StructureAlgebra) -> List[Row]:
    """``[e_i, (d - D) e_j] = 0`` on all basis pairs; ``d`` first, then ``D``."""
    n, f = a.dim, a.field
    c = a.constants
    rows: List[Row] = []
    for i, j, k in itertools.product(range(n), repeat=3):
        row: Row = {}
        for r in range(n):
            coeff = c[i][r][k]
            if coeff != 0:
                row[r * n + j] = f.add(row.get(r * n + j, f.zero), coeff)
                col = n * n + r * n + j
                row[col] = f.sub(row.get(col, f.zero), coeff)
        rows.append({key: value for key, value in row.items() if value != 0})
    return rows


def _system(field: Field, rows: Sequence[Row], unknowns: int) -> Matrix:
    dense = [[row.get(u, field.zero) for u in range(unknowns)] for row in rows]
    return Matrix.from_rows(field, dense, unknowns)


def _prepare(a: StructureAlgebra, strict: bool) -> StructureAlgebra:
    return a.require_verified() if strict else a


def derivation_space(a: StructureAlgebra, strict: bool = True) -> Subspace:
    """All derivations, as a subspace of ``field^(n*n)``.

    ``strict=False`` skips the identity check so non-Leibniz controls can be
    analysed too.
    """
    a = _prepare(a, strict)
    rows = _identity_rows(a, MapKind.DERIVATION)
    space = null_space(_system(a.field, rows, a.dim**2))
    logger.debug(f"{a.name or 'algebra'}: derivation space has dim {space.dim}")
    return space


def antiderivation_space(a: StructureAlgebra, strict: bool = True) -> Subspace:
    a = _prepare(a, strict)
    space = null_space(
        _system(a.field, _identity_rows(a, MapKind.ANTIDERIVATION), a.dim**2)
    )
    logger.debug(f"{a.name or 'algebra'}: anti-derivation space has dim {space.dim}")
    return space


def map_space(a: StructureAlgebra, kind: MapKind, strict: bool = True) -> Subspace:
    if kind is MapKind.DERIVATION:
        return derivation_space(a, strict)
    return antiderivation_space(a, strict)


def biderivation_space(a: StructureAlgebra, strict: bool = True) -> Subspace:
    """Pairs ``(d, D)`` as vectors ``d.entries + D.entries`` in ``field^(2*n*n)``."""
    a = _prepare(a, strict)
    n2 = a.dim**2
    rows = (
        _identity_rows(a, MapKind.DERIVATION)
        + _identity_rows(a, MapKind.ANTIDERIVATION, offset=n2)
        + _compatibility_rows(a)
    )
    space = null_space(_system(a.field, rows, 2 * n2))
    logger.debug(f"{a.name or 'algebra'}: biderivation space has dim {space.dim}")
    return space


def vector_to_map(a: StructureAlgebra, v: Sequence[Scalar]) -> LinearMap:
    if len(v) != a.dim**2:
        raise UsageError(f"Map vector has length {len(v)}, expected {a.dim**2}")
    return Matrix(a.field, a.dim, a.dim, tuple(v))


def map_to_vector(m: LinearMap) -> Vector:
    return m.entries


def maps_of(a: StructureAlgebra, space: Subspace) -> List[LinearMap]:
    return [vector_to_map(a, v) for v in space.basis]


# Predicates


def _check_square(a: StructureAlgebra, m: Matrix, label: str = "map") -> None:
    if (m.rows, m.cols) != (a.dim, a.dim):
        raise UsageError(f"{label} must be {a.dim}x{a.dim}, got {m.rows}x{m.cols}")
    if m.field != a.field:
        raise UsageError(f"{label} is over {m.field}, algebra over {a.field}")


def check_map_identity(
    a: StructureAlgebra, m: LinearMap, kind: MapKind
) -> IdentityCheck:
    _check_square(a, m)
    f = a.field
    images = m.columns()
    basis = a.basis()
    for i, j in itertools.product(range(a.dim), repeat=2):
        lhs = m.apply(a.constants[i][j])
        first = bracket(a, images[i], basis[j])
        if kind is MapKind.DERIVATION:
            rhs = f.add_vectors(first, bracket(a, basis[i], images[j]))
        else:
            rhs = f.sub_vectors(first, bracket(a, images[j], basis[i]))
        if lhs != rhs:
            return IdentityCheck(False, (i, j))
    return IdentityCheck(True)


def is_derivation(a: StructureAlgebra, m: LinearMap) -> IdentityCheck:
    return check_map_identity(a, m, MapKind.DERIVATION)


def is_antiderivation(a: StructureAlgebra, m: LinearMap) -> IdentityCheck:
    return check_map_identity(a, m, MapKind.ANTIDERIVATION)


def is_biderivation(a: StructureAlgebra, d: LinearMap, dm: LinearMap) -> IdentityCheck:
    first = is_derivation(a, d)
    if not first:
        return first
    second = is_antiderivation(a, dm)
    if not second:
        return second
    _check_square(a, dm, "D")
    d_images, dm_images = d.columns(), dm.columns()
    basis = a.basis()
    for i, j in itertools.product(range(a.dim), repeat=2):
        if bracket(a, basis[i], d_images[j]) != bracket(a, basis[i], dm_images[j]):
            return IdentityCheck(False, (i, j))
    return IdentityCheck(True)


# Biderivations


@dataclass(frozen=True)
class Biderivation:
    """A pair ``(d, D)`` checked against the biderivation identities on construction."""

    algebra: StructureAlgebra
    d: LinearMap
    D: LinearMap

    def __post_init__(self) -> None:
        check = is_biderivation(self.algebra, self.d, self.D)
        if not check:
            raise MathematicalRejection(
                "(d, D) is not a biderivation: identities fail at basis pair "
                f"{check.witness}",
                witness=check.witness,
            )

    @classmethod
    def from_vector(cls, a: StructureAlgebra, v: Sequence[Scalar]) -> "Biderivation":
        n2 = a.dim**2
        if len(v) != 2 * n2:
            raise UsageError(f"Pair vector has length {len(v)}, expected {2 * n2}")
        return cls(a, vector_to_map(a, v[:n2]), vector_to_map(a, v[n2:]))

    def to_vector(self) -> Vector:
        return self.d.entries + self.D.entries

    def is_zero(self) -> bool:
        return self.d.is_zero() and self.D.is_zero()


def bider_bracket(p1: Biderivation, p2: Biderivation) -> Biderivation:
    """``[(d1, D1), (d2, D2)] = (d1 d2 - d2 d1, D1 d2 - d2 D1)``."""
    if p1.algebra != p2.algebra:
        raise UsageError("Biderivations belong to different algebras")
    d = p1.d @ p2.d - p2.d @ p1.d
    dm = p1.D @ p2.d - p2.d @ p1.D
    try:
        return Biderivation(p1.algebra, d, dm)
    except MathematicalRejection as e:
        raise LibraryInvariantError(f"Bider bracket left the biderivation space: {e}")


def inner_biderivation(a: StructureAlgebra, element: Sequence[Scalar]) -> Biderivation:
    """``(ad l, Ad l)`` with ``ad(l)(x) = -[x, l]`` and ``Ad(l)(x) = [l, x]``."""
    a = a.require_verified()
    z = a.element(element)
    return Biderivation(a, -a.right_multiplication(z), a.left_multiplication(z))


def bider_algebra(a: StructureAlgebra) -> StructureAlgebra:
    """Bider(L) as a structure-constant algebra on the biderivation space basis."""
    a = a.require_verified()
    space = biderivation_space(a)
    pairs = [Biderivation.from_vector(a, v) for v in space.basis]
    table = {}
    for s, u in itertools.product(range(len(pairs)), repeat=2):
        product = bider_bracket(pairs[s], pairs[u]).to_vector()
        coords = space.coordinates(product)
        if coords is None:
            raise LibraryInvariantError("Bider bracket escaped the biderivation space")
        table[(s, u)] = coords
    name = f"Bider({a.name or 'L'})"
    result = StructureAlgebra.from_table(a.field, len(pairs), table, name)
    try:
        return result.require_verified()
    except MathematicalRejection as e:
        raise LibraryInvariantError(f"Bider(L) fails the Leibniz identity: {e}")


# Subalgebras


def restrict_map(a: StructureAlgebra, sub: Subspace, m: LinearMap) -> Restriction:
    """``m`` on ``sub`` in the echelon basis of ``sub``, if ``m(sub)`` stays inside."""
    _check_square(a, m)
    columns = []
    for b in sub.basis:
        image = m.apply(b)
        coords = sub.coordinates(image)
        if coords is None:
            return Restriction(None, image)
        columns.append(coords)
    return Restriction(Matrix.from_columns(a.field, columns, sub.dim))


def _assignment_rows(
    a: StructureAlgebra, sub: Subspace, kind: MapKind
) -> List[Row]:
    """Identity conditions for ``phi: sub -> L``.

    Unknown ``r*k + s`` is ``phi[r][s]``.
    """
    n, k, f = a.dim, sub.dim, a.field
    basis = a.basis()
    rows: List[Row] = []
    for s, u in itertools.product(range(k), repeat=2):
        bs, bu = sub.basis[s], sub.basis[u]
        gamma = sub.coordinates(bracket(a, bs, bu))
        if gamma is None:
            raise MathematicalRejection(
                "Subspace is not closed under the bracket", witness=(s, u)
            )
        left_factors = [bracket(a, e, bu) for e in basis]
        if kind is MapKind.DERIVATION:
            second = [bracket(a, bs, e) for e in basis]
            sign = f.neg(f.one)
        else:
            second = [bracket(a, e, bs) for e in basis]
            sign = f.one
        for q in range(n):
            row: DefaultDict[int, Scalar] = defaultdict(lambda: f.zero)
            for v, g in enumerate(gamma):
                _add(row, f, q * k + v, g)
            for r in range(n):
                _add(row, f, r * k + s, f.neg(left_factors[r][q]))
                _add(row, f, r * k + u, f.mul(sign, second[r][q]))
            rows.append({key: value for key, value in row.items() if value != 0})
    return rows


def _solve_assignment(
    a: StructureAlgebra,
    sub: Subspace,
    kind: MapKind,
    gens: Sequence[Tuple[Sequence[Scalar], Sequence[Scalar]]],
) -> AssignmentResult:
    n, k, f = a.dim, sub.dim, a.field
    rows = _assignment_rows(a, sub, kind)
    rhs: List[Scalar] = [f.zero] * len(rows)
    for x, y in gens:
        xi = sub.coordinates(a.element(x))
        y = a.element(y)
        assert xi is not None
        for q in range(n):
            rows.append({q * k + s: c for s, c in enumerate(xi) if c != 0})
            rhs.append(y[q])
    system = _system(f, rows, n * k)
    outcome = solve_with_certificate(system, rhs)
    if not outcome.consistent:
        logger.info(f"Inconsistent {kind.value} assignment on a {k}-dim subalgebra")
        return AssignmentResult(sub, kind, None, contradiction=outcome.certificate)
    assert outcome.solution is not None
    phi = Matrix(f, n, k, outcome.solution)
    freedom = null_space(system).dim
    return AssignmentResult(sub, kind, phi, freedom=freedom)


def map_from_assignment(
    a: StructureAlgebra,
    gens: Sequence[Tuple[Sequence[Scalar], Sequence[Scalar]]],
    kind: MapKind = MapKind.DERIVATION,
    span_only: bool = False,
) -> AssignmentResult:
    """Solve for ``phi: <x_i> -> L`` of the given kind with ``phi(x_i) = y_i``.

    ``<x_i>`` is the generated subalgebra, or the plain span when
    ``span_only`` is set (the span must then be a subalgebra already).
    """
    a = a.require_verified()
    for x, y in gens:
        a.check_element(x)
        a.check_element(y)
    sources = [a.element(x) for x, _ in gens]
    if span_only:
        sub = span(a, sources)
        if not is_subalgebra(a, sub):
            raise MathematicalRejection(
                "Span of the assigned elements is not a subalgebra", witness=sub
            )
    else:
        sub = subalgebra_generated(a, sources)
    return _solve_assignment(a, sub, kind, gens)


def derivation_from_assignment(
    a: StructureAlgebra,
    gens: Sequence[Tuple[Sequence[Scalar], Sequence[Scalar]]],
    span_only: bool = False,
) -> AssignmentResult:
    return map_from_assignment(a, gens, MapKind.DERIVATION, span_only)


def antiderivation_from_assignment(
    a: StructureAlgebra,
    gens: Sequence[Tuple[Sequence[Scalar], Sequence[Scalar]]],
    span_only: bool = False,
) -> AssignmentResult:
    return map_from_assignment(a, gens, MapKind.ANTIDERIVATION, span_only)


def check_partial_map(
    a: StructureAlgebra, sub: Subspace, phi: Matrix, kind: MapKind
) -> IdentityCheck:
    """Test the identity of ``phi: sub -> L`` on all pairs of ``sub``'s basis."""
    f = a.field
    images = phi.columns()
    for s, u in itertools.product(range(sub.dim), repeat=2):
        bs, bu = sub.basis[s], sub.basis[u]
        gamma = sub.coordinates(bracket(a, bs, bu))
        if gamma is None:
            return IdentityCheck(False, (s, u))
        lhs = phi.apply(gamma)
        first = bracket(a, images[s], bu)
        if kind is MapKind.DERIVATION:
            rhs = f.add_vectors(first, bracket(a, bs, images[u]))
        else:
            rhs = f.sub_vectors(first, bracket(a, images[u], bs))
        if lhs != rhs:
            return IdentityCheck(False, (s, u))
    return IdentityCheck(True)


def extend_to_algebra(
    a: StructureAlgebra, sub: Subspace, phi: Matrix, kind: MapKind = MapKind.DERIVATION
) -> Optional[LinearMap]:
    """A map of the given kind on all of ``L`` agreeing with ``phi`` on ``sub``."""
    a = a.require_verified()
    n, f = a.dim, a.field
    if (phi.rows, phi.cols) != (n, sub.dim):
        raise UsageError(
            f"Partial map must be {n}x{sub.dim}, got {phi.rows}x{phi.cols}"
        )
    rows = _identity_rows(a, kind)
    rhs: List[Scalar] = [f.zero] * len(rows)
    for s, b in enumerate(sub.basis):
        image = phi.column(s)
        for q in range(n):
            rows.append({q * n + c: x for c, x in enumerate(b) if x != 0})
            rhs.append(image[q])
    solution = solve_with_certificate(_system(f, rows, n * n), rhs).solution
    if solution is None:
        logger.debug(f"No {kind.value} of the whole algebra extends the partial map")
        return None
    return vector_to_map(a, solution)
