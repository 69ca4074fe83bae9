"""
Dense exact linear algebra over a ``Field``.

Matrices are immutable row-major tuples. ``rref`` is plain Gauss-Jordan
elimination; everything else (null spaces, solving, subspace arithmetic)
is built on it. A sparse echelon builder keyed by arbitrary hashable
coordinates backs the truncated quotient engine, where the ambient space is
indexed by words rather than integers.
"""

import logging
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    Generic,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
)

from .errors import UsageError
from .scalars import Field, Scalar, Vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matrix:
    """Dense ``rows x cols`` matrix; maps act on column vectors."""

    field: Field
    rows: int
    cols: int
    entries: Tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise UsageError("Matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise UsageError(
                f"Matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(
        cls, field: Field, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None
    ) -> "Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise UsageError(f"Ragged matrix row of length {len(row)} != {cols}")
        entries = tuple(field(x) for row in rows for x in row)
        return cls(field, len(rows), cols, entries)

    @classmethod
    def from_columns(
        cls, field: Field, columns: Sequence[Sequence[Scalar]], rows: int
    ) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, columns, rows).transpose()

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, tuple(field.zero for _ in range(rows * cols)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(
            field,
            n,
            n,
            tuple(
                field.one if i == j else field.zero
                for i in range(n)
                for j in range(n)
            ),
        )

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def apply(self, v: Sequence[Scalar]) -> Vector:
        if len(v) != self.cols:
            raise UsageError(
                f"Cannot apply {self.rows}x{self.cols} map to length {len(v)}"
            )
        return tuple(self.field.dot(self.row(i), v) for i in range(self.rows))

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise UsageError(
                f"Cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        other_cols = other.columns()
        return Matrix(
            self.field,
            self.rows,
            other.cols,
            tuple(
                self.field.dot(self.row(i), other_cols[j])
                for i in range(self.rows)
                for j in range(other.cols)
            ),
        )

    __matmul__ = matmul

    def _check_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise UsageError(
                f"Shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        entries = self.field.add_vectors(self.entries, other.entries)
        return Matrix(self.field, self.rows, self.cols, entries)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        entries = self.field.sub_vectors(self.entries, other.entries)
        return Matrix(self.field, self.rows, self.cols, entries)

    def scale(self, c: Scalar) -> "Matrix":
        entries = self.field.scale_vector(c, self.entries)
        return Matrix(self.field, self.rows, self.cols, entries)

    def __neg__(self) -> "Matrix":
        return self.scale(self.field.neg(self.field.one))

    def stack(self, other: "Matrix") -> "Matrix":
        """Vertical concatenation."""
        if self.cols != other.cols:
            raise UsageError(f"Cannot stack {self.cols} columns on {other.cols}")
        entries = self.entries + other.entries
        return Matrix(self.field, self.rows + other.rows, self.cols, entries)

    def hconcat(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise UsageError(f"Cannot join {self.rows} rows with {other.rows}")
        rows = [self.row(i) + other.row(i) for i in range(self.rows)]
        entries = tuple(x for r in rows for x in r)
        return Matrix(self.field, self.rows, self.cols + other.cols, entries)

    def to_json(self) -> List[List[str]]:
        return [self.field.format_vector(r) for r in self.to_rows()]


def stack_all(field: Field, cols: int, blocks: Iterable[Matrix]) -> Matrix:
    """Stack any number of matrices with ``cols`` columns."""
    entries: List[Scalar] = []
    rows = 0
    for block in blocks:
        if block.cols != cols:
            raise UsageError(f"Cannot stack {block.cols} columns on {cols}")
        entries.extend(block.entries)
        rows += block.rows
    return Matrix(field, rows, cols, tuple(entries))


def _rref_rows(
    field: Field, rows: List[List[Scalar]], cols: int
) -> Tuple[List[List[Scalar]], List[int]]:
    pivots: List[int] = []
    pivot_row = 0
    n_rows = len(rows)
    for col in range(cols):
        if pivot_row >= n_rows:
            break
        found = None
        for r in range(pivot_row, n_rows):
            if rows[r][col] != 0:
                found = r
                break
        if found is None:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        inv = field.inv(rows[pivot_row][col])
        rows[pivot_row] = [field.mul(inv, x) for x in rows[pivot_row]]
        lead = rows[pivot_row]
        for r in range(n_rows):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [
                    field.sub(x, field.mul(factor, y)) for x, y in zip(rows[r], lead)
                ]
        pivots.append(col)
        pivot_row += 1
    return rows, pivots


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns; rank is the pivot count."""
    rows = [list(r) for r in m.to_rows()]
    reduced, pivots = _rref_rows(m.field, rows, m.cols)
    entries = tuple(x for r in reduced for x in r)
    return Matrix(m.field, m.rows, m.cols, entries), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def null_space(m: Matrix) -> "Subspace":
    """Canonical basis of ``{v : m v = 0}``; dimension ``cols - rank``."""
    field = m.field
    reduced, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vectors = []
    for f in free:
        v = [field.zero] * m.cols
        v[f] = field.one
        for r, p in enumerate(pivots):
            v[p] = field.neg(reduced[r, f])
        vectors.append(tuple(v))
    return Subspace.from_vectors(field, m.cols, vectors)


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of ``solve_with_certificate``.

    Exactly one of ``solution`` and ``certificate`` is set. A certificate is a
    row vector ``y`` with ``y m = 0`` and ``y b != 0``: the combination of
    equations that reads ``0 = nonzero``.
    """

    solution: Optional[Vector]
    certificate: Optional[Vector] = None

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve_with_certificate(m: Matrix, b: Sequence[Scalar]) -> LinearSolution:
    field = m.field
    if len(b) != m.rows:
        raise UsageError(f"Right-hand side has length {len(b)}, expected {m.rows}")
    # Augment with [b | I] so the row operations are recorded.
    rows = []
    for i in range(m.rows):
        tracker = [field.one if k == i else field.zero for k in range(m.rows)]
        rows.append(list(m.row(i)) + [field(b[i])] + tracker)
    reduced, pivots = _rref_rows(field, rows, m.cols)
    for row in reduced:
        if all(x == 0 for x in row[: m.cols]) and row[m.cols] != 0:
            return LinearSolution(None, tuple(row[m.cols + 1 :]))
    solution = [field.zero] * m.cols
    for r, p in enumerate(pivots):
        solution[p] = reduced[r][m.cols]
    return LinearSolution(tuple(solution))


def solve(m: Matrix, b: Sequence[Scalar]) -> Optional[Vector]:
    """One solution of ``m x = b`` or ``None`` when inconsistent."""
    return solve_with_certificate(m, b).solution


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``field^ambient`` with its basis in reduced echelon form.

    The echelon basis is canonical, so two equal subspaces compare equal.
    """

    field: Field
    ambient: int
    basis: Tuple[Vector, ...]

    @classmethod
    def from_vectors(
        cls, field: Field, ambient: int, vectors: Iterable[Sequence[Scalar]]
    ) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise UsageError(
                    f"Vector of length {len(v)} in ambient dimension {ambient}"
                )
            rows.append([field(x) for x in v])
        if not rows:
            return cls(field, ambient, ())
        reduced, pivots = _rref_rows(field, rows, ambient)
        return cls(field, ambient, tuple(tuple(reduced[r]) for r in range(len(pivots))))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        units = tuple(field.unit_vector(ambient, i) for i in range(ambient))
        return cls(field, ambient, units)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(v) if x != 0) for v in self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient != other.ambient or self.field != other.field:
            raise UsageError(
                f"Subspaces live in different spaces: {self.field}^{self.ambient} "
                f"vs {other.field}^{other.ambient}"
            )

    def coordinates(self, v: Sequence[Scalar]) -> Optional[Vector]:
        """Coordinates of ``v`` in the echelon basis, or ``None`` if outside."""
        if len(v) != self.ambient:
            raise UsageError(
                f"Vector of length {len(v)} in ambient dimension {self.ambient}"
            )
        coords = tuple(v[p] for p in self.pivots)
        rebuilt = self.combine(coords)
        if tuple(rebuilt) != tuple(v):
            return None
        return coords

    def combine(self, coords: Sequence[Scalar]) -> Vector:
        """Linear combination of the basis with the given coefficients."""
        total = self.field.zero_vector(self.ambient)
        for c, b in zip(coords, self.basis):
            if c != 0:
                total = self.field.axpy(c, b, total)
        return total

    def contains(self, v: Sequence[Scalar]) -> bool:
        return self.coordinates(v) is not None

    __contains__ = contains

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(other.contains(b) for b in self.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(self.field, self.ambient, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        if self.is_zero or other.is_zero:
            return Subspace.zero(self.field, self.ambient)
        # Solve sum a_i u_i - sum b_j w_j = 0 and keep sum a_i u_i.
        field = self.field
        negated = [tuple(field.neg(x) for x in w) for w in other.basis]
        columns = list(self.basis) + negated
        system = Matrix.from_columns(field, columns, self.ambient)
        kernel = null_space(system)
        vectors = [self.combine(k[: self.dim]) for k in kernel.basis]
        return Subspace.from_vectors(field, self.ambient, vectors)

    def quotient_map(self) -> Matrix:
        """``(ambient - dim) x ambient`` matrix whose kernel is exactly this subspace.

        Rows are indexed by the non-pivot coordinates: ``v`` is sent to the
        non-pivot part of ``v - sum v[p_j] b_j``.
        """
        field = self.field
        pivots = self.pivots
        pivot_index = {p: j for j, p in enumerate(pivots)}
        rows = []
        for c in range(self.ambient):
            if c in pivot_index:
                continue
            row = []
            for k in range(self.ambient):
                value = field.one if c == k else field.zero
                if k in pivot_index:
                    value = field.sub(value, self.basis[pivot_index[k]][c])
                row.append(value)
            rows.append(row)
        return Matrix.from_rows(field, rows, self.ambient)

    def to_json(self) -> List[List[str]]:
        return [self.field.format_vector(b) for b in self.basis]


K = TypeVar("K", bound=Hashable)


class EchelonBasis(Generic[K]):
    """Incremental sparse row echelon basis over coordinates of type ``K``.

    Each stored row has its pivot as the first nonzero coordinate under
    ``order`` and is normalized to pivot coefficient one. Rows are never
    back-substituted, so a row's pivot is also its leading term.
    """

    def __init__(self, field: Field, order: Callable[[K], object]):
        self.field = field
        self._order = order
        self._rows: Dict[K, Dict[K, Scalar]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def rows(self) -> List[Tuple[K, Dict[K, Scalar]]]:
        return sorted(self._rows.items(), key=lambda item: self._order(item[0]))

    def leading(self, vector: Mapping[K, Scalar]) -> Optional[K]:
        return min(vector, key=self._order) if vector else None

    def reduce(self, vector: Mapping[K, Scalar]) -> Dict[K, Scalar]:
        """Remainder of ``vector`` after eliminating every stored pivot."""
        field = self.field
        remainder = {k: c for k, c in vector.items() if c != 0}
        while True:
            hits = [k for k in remainder if k in self._rows]
            if not hits:
                return remainder
            # Eliminating a pivot only introduces coordinates after it.
            key = min(hits, key=self._order)
            coeff = remainder[key]
            for k, c in self._rows[key].items():
                value = field.sub(remainder.get(k, field.zero), field.mul(coeff, c))
                if value == 0:
                    remainder.pop(k, None)
                else:
                    remainder[k] = value

    def insert(self, vector: Mapping[K, Scalar]) -> Optional[Dict[K, Scalar]]:
        """Add ``vector`` to the span; returns the new normalized row or ``None``."""
        remainder = self.reduce(vector)
        if not remainder:
            return None
        pivot = self.leading(remainder)
        inv = self.field.inv(remainder[pivot])
        row = {k: self.field.mul(inv, c) for k, c in remainder.items()}
        self._rows[pivot] = row
        return row

    def contains(self, vector: Mapping[K, Scalar]) -> bool:
        return not self.reduce(vector)

    def pivots(self) -> List[K]:
        return sorted(self._rows, key=self._order)


def find_dependency(
    field: Field, vectors: Sequence[Mapping[K, Scalar]], order: Callable[[K], object]
) -> Optional[Vector]:
    """Coefficients ``c`` (not all zero) with ``sum c_i v_i = 0``, or ``None``."""
    basis: EchelonBasis = EchelonBasis(field, order)
    # Track each row's combination of the inputs alongside it.
    combos: Dict[object, Dict[int, Scalar]] = {}
    for i, v in enumerate(vectors):
        remainder = {k: c for k, c in v.items() if c != 0}
        combo: Dict[int, Scalar] = {i: field.one}
        while remainder:
            lead = basis.leading(remainder)
            if lead not in combos:
                break
            coeff = remainder[lead]
            row = basis._rows[lead]
            for k, c in row.items():
                value = field.sub(remainder.get(k, field.zero), field.mul(coeff, c))
                if value == 0:
                    remainder.pop(k, None)
                else:
                    remainder[k] = value
            for j, c in combos[lead].items():
                value = field.sub(combo.get(j, field.zero), field.mul(coeff, c))
                if value == 0:
                    combo.pop(j, None)
                else:
                    combo[j] = value
        if not remainder:
            return tuple(combo.get(j, field.zero) for j in range(len(vectors)))
        lead = basis.leading(remainder)
        inv = field.inv(remainder[lead])
        basis._rows[lead] = {k: field.mul(inv, c) for k, c in remainder.items()}
        combos[lead] = {j: field.mul(inv, c) for j, c in combo.items()}
    return None
