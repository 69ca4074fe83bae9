"""
Presentations, HNN-extensions and degree-truncated quotients.

``build_truncated_quotient`` computes ``J_N``: the smallest subspace of the
degree-``<= N`` part of the free Leibniz algebra that contains the relators
and is closed under bracketing (on either side) with monomials, as long as
the result stays within degree ``N``. ``J_N`` is contained in the true
relator ideal, so a linear dependency among generators modulo ``J_N``
is a genuine collapse, while independence is only evidence up to ``N``.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .config import GENERATOR_PREFIX, MIN_DEGREE, STABLE_LETTER_NAME
from .derivations import Biderivation, MapKind, biderivation_space, check_partial_map
from .errors import MathematicalRejection, UsageError
from .fdalg import (
    ExtensionResult,
    LeibnizReport,
    StructureAlgebra,
    is_subalgebra,
    one_dim_extension,
)
from .free_leibniz import FreeElement, Word, basis_up_to, free_bracket
from .linalg import EchelonBasis, Matrix, Subspace, find_dependency, rank, solve
from .scalars import Field, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Presentation:
    """Generators ``x1..xk`` (optionally renamed) and nonzero relators."""

    field: Field
    generators: int
    relators: Tuple[FreeElement, ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.names and len(self.names) != self.generators:
            raise UsageError(
                f"{len(self.names)} names for {self.generators} generators"
            )
        for r in self.relators:
            if r.is_zero():
                raise UsageError("Relators must be nonzero")
            if r.field != self.field:
                raise UsageError(
                f"Relator over {r.field} in a presentation over {self.field}"
            )
            used = r.generators_used()
            if used and used[-1] >= self.generators:
                raise UsageError(
                    f"Relator uses generator {used[-1] + 1} of {self.generators}"
                )

    @property
    def generator_names(self) -> Tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(f"{GENERATOR_PREFIX}{i + 1}" for i in range(self.generators))

    def max_relator_degree(self) -> int:
        return max((r.degree() for r in self.relators), default=0)

    def format_relators(self) -> List[str]:
        return [r.format_with(self.generator_names) for r in self.relators]


class HnnKind(Enum):
    DERIVATION = "derivation"
    ANTIDERIVATION = "anti-derivation"

    @property
    def map_kind(self) -> MapKind:
        return MapKind(self.value)

    @classmethod
    def parse(cls, text: str) -> "HnnKind":
        return cls(MapKind.parse(text).value)


@dataclass(frozen=True)
class HnnExtension:
    """``<L, t | d(a) = [a, t]>`` or ``<L, t | d'(a) = [t, a]>`` for ``a`` in ``A``."""

    base: StructureAlgebra
    presentation: Presentation
    stable_letter: int
    kind: HnnKind
    subalgebra: Subspace
    map: Matrix


class EmbeddingStatus(Enum):
    NO_COLLAPSE = "no-collapse"
    COLLAPSE = "collapse-with-witness"


@dataclass(frozen=True)
class EmbeddingVerdict:
    status: EmbeddingStatus
    degree: int
    quotient_dims_per_degree: Tuple[int, ...]
    witness: Optional[FreeElement] = None
    witness_text: Optional[str] = None

    @property
    def collapsed(self) -> bool:
        return self.status is EmbeddingStatus.COLLAPSE

    @property
    def label(self) -> str:
        """``no-collapse-up-to-<N>`` or ``collapse-with-witness``."""
        if self.collapsed:
            return self.status.value
        return f"{self.status.value}-up-to-{self.degree}"

    @property
    def message(self) -> str:
        if self.collapsed:
            return (
                f"collapse: {self.witness_text} lies in the truncated relator ideal "
                f"J_{self.degree}; J_N is contained in the true ideal, "
                "so the base algebra does not embed"
            )
        return (
            f"no collapse up to degree {self.degree}: a passed falsification test, "
            "not a proof (J_N only underapproximates the relator ideal)"
        )


@dataclass(frozen=True)
class ExactModel:
    """A finite-dimensional algebra realizing the extension, with ``L`` embedded."""

    algebra: Optional[StructureAlgebra]
    embedding: Optional[Matrix]
    report: Optional[LeibnizReport] = None
    reason: str = ""

    @property
    def exists(self) -> bool:
        return self.algebra is not None


def structure_relator(a: StructureAlgebra, i: int, j: int) -> FreeElement:
    """``[x_i, x_j] - sum_k c_ij^k x_k``."""
    f = a.field
    terms: List[Tuple[Word, Scalar]] = [((i, j), f.one)]
    terms += [((k,), f.neg(c)) for k, c in enumerate(a.constants[i][j]) if c != 0]
    return FreeElement.from_terms(f, terms)


def present(a: StructureAlgebra) -> Presentation:
    """Structure-constant presentation on generators ``x1..xn``."""
    a = a.require_verified()
    relators = tuple(
        structure_relator(a, i, j) for i in range(a.dim) for j in range(a.dim)
    )
    return Presentation(a.field, a.dim, relators)


def _element_as_free(field: Field, v: Sequence[Scalar]) -> FreeElement:
    return FreeElement.from_terms(field, [((k,), c) for k, c in enumerate(v) if c != 0])


def hnn_extend(
    a: StructureAlgebra, sub: Subspace, d: Matrix, kind: HnnKind
) -> HnnExtension:
    """Presentation of the HNN-extension of ``a`` along ``d: sub -> a``.

    ``d`` is ``n x k`` in the echelon basis of ``sub``: column ``s`` is the
    image of the ``s``-th basis vector.
    """
    a = a.require_verified()
    if sub.ambient != a.dim or sub.field != a.field:
        raise UsageError(
            f"Subalgebra lives in {sub.field}^{sub.ambient}, "
            f"algebra is {a.field}^{a.dim}"
        )
    if (d.rows, d.cols) != (a.dim, sub.dim):
        raise UsageError(f"Map must be {a.dim}x{sub.dim}, got {d.rows}x{d.cols}")
    if not is_subalgebra(a, sub):
        raise MathematicalRejection("A is not a subalgebra", witness=sub)
    check = check_partial_map(a, sub, d, kind.map_kind)
    if not check:
        raise MathematicalRejection(
            f"Map is not {'an anti-' if kind is HnnKind.ANTIDERIVATION else 'a '}"
            f"derivation on A: fails at basis pair {check.witness}",
            witness=check.witness,
        )
    f = a.field
    base = present(a)
    t = a.dim
    letter = FreeElement.generator(f, t)
    extra = []
    for s, b in enumerate(sub.basis):
        element = _element_as_free(f, b)
        image = _element_as_free(f, d.column(s))
        if kind is HnnKind.DERIVATION:
            relator = free_bracket(element, letter, None) - image
        else:
            relator = free_bracket(letter, element, None) - image
        extra.append(relator)
    names = base.generator_names + (STABLE_LETTER_NAME,)
    presentation = Presentation(f, a.dim + 1, base.relators + tuple(extra), names)
    logger.debug(
        f"HNN-extension of {a.name or 'L'} along a {sub.dim}-dim subalgebra: "
        f"{len(extra)} new relators"
    )
    return HnnExtension(a, presentation, t, kind, sub, d)


def _word_rank(word: Word) -> Tuple[int, Word]:
    # Highest degree first, so a row's pivot carries its largest degree.
    return (-len(word), word)


class TruncatedQuotient:
    """Saturated ``J_N`` for a presentation and the quotient data derived from it."""

    def __init__(self, presentation: Presentation, degree: int):
        self.presentation = presentation
        self.degree = degree
        self.field = presentation.field
        self.ideal: EchelonBasis[Word] = EchelonBasis(self.field, _word_rank)
        self._monomials: Dict[int, List[FreeElement]] = {}

    def _monomials_up_to(self, degree: int) -> List[FreeElement]:
        if degree not in self._monomials:
            self._monomials[degree] = [
                FreeElement.monomial(self.field, w)
                for w in basis_up_to(self.presentation.generators, degree)
            ] if degree >= 1 else []
        return self._monomials[degree]

    def _products(self, row: FreeElement) -> List[FreeElement]:
        room = self.degree - row.degree()
        products = []
        for m in self._monomials_up_to(room):
            products.append(free_bracket(row, m, None))
            products.append(free_bracket(m, row, None))
        return products

    def saturate(self) -> None:
        pending = list(self.presentation.relators)
        rounds = 0
        while pending:
            rounds += 1
            added = []
            for element in pending:
                row = self.ideal.insert(element.to_dict())
                if row is not None:
                    added.append(FreeElement.from_terms(self.field, row))
            pending = [p for r in added for p in self._products(r) if p]
            logger.debug(
                f"saturation round {rounds}: {len(added)} new rows, "
                f"ideal dim {len(self.ideal)}"
            )

    def is_saturated(self) -> bool:
        """Every eligible bracket of every stored row already lies in ``J_N``."""
        for _, row in self.ideal.rows():
            element = FreeElement.from_terms(self.field, row)
            products = self._products(element)
            if any(not self.ideal.contains(p.to_dict()) for p in products):
                return False
        return True

    def reduce(self, e: FreeElement) -> FreeElement:
        """Normal form of ``e`` modulo ``J_N``; ``e`` must have degree at most ``N``."""
        if e.degree() > self.degree:
            raise UsageError(
                f"Element of degree {e.degree()} beyond the truncation degree "
                f"{self.degree}"
            )
        return FreeElement.from_terms(self.field, self.ideal.reduce(e.to_dict()))

    def contains(self, e: FreeElement) -> bool:
        return self.reduce(e).is_zero()

    def ideal_dims_per_degree(self) -> Tuple[int, ...]:
        counts = [0] * self.degree
        for pivot in self.ideal.pivots():
            counts[len(pivot) - 1] += 1
        return tuple(counts)

    def quotient_dims_per_degree(self) -> Tuple[int, ...]:
        k = self.presentation.generators
        ideal_dims = self.ideal_dims_per_degree()
        return tuple(k**d - j for d, j in zip(range(1, self.degree + 1), ideal_dims))

    def quotient_dim(self) -> int:
        return sum(self.quotient_dims_per_degree())


def build_truncated_quotient(p: Presentation, degree: int) -> TruncatedQuotient:
    if degree < MIN_DEGREE:
        raise UsageError(f"Degree bound must be at least {MIN_DEGREE}, got {degree}")
    if p.max_relator_degree() > degree:
        raise UsageError(
            f"Degree bound {degree} is below the relator degree "
            f"{p.max_relator_degree()}"
        )
    quotient = TruncatedQuotient(p, degree)
    quotient.saturate()
    logger.info(
        f"J_{degree} has dim {len(quotient.ideal)}; "
        f"quotient dims {quotient.quotient_dims_per_degree()}"
    )
    return quotient


def check_embedding_of(
    p: Presentation, base_generators: int, degree: int
) -> EmbeddingVerdict:
    """Are ``x1..x_base`` linearly independent modulo ``J_N`` of ``p``?"""
    quotient = build_truncated_quotient(p, degree)
    f = p.field
    images = [
        quotient.reduce(FreeElement.generator(f, i)) for i in range(base_generators)
    ]
    dependency = find_dependency(f, [img.to_dict() for img in images], _word_rank)
    dims = quotient.quotient_dims_per_degree()
    if dependency is None:
        return EmbeddingVerdict(EmbeddingStatus.NO_COLLAPSE, degree, dims)
    witness = FreeElement.from_terms(f, [((i,), c) for i, c in enumerate(dependency)])
    text = witness.format_with(p.generator_names)
    logger.warning(f"Collapse at degree {degree}: {text} lies in J_{degree}")
    return EmbeddingVerdict(EmbeddingStatus.COLLAPSE, degree, dims, witness, text)


def embedding_check(h: HnnExtension, degree: int) -> EmbeddingVerdict:
    """Falsification test: does the base algebra survive in the truncated quotient?"""
    return check_embedding_of(h.presentation, h.base.dim, degree)


def _biderivation_partner(
    a: StructureAlgebra, fixed: Matrix, kind: HnnKind
) -> Optional[Tuple[Matrix, Matrix]]:
    """A pair ``(d, D)`` in Bider(L) whose derivation (or anti) half is ``fixed``."""
    space = biderivation_space(a)
    if not space.basis:
        return None
    f = a.field
    n2 = a.dim**2
    part = slice(0, n2) if kind is HnnKind.DERIVATION else slice(n2, 2 * n2)
    halves = Matrix.from_columns(f, [v[part] for v in space.basis], n2)
    coeffs = solve(halves, fixed.entries)
    if coeffs is None:
        return None
    pair = Biderivation.from_vector(a, space.combine(coeffs))
    return pair.d, pair.D


def one_dim_model(a: StructureAlgebra, full: Matrix, kind: HnnKind) -> ExtensionResult:
    """Adjoin ``t`` realizing ``full: L -> L`` as ``[a, t]`` or ``[t, a]`` (anti).

    The other side of the bracket with ``t`` is free. It is tried as zero,
    then as the same map, then as any partner completing a biderivation.
    """
    zero = Matrix.zeros(a.field, a.dim, a.dim)
    if kind is HnnKind.DERIVATION:
        candidates = [(full, zero), (full, full)]
    else:
        candidates = [(zero, -full), (-full, -full)]
    fixed = full if kind is HnnKind.DERIVATION else -full
    partner = _biderivation_partner(a, fixed, kind)
    if partner is not None:
        candidates.append(partner)
    result = None
    for d, dm in candidates:
        result = one_dim_extension(a, d, dm)
        if result.accepted:
            return result
    assert result is not None
    return result


def exact_model_check(h: HnnExtension) -> ExactModel:
    """Finite-dimensional model for ``A = L`` via a one-dimensional extension."""
    a = h.base
    f = a.field
    if h.subalgebra.is_zero:
        return ExactModel(
            None,
            None,
            reason="A = 0: the free product with <t> is infinite-dimensional",
        )
    if not h.subalgebra.is_full:
        return ExactModel(
            None, None, reason="no finite model is built for a proper subalgebra A"
        )
    # Express the map in the standard basis of L.
    columns = [h.subalgebra.coordinates(e) for e in a.basis()]
    coordinates = Matrix.from_columns(
        f, columns, h.subalgebra.dim  # type: ignore[arg-type]
    )
    result = one_dim_model(a, h.map @ coordinates, h.kind)
    if not result.accepted:
        return ExactModel(
            None,
            None,
            result.report,
            reason="one-dimensional extension fails the Leibniz identity",
        )
    embedding = Matrix.identity(f, a.dim).stack(Matrix.zeros(f, 1, a.dim))
    if rank(embedding) != a.dim:
        raise UsageError("Embedding matrix lost rank")
    return ExactModel(result.algebra, embedding, result.report)
