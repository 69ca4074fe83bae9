"""
Free dialgebras as center-marked words.

A monomial ``(w, c)`` is a word with a distinguished letter at position
``c``. The two products concatenate words:

* ``u -| v`` keeps the center of ``u``;
* ``u |- v`` moves the center to ``len(u) + center(v)``.

With these rules both products are associative and the three mixed laws
hold, which ``axioms_check`` confirms on samples. The bracket
``[u, v] = u -| v - v |- u`` turns the free dialgebra into a Leibniz algebra.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .combinations import LinearCombination
from .config import GENERATOR_PREFIX
from .errors import UsageError
from .free_leibniz import FreeElement, Word, graded_basis
from .linalg import Matrix, rank
from .scalars import Field, Scalar

logger = logging.getLogger(__name__)

DialgMonomial = Tuple[Word, int]
Product = Callable[["DialgElement", "DialgElement"], "DialgElement"]


def format_monomial(key: DialgMonomial) -> str:
    word, center = key
    letters = " ".join(f"{GENERATOR_PREFIX}{i + 1}" for i in word)
    return f"({letters}, c={center})"


def monomial_order(key: DialgMonomial) -> Tuple[int, Word, int]:
    word, center = key
    return (len(word), word, center)


class DialgElement(LinearCombination[DialgMonomial]):
    """Element of the free dialgebra."""

    key_order = staticmethod(monomial_order)
    format_key = staticmethod(format_monomial)

    @classmethod
    def letter(cls, field: Field, i: int) -> "DialgElement":
        if i < 0:
            raise UsageError(f"Generator index must be non-negative, got {i}")
        return cls(field, ((((i,), 0), field.one),))

    @classmethod
    def monomial(
        cls, field: Field, word: Sequence[int], center: int, coeff: Scalar = 1
    ) -> "DialgElement":
        if not word:
            raise UsageError("A monomial needs at least one letter")
        if not 0 <= center < len(word):
            raise UsageError(f"Center {center} outside a word of length {len(word)}")
        return cls.from_terms(field, [((tuple(word), center), coeff)])

    def degree(self) -> int:
        return max((len(w) for (w, _), _ in self.terms), default=0)


def _product(
    u: DialgElement,
    v: DialgElement,
    center: Callable[[DialgMonomial, DialgMonomial], int],
) -> DialgElement:
    u._check(v)
    f = u.field
    acc: Dict[DialgMonomial, Scalar] = {}
    for ku, cu in u.terms:
        for kv, cv in v.terms:
            key = (ku[0] + kv[0], center(ku, kv))
            acc[key] = f.add(acc.get(key, f.zero), f.mul(cu, cv))
    return DialgElement.from_terms(f, acc)


def dprod_left(u: DialgElement, v: DialgElement) -> DialgElement:
    """``u -| v``: concatenate and keep the center of ``u``."""
    return _product(u, v, lambda ku, kv: ku[1])


def dprod_right(u: DialgElement, v: DialgElement) -> DialgElement:
    """``u |- v``: concatenate; the center moves into ``v``."""
    return _product(u, v, lambda ku, kv: len(ku[0]) + kv[1])


def dialg_bracket(
    u: DialgElement,
    v: DialgElement,
    left: Product = dprod_left,
    right: Product = dprod_right,
) -> DialgElement:
    """``[u, v] = u -| v - v |- u``."""
    return left(u, v) - right(v, u)


# Axioms

AXIOMS: Tuple[str, ...] = (
    "(x -| y) -| z = x -| (y -| z)",
    "(x |- y) |- z = x |- (y |- z)",
    "(x -| y) -| z = x -| (y |- z)",
    "(x |- y) -| z = x |- (y -| z)",
    "(x -| y) |- z = x |- (y |- z)",
)


def _axiom_sides(
    x: DialgElement, y: DialgElement, z: DialgElement, left: Product, right: Product
) -> List[Tuple[DialgElement, DialgElement]]:
    return [
        (left(left(x, y), z), left(x, left(y, z))),
        (right(right(x, y), z), right(x, right(y, z))),
        (left(left(x, y), z), left(x, right(y, z))),
        (left(right(x, y), z), right(x, left(y, z))),
        (right(left(x, y), z), right(x, right(y, z))),
    ]


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    triple: Tuple[DialgElement, DialgElement, DialgElement]
    lhs: DialgElement
    rhs: DialgElement

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "triple": [e.format() for e in self.triple],
            "lhs": self.lhs.format(),
            "rhs": self.rhs.format(),
        }


@dataclass(frozen=True)
class AxiomsReport:
    holds: bool
    checked: int
    failures: Tuple[AxiomFailure, ...] = ()

    def failed_axioms(self) -> List[str]:
        return sorted({f.axiom for f in self.failures})


def axioms_check(
    samples: Iterable[Tuple[DialgElement, DialgElement, DialgElement]],
    left: Product = dprod_left,
    right: Product = dprod_right,
    max_failures: Optional[int] = 10,
) -> AxiomsReport:
    """Evaluate the five dialgebra laws on every sample triple.

    The products are injectable so a deliberately broken product can serve as
    a negative control.
    """
    failures: List[AxiomFailure] = []
    checked = 0
    for x, y, z in samples:
        checked += 1
        for name, (lhs, rhs) in zip(AXIOMS, _axiom_sides(x, y, z, left, right)):
            if lhs != rhs:
                failures.append(AxiomFailure(name, (x, y, z), lhs, rhs))
        if max_failures is not None and len(failures) >= max_failures:
            break
    if failures:
        logger.info(
            f"Dialgebra axioms failed {len(failures)} times on {checked} triples"
        )
    return AxiomsReport(not failures, checked, tuple(failures))


def monomials_up_to(field: Field, generators: int, length: int) -> List[DialgElement]:
    """Every monomial of length at most ``length`` with every center placement."""
    result = []
    for d in range(1, length + 1):
        for word in graded_basis(generators, d):
            for center in range(d):
                result.append(DialgElement.monomial(field, word, center))
    return result


def exhaustive_triples(
    field: Field, generators: int, length: int
) -> Iterable[Tuple[DialgElement, DialgElement, DialgElement]]:
    monomials = monomials_up_to(field, generators, length)
    return itertools.product(monomials, repeat=3)


# Leibniz to dialgebra


def _word_image(
    word: Word, field: Field, memo: Dict[Word, DialgElement]
) -> DialgElement:
    if word not in memo:
        if len(word) == 1:
            memo[word] = DialgElement.letter(field, word[0])
        else:
            head = _word_image(word[:-1], field, memo)
            memo[word] = dialg_bracket(head, DialgElement.letter(field, word[-1]))
    return memo[word]


def leibniz_to_dialgebra(e: FreeElement) -> DialgElement:
    """Expand every left-normed bracket through ``[u, v] = u -| v - v |- u``."""
    f = e.field
    memo: Dict[Word, DialgElement] = {}
    result = DialgElement.zero(f)
    for word, coeff in e.terms:
        result = result + _word_image(word, f, memo).scale(coeff)
    return result


def transfer_presentation(relators: Sequence[FreeElement]) -> List[DialgElement]:
    """Rewrite Leibniz relators as dialgebra relators."""
    return [leibniz_to_dialgebra(s) for s in relators]


@dataclass(frozen=True)
class ShadowRank:
    generators: int
    degree: int
    rank: int
    words: int

    @property
    def injective(self) -> bool:
        return self.rank == self.words


def pbw_shadow_rank(field: Field, generators: int, degree: int) -> ShadowRank:
    """Rank of Leibniz words of one degree after expansion into the dialgebra."""
    words = graded_basis(generators, degree)
    memo: Dict[Word, DialgElement] = {}
    images = [_word_image(w, field, memo) for w in words]
    keys = sorted({k for img in images for k in img.keys()}, key=monomial_order)
    index = {k: r for r, k in enumerate(keys)}
    columns = []
    for img in images:
        column = [field.zero] * len(keys)
        for k, c in img.terms:
            column[index[k]] = c
        columns.append(column)
    r = rank(Matrix.from_columns(field, columns, len(keys)))
    logger.debug(
        f"Dialgebra shadow in degree {degree} over {generators} generators: "
        f"rank {r}/{len(words)}"
    )
    return ShadowRank(generators, degree, r, len(words))
