"""
The free right Leibniz algebra on generators ``x1 .. xk``.

Normal form: every element is a combination of left-normed words
``(x_i1 x_i2 ... x_ik)`` standing for ``[[...[x_i1, x_i2], ...], x_ik]``.
Brackets with a longer right argument are unfolded with the rearranged
identity ``[u, [v, w]] = [[u, v], w] - [[u, w], v]``.

Generators are 0-based internally and displayed 1-based.
"""

import itertools
import logging
import random
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .combinations import LinearCombination
from .config import FREE_DEGREE_CAP, GENERATOR_PREFIX
from .errors import UsageError
from .fdalg import Element, StructureAlgebra, bracket
from .scalars import Field, Scalar

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Monomial = Word


def format_word(word: Word, names: Optional[Sequence[str]] = None) -> str:
    letters = [names[i] if names else f"{GENERATOR_PREFIX}{i + 1}" for i in word]
    return "(" + " ".join(letters) + ")"


def word_order(word: Word) -> Tuple[int, Word]:
    """Canonical order: by degree, then lexicographically."""
    return (len(word), word)


class FreeElement(LinearCombination[Word]):
    """Element of the free Leibniz algebra in left-normed normal form."""

    key_order = staticmethod(word_order)
    format_key = staticmethod(format_word)

    @classmethod
    def generator(cls, field: Field, i: int) -> "FreeElement":
        if i < 0:
            raise UsageError(f"Generator index must be non-negative, got {i}")
        return cls(field, (((i,), field.one),))

    @classmethod
    def monomial(
        cls, field: Field, word: Sequence[int], coeff: Scalar = 1
    ) -> "FreeElement":
        if not word:
            raise UsageError("A monomial needs at least one letter")
        return cls.from_terms(field, [(tuple(word), coeff)])

    def degree(self) -> int:
        """Largest word length; ``0`` for the zero element."""
        return max((len(w) for w, _ in self.terms), default=0)

    def min_degree(self) -> int:
        return min((len(w) for w, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w, _ in self.terms}) <= 1

    def generators_used(self) -> Tuple[int, ...]:
        return tuple(sorted({i for w, _ in self.terms for i in w}))

    def homogeneous_components(self) -> Dict[int, "FreeElement"]:
        parts: Dict[int, List[Tuple[Word, Scalar]]] = {}
        for w, c in self.terms:
            parts.setdefault(len(w), []).append((w, c))
        return {
            d: FreeElement.from_terms(self.field, t) for d, t in sorted(parts.items())
        }

    def format_with(self, names: Sequence[str]) -> str:
        """Render with custom generator names (e.g. the stable letter ``t``)."""
        return self.format(lambda word: format_word(word, names))


@lru_cache(maxsize=None)
def monomial_bracket(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    """Integer expansion of ``[u, v]`` for left-normed words ``u`` and ``v``."""
    if len(v) == 1:
        return ((u + v, 1),)
    head, last = v[:-1], v[-1:]
    acc: Dict[Word, int] = {}
    # [u, [head, last]] = [[u, head], last] - [[u, last], head]
    for w, c in monomial_bracket(u, head):
        acc[w + last] = acc.get(w + last, 0) + c
    for w, c in monomial_bracket(u + last, head):
        acc[w] = acc.get(w, 0) - c
    return tuple(sorted(((w, c) for w, c in acc.items() if c != 0), key=lambda t: t[0]))


def free_bracket(
    u: FreeElement, v: FreeElement, degree_cap: Optional[int] = FREE_DEGREE_CAP
) -> FreeElement:
    """Bilinear bracket in normal form; degrees add.

    Raises ``UsageError`` when a product would exceed ``degree_cap``.
    """
    u._check(v)
    if degree_cap is not None and u.degree() + v.degree() > degree_cap:
        raise UsageError(
            f"Bracket of degrees {u.degree()} and {v.degree()} "
            f"exceeds the degree cap {degree_cap}"
        )
    f = u.field
    acc: Dict[Word, Scalar] = {}
    for wu, cu in u.terms:
        for wv, cv in v.terms:
            coeff = f.mul(cu, cv)
            for w, c in monomial_bracket(wu, wv):
                acc[w] = f.add(acc.get(w, f.zero), f.mul(coeff, f(c)))
    return FreeElement.from_terms(f, acc)


def left_normed(field: Field, word: Sequence[int]) -> FreeElement:
    return FreeElement.monomial(field, word)


def evaluate(
    phi: FreeElement,
    target: StructureAlgebra,
    assignment: Union[Mapping[int, Sequence[Scalar]], Sequence[Sequence[Scalar]]],
) -> Element:
    """Image of ``phi`` under the homomorphism extending ``x_i -> assignment[i]``."""
    if phi.field != target.field:
        raise UsageError(
            f"Element over {phi.field} cannot be evaluated "
            f"in an algebra over {target.field}"
        )
    images: Dict[int, Element] = {}
    if isinstance(assignment, Mapping):
        lookup = assignment
    else:
        lookup = dict(enumerate(assignment))
    for i in phi.generators_used():
        if i not in lookup:
            raise UsageError(
                f"No value assigned to generator {GENERATOR_PREFIX}{i + 1}"
            )
        images[i] = target.element(lookup[i])
    f = target.field
    result = target.zero()
    prefixes: Dict[Word, Element] = {}
    for word, coeff in phi.terms:
        value = _evaluate_word(word, target, images, prefixes)
        result = f.axpy(coeff, value, result)
    return result


def _evaluate_word(
    word: Word,
    target: StructureAlgebra,
    images: Mapping[int, Element],
    memo: Dict[Word, Element],
) -> Element:
    if word in memo:
        return memo[word]
    if len(word) == 1:
        value = images[word[0]]
    else:
        head = _evaluate_word(word[:-1], target, images, memo)
        value = bracket(target, head, images[word[-1]])
    memo[word] = value
    return value


def graded_basis(generators: int, degree: int) -> List[Monomial]:
    """All ``generators**degree`` words of the given length, lexicographically."""
    if degree < 1:
        raise UsageError(f"Degree must be at least 1, got {degree}")
    if generators < 1:
        raise UsageError(f"Need at least one generator, got {generators}")
    return [tuple(w) for w in itertools.product(range(generators), repeat=degree)]


def basis_up_to(generators: int, degree: int) -> List[Monomial]:
    return [w for d in range(1, degree + 1) for w in graded_basis(generators, d)]


def truncate(e: FreeElement, degree: int) -> FreeElement:
    """Drop every monomial of degree above ``degree``."""
    if degree < 1:
        raise UsageError(f"Degree must be at least 1, got {degree}")
    return FreeElement(e.field, tuple((w, c) for w, c in e.terms if len(w) <= degree))


def random_element(
    field: Field,
    rng: random.Random,
    generators: int,
    max_degree: int,
    terms: int = 3,
    bound: int = 2,
) -> FreeElement:
    """Small random combination for property sampling."""
    picked = []
    for _ in range(terms):
        length = rng.randint(1, max_degree)
        word = tuple(rng.randrange(generators) for _ in range(length))
        picked.append((word, field.random_element(rng, bound)))
    return FreeElement.from_terms(field, picked)
