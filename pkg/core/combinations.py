"""
Finite linear combinations of basis keys with exact coefficients.

Shared by free Leibniz elements (keys are words) and free dialgebra elements
(keys are center-marked words). Terms are stored as a tuple sorted by the
subclass's key order with zero coefficients removed, so equality of
combinations is equality of the stored tuples.
"""

from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    Generic,
    Hashable,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    Tuple,
    TypeVar,
    Union,
)

from .errors import UsageError
from .scalars import Field, Scalar

K = TypeVar("K", bound=Hashable)
C = TypeVar("C", bound="LinearCombination")


@dataclass(frozen=True)
class LinearCombination(Generic[K]):
    field: Field
    terms: Tuple[Tuple[K, Scalar], ...] = ()

    @staticmethod
    def key_order(key: K) -> object:
        return key

    @staticmethod
    def format_key(key: K) -> str:
        return str(key)

    @classmethod
    def from_terms(
        cls: "type[C]",
        field: Field,
        terms: Union[Mapping[K, Scalar], Iterable[Tuple[K, Scalar]]],
    ) -> C:
        """Collect like terms, coerce coefficients and drop zeros."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: Dict[K, Scalar] = {}
        for key, coeff in items:
            collected[key] = field.add(collected.get(key, field.zero), field(coeff))
        kept = [(k, c) for k, c in collected.items() if c != 0]
        kept.sort(key=lambda item: cls.key_order(item[0]))
        return cls(field, tuple(kept))

    @classmethod
    def zero(cls: "type[C]", field: Field) -> C:
        return cls(field, ())

    def _check(self, other: "LinearCombination") -> None:
        if type(other) is not type(self):
            raise UsageError(
                f"Cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.field != self.field:
            raise UsageError(
                f"Cannot combine elements over {self.field} and {other.field}"
            )

    def __iter__(self) -> Iterator[Tuple[K, Scalar]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def keys(self) -> Tuple[K, ...]:
        return tuple(k for k, _ in self.terms)

    def coefficient(self, key: K) -> Scalar:
        for k, c in self.terms:
            if k == key:
                return c
        return self.field.zero

    def to_dict(self) -> Dict[K, Scalar]:
        return dict(self.terms)

    def __add__(self: C, other: C) -> C:
        self._check(other)
        return type(self).from_terms(self.field, self.terms + other.terms)

    def __sub__(self: C, other: C) -> C:
        self._check(other)
        return self + other.scale(self.field.neg(self.field.one))

    def __neg__(self: C) -> C:
        return self.scale(self.field.neg(self.field.one))

    def scale(self: C, c: Scalar) -> C:
        c = self.field(c)
        if c == 0:
            return type(self).zero(self.field)
        terms = tuple((k, self.field.mul(c, v)) for k, v in self.terms)
        return type(self)(self.field, terms)

    def format(self, key_format: Optional[Callable[[K], str]] = None) -> str:
        """``2*(x1 x2) - (x2 x1)``; the zero element renders as ``0``."""
        key_format = key_format or self.format_key
        if not self.terms:
            return "0"
        parts = []
        for index, (key, coeff) in enumerate(self.terms):
            text = key_format(key)
            negative = not self.field.is_finite and coeff < 0
            magnitude = self.field.neg(coeff) if negative else coeff
            if magnitude != self.field.one:
                text = f"{self.field.format(magnitude)}*{text}"
            if index == 0:
                parts.append(f"-{text}" if negative else text)
            else:
                parts.append(f"{'-' if negative else '+'} {text}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()
