"""
Exact scalar fields: the rationals and prime fields GF(p).

Rationals are ``fractions.Fraction`` values (always in lowest terms with a
positive denominator); GF(p) values are plain integers kept in ``[0, p)``.
All arithmetic goes through a ``Field`` so the linear algebra above it never
needs to know which field it works over.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Tuple, Union

from sympy import isprime

from .config import RATIONAL_FIELD_NAME
from .errors import ParseError, UsageError

Scalar = Union[Fraction, int]
Vector = Tuple[Scalar, ...]


@dataclass(frozen=True)
class Field:
    """Descriptor of an exact field; ``characteristic == 0`` means Q."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not isprime(self.characteristic):
            raise UsageError(f"GF(p) needs a prime p, got {self.characteristic}")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """Parse ``Q``, ``gfp:P`` or ``GF(P)``."""
        text = spec.strip()
        if text.upper() in (RATIONAL_FIELD_NAME, "QQ"):
            return cls.rationals()
        lowered = text.lower()
        if lowered.startswith("gfp:"):
            number = lowered[4:]
        elif lowered.startswith("gf(") and lowered.endswith(")"):
            number = lowered[3:-1]
        else:
            raise UsageError(f"Unknown field '{spec}' (expected Q or gfp:P)")
        try:
            return cls.gf(int(number))
        except ValueError:
            raise UsageError(f"Unknown field '{spec}' (expected Q or gfp:P)")

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int:
        """Number of elements; only meaningful for finite fields."""
        if not self.is_finite:
            raise UsageError("Q has no finite order")
        return self.characteristic

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_finite else Fraction(1)

    def __str__(self) -> str:
        if self.is_finite:
            return f"GF({self.characteristic})"
        return RATIONAL_FIELD_NAME

    def to_spec(self) -> str:
        if self.is_finite:
            return f"gfp:{self.characteristic}"
        return RATIONAL_FIELD_NAME

    # Conversion

    def __call__(self, value: Union[int, Fraction, str]) -> Scalar:
        """Coerce an integer, fraction or ``"num/den"`` string into the field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, Fraction):
            return self.div(self(value.numerator), self(value.denominator))
        if isinstance(value, int):
            return value % self.characteristic if self.is_finite else Fraction(value)
        raise UsageError(f"Cannot convert {value!r} into {self}")

    def parse_scalar(self, text: str) -> Scalar:
        try:
            raw = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"Malformed coefficient '{text}'")
        if self.is_finite and raw.denominator % self.characteristic == 0:
            raise ParseError(f"Coefficient '{text}' has no value in {self}")
        return self(raw)

    def format(self, value: Scalar) -> str:
        if self.is_finite:
            return str(value)
        frac = Fraction(value)
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"

    # Arithmetic

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_finite:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_finite:
            return (a - b) % self.characteristic
        return a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_finite:
            return (a * b) % self.characteristic
        return a * b

    def neg(self, a: Scalar) -> Scalar:
        if self.is_finite:
            return (-a) % self.characteristic
        return -a

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.is_finite:
            return pow(int(a), -1, self.characteristic)
        return 1 / Fraction(a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    # Vectors

    def zero_vector(self, n: int) -> Vector:
        return tuple(self.zero for _ in range(n))

    def unit_vector(self, n: int, i: int) -> Vector:
        return tuple(self.one if k == i else self.zero for k in range(n))

    def vector(self, values: Sequence[Union[int, Fraction, str]]) -> Vector:
        return tuple(self(v) for v in values)

    def add_vectors(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
        if len(u) != len(v):
            raise UsageError(f"Vector length mismatch: {len(u)} vs {len(v)}")
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def sub_vectors(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
        if len(u) != len(v):
            raise UsageError(f"Vector length mismatch: {len(u)} vs {len(v)}")
        return tuple(self.sub(a, b) for a, b in zip(u, v))

    def scale_vector(self, c: Scalar, v: Sequence[Scalar]) -> Vector:
        return tuple(self.mul(c, a) for a in v)

    def axpy(self, c: Scalar, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        """Return ``c*x + y``."""
        return tuple(self.add(self.mul(c, a), b) for a, b in zip(x, y))

    def dot(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        total = self.zero
        for a, b in zip(u, v):
            if a != 0 and b != 0:
                total = self.add(total, self.mul(a, b))
        return total

    def is_zero_vector(self, v: Sequence[Scalar]) -> bool:
        return all(a == 0 for a in v)

    def format_vector(self, v: Sequence[Scalar]) -> list[str]:
        return [self.format(a) for a in v]

    # Enumeration and sampling

    def elements(self) -> Iterator[Scalar]:
        """All elements of a finite field in increasing order."""
        return iter(range(self.order))

    def random_element(self, rng: random.Random, bound: int) -> Scalar:
        """Uniform element; over Q an integer in ``[-bound, bound]``."""
        if self.is_finite:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randint(-bound, bound))

    def random_vector(self, rng: random.Random, n: int, bound: int) -> Vector:
        return tuple(self.random_element(rng, bound) for _ in range(n))
