"""
Validation utilities for run parameters.

Each validator returns ``(is_valid, error_message)``; callers decide whether
to raise ``UsageError`` with the message.
"""

from typing import Tuple

from sympy import isprime

from .config import (
    MAX_DEGREE,
    MAX_WORKERS,
    MIN_DEGREE,
    OUTPUT_FORMATS,
    RATIONAL_FIELD_NAME,
)


def is_nonempty(s: str) -> bool:
    """Check if a string is non-empty after trimming whitespace."""
    return bool(s and s.strip())


def validate_degree(degree: int, force: bool = False) -> Tuple[bool, str]:
    """Truncation degree must lie in [MIN_DEGREE, MAX_DEGREE] unless forced."""
    if degree < MIN_DEGREE:
        return False, f"Degree bound must be at least {MIN_DEGREE}"
    if degree > MAX_DEGREE and not force:
        return (
            False,
            f"Degree bound {degree} exceeds {MAX_DEGREE}; pass --force to allow it",
        )
    return True, ""


def validate_budget(budget: int) -> Tuple[bool, str]:
    if budget < 1:
        return False, "Enumeration budget must be at least 1"
    return True, ""


def validate_workers(workers: int) -> Tuple[bool, str]:
    if workers < 1:
        return False, "Worker count must be at least 1"
    if workers > MAX_WORKERS:
        return False, f"Worker count must be {MAX_WORKERS} or less"
    return True, ""


def validate_prime(p: int) -> Tuple[bool, str]:
    if p < 2 or not isprime(p):
        return False, f"{p} is not a prime"
    return True, ""


def validate_field_spec(spec: str) -> Tuple[bool, str]:
    """
    Validate a field descriptor: ``Q`` or ``gfp:P`` with ``P`` prime.

    Returns (is_valid, error_message)
    """
    if not is_nonempty(spec):
        return False, "Field is required"
    text = spec.strip()
    if text.upper() in (RATIONAL_FIELD_NAME, "QQ"):
        return True, ""
    if not text.lower().startswith("gfp:"):
        return False, f"Unknown field '{spec}' (expected Q or gfp:P)"
    number = text[4:]
    if not number.isdigit():
        return False, f"Field characteristic '{number}' is not a number"
    return validate_prime(int(number))


def validate_output_format(fmt: str) -> Tuple[bool, str]:
    if fmt not in OUTPUT_FORMATS:
        return False, f"Output format must be one of {', '.join(OUTPUT_FORMATS)}"
    return True, ""
