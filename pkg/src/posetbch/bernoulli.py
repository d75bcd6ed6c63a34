"""Exact rationals and the sequence b_n with generating function x/(e^x - 1).

Convention: ``b_n = B_n / n!`` where B_n are the Bernoulli numbers with
B_1 = -1/2, so that b_0 = 1, b_1 = -1/2, b_2 = 1/12, b_4 = -1/720.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

__all__ = [
    "bernoulli_b",
    "bernoulli_table",
    "check_b_relation",
    "parse_rational",
    "rational_to_json",
    "rational_from_json",
    "format_rational",
]

_cache: list[Fraction] = [Fraction(1)]
_lock = threading.Lock()


def bernoulli_b(n: int) -> Fraction:
    """Return b_n, the n-th coefficient of x/(e^x - 1).

    Uses b_0 = 1 and sum_{i=0}^{n} b_i / (n+1-i)! = 0 for n >= 1, which is
    the coefficient identity of (x/(e^x-1)) * ((e^x-1)/x) = 1.
    """
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    if n < len(_cache):
        return _cache[n]
    with _lock:
        for m in range(len(_cache), n + 1):
            s = sum(_cache[i] / factorial(m + 1 - i) for i in range(m))
            _cache.append(-s)
    return _cache[n]


def bernoulli_table(upto: int) -> list[Fraction]:
    bernoulli_b(upto)
    return _cache[: upto + 1]


def check_b_relation(n: int) -> bool:
    """Check (1 + n(-1)^n) b_n == -sum_{i=1}^{n-1} (-1)^i b_i b_{n-i} exactly."""
    if n < 1:
        raise ValueError(f"relation is stated for n >= 1, got {n}")
    lhs = (1 + n * (-1) ** n) * bernoulli_b(n)
    rhs = -sum(
        ((-1) ** i * bernoulli_b(i) * bernoulli_b(n - i) for i in range(1, n)),
        Fraction(0),
    )
    return lhs == rhs


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-1/2"`` etc.; decimals are rejected to keep values exact."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(s)


def rational_to_json(q: Fraction) -> dict[str, str]:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj: dict[str, str]) -> Fraction:
    den = int(obj["den"])
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(int(obj["num"]), den)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
