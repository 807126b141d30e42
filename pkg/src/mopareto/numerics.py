"""Exact rational arithmetic for dominance checks and grid placement.

Every objective value, tolerance, and grid anchor in this package is a
`fractions.Fraction`.  Comparisons are therefore bit-exact: two distinct
values of bounded encoding length differ by an observable margin, and no
decision anywhere depends on floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

Rational = Fraction

__all__ = [
    "Rational",
    "parse_rational",
    "render_rational",
    "pow_ratio",
    "exact_sqrt",
    "half_step_delta",
    "encoding_bits",
]

# integer ("5"), fraction ("3/2"), or finite decimal ("1.25"), optionally signed
_RATIONAL_FORM = re.compile(r"^[+-]?(?:\d+/\d+|\d+(?:\.\d+)?)$")

# dyadic denominator used when a slack factor has no exact rational square root
_LADDER_BITS = 40


def parse_rational(text: str) -> Fraction:
    """Parse "5", "3/2", or "1.25" into an exact Fraction.

    Decimals are expanded exactly, never rounded.  Raises ValueError for
    malformed text and for a zero denominator.
    """
    s = text.strip()
    if not _RATIONAL_FORM.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in rational literal: {text!r}") from None


def render_rational(r: Fraction) -> str:
    """Canonical text form: "num" when the denominator is 1, else "num/den"."""
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def pow_ratio(base: Fraction, exponent: int) -> Fraction:
    """Exact integer power of a positive rational (negative exponents invert)."""
    if base <= 0:
        raise ValueError("pow_ratio requires a positive base")
    return base ** exponent


def exact_sqrt(r: Fraction) -> Fraction | None:
    """The rational square root of r when one exists, else None."""
    if r < 0:
        raise ValueError("square root of a negative rational")
    root_num = isqrt(r.numerator)
    root_den = isqrt(r.denominator)
    if root_num * root_num == r.numerator and root_den * root_den == r.denominator:
        return Fraction(root_num, root_den)
    return None


def half_step_delta(eps: Fraction) -> Fraction:
    """Largest usable step delta with (1 + delta)**2 <= 1 + eps.

    Splitting an approximation budget over two stages needs a delta whose
    square stays inside the budget.  When 1 + eps is a rational square the
    slack is exact; otherwise the best dyadic delta with denominator
    2**40 is returned (coarser dyadic rungs are subsumed by the finest one).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    target = 1 + eps
    root = exact_sqrt(target)
    if root is not None:
        return root - 1
    n = 1 << _LADDER_BITS
    root_floor = isqrt(n * n * target.numerator // target.denominator)
    delta = Fraction(root_floor - n, n)
    if delta <= 0:
        raise ValueError(f"eps={eps} is too small for the dyadic delta ladder")
    return delta


def encoding_bits(r: Fraction) -> int:
    """Binary encoding length of a rational: max bit length of numerator and denominator."""
    return max(abs(r.numerator).bit_length(), r.denominator.bit_length())
