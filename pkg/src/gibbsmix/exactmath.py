"""Exact integer combinatorics and accurate logarithms of exact ratios.

Every entropy in the package is the logarithm of a ratio of (possibly huge)
integers. Probabilities and dimensions stay exact; conversion to floating
point happens only inside :func:`ln_ratio`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

ExactRatio = Union[int, Fraction]

LN2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError(f"factorial of negative number {k}")
    return math.factorial(k)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero when ``b`` lies outside ``[0, a]``."""
    if b < 0 or b > a or a < 0:
        return 0
    return math.comb(a, b)


def ln_ratio(num: ExactRatio, den: int = 1) -> float:
    """Natural log of ``num / den`` for arbitrarily large integers.

    ``num`` may be an int or a Fraction; ``den`` multiplies into the
    denominator. The pair need not be in lowest terms. Ratios near one go
    through ``log1p`` of the exact difference, everything else through a
    power-of-two split so that no intermediate float overflows.
    """
    if isinstance(num, Rational) and not isinstance(num, int):
        a, b = num.numerator, num.denominator * den
    else:
        a, b = int(num), int(den)
    if b < 0:
        a, b = -a, -b
    if a <= 0 or b == 0:
        raise ValueError(f"math domain error: ln of non-positive ratio {a}/{b}")
    if 2 * a >= b and a <= 2 * b:
        return math.log1p((a - b) / b)
    e = a.bit_length() - b.bit_length()
    # int / int is correctly rounded in CPython, even for huge operands
    m = a / (b << e) if e >= 0 else (a << -e) / b
    if m < 1 / _SQRT2:
        m *= 2.0
        e -= 1
    elif m >= _SQRT2:
        m *= 0.5
        e += 1
    return math.log(m) + e * LN2


def ln_binomial(a: int, b: int) -> float:
    return ln_ratio(binomial(a, b))


def shannon_entropy(p: Iterable[ExactRatio | float]) -> float:
    """-sum p ln p in nats, with 0 ln 0 = 0.

    Exact inputs (ints, Fractions) must sum to exactly one; float inputs to
    within 1e-9.
    """
    probs = list(p)
    if all(isinstance(x, Rational) for x in probs):
        total = sum(probs, Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if any(x < 0 for x in probs):
            raise ValueError("negative probability")
        return -math.fsum(float(x) * ln_ratio(x) for x in probs if x != 0)
    floats = [float(x) for x in probs]
    if abs(math.fsum(floats) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {math.fsum(floats)!r}, not 1")
    if any(x < 0 for x in floats):
        raise ValueError("negative probability")
    return -math.fsum(x * math.log(x) for x in floats if x > 0)
