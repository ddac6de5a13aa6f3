"""Small numeric helpers shared across the package.

Everything here is deterministic: summation follows the caller's index
order, and logarithms of integers take a bit-exact fast path for powers
of two so that ratios of log-sums over power-of-two data cancel exactly
in IEEE arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

LN2 = math.log(2)

NEG_INF = float("-inf")


class Accumulator:
    """Compensated (Neumaier) running sum.

    Plain float addition loses low-order bits once partial sums grow;
    log-lengths at rank in the thousands need the compensation term.
    """

    __slots__ = ("_sum", "_comp")

    def __init__(self, value: float = 0.0):
        self._sum = value
        self._comp = 0.0

    def add(self, x: float) -> None:
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    @property
    def total(self) -> float:
        return self._sum + self._comp


def compensated_sum(values: Iterable[float]) -> float:
    acc = Accumulator()
    for v in values:
        acc.add(v)
    return acc.total


def ln_int(n: int) -> float:
    """Natural log of a positive integer of any size.

    Powers of two return an exact multiple of log(2); this keeps ratios
    of dyadic log-sums exact (scaling by a power of two commutes with
    IEEE rounding).
    """
    if n <= 0:
        raise ValueError(f"ln_int requires a positive integer, got {n}")
    if n & (n - 1) == 0:
        return (n.bit_length() - 1) * LN2
    return math.log(n)


def ln_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, exact-part cancellation friendly."""
    if x <= 0:
        raise ValueError(f"ln_fraction requires a positive rational, got {x}")
    return ln_int(x.numerator) - ln_int(x.denominator)


def logsumexp(values: Iterable[float]) -> float:
    vs = list(values)
    if not vs:
        return NEG_INF
    m = max(vs)
    if m == NEG_INF:
        return NEG_INF
    return m + math.log(compensated_sum(math.exp(v - m) for v in vs))


def int_nth_root(n: int, r: int) -> int:
    """Floor of the r-th root of a nonnegative integer, exact.

    Newton iteration on integers; terminates because the iterates are
    strictly decreasing once above the root.
    """
    if n < 0:
        raise ValueError("int_nth_root requires n >= 0")
    if r < 1:
        raise ValueError("int_nth_root requires r >= 1")
    if r == 1 or n in (0, 1):
        return n
    if r == 2:
        return math.isqrt(n)
    # initial overestimate from the bit length
    x = 1 << -(-n.bit_length() // r)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            break
        x = y
    while x ** r > n:  # guard against a one-off overestimate
        x -= 1
    return x
