"""Digit words, cylinder intervals, and the rational <-> digit codec.

A rank-k digit word (a_1, ..., a_k) names the half-open cylinder

    [ sum_i a_i / (n_1...n_i),  same + 1/(n_1...n_k) )

Cylinders of a fixed rank tile [0,1) in an exact uniform grid, children
partition their parent exactly, and all endpoint arithmetic is done with
arbitrary-precision rationals.  Logs of lengths are kept separately in
compensated float form because rank-k denominators overflow any fixed
width long before the ranks of interest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .bases import BaseSequence
from .numutil import Accumulator

RationalLike = Union[Fraction, int, str]


def _as_fraction(x: RationalLike, what: str = "value") -> Fraction:
    if isinstance(x, float):
        raise TypeError(
            f"{what} must be an exact rational (Fraction, int, or 'p/q' string); "
            "binary floats are not accepted"
        )
    return Fraction(x)


@dataclass(frozen=True)
class DigitWord:
    """Finite digit prefix of a Cantor series expansion."""

    digits: Tuple[int, ...]
    bases: BaseSequence

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if len(self.digits) > self.bases.max_depth:
            raise ValueError("word longer than the base sequence horizon")
        for i, d in enumerate(self.digits, start=1):
            n = self.bases.value(i)
            if not 0 <= d < n:
                raise ValueError(f"digit {d} at level {i} outside 0..{n - 1}")

    @property
    def rank(self) -> int:
        return len(self.digits)

    def extended(self, digit: int) -> "DigitWord":
        return DigitWord(self.digits + (digit,), self.bases)


@dataclass(frozen=True)
class Cylinder:
    """Half-open rank-k interval [left, left+length) named by a digit word."""

    word: DigitWord
    left: Fraction
    length: Fraction
    log_length: float

    @property
    def rank(self) -> int:
        return self.word.rank

    @property
    def right(self) -> Fraction:
        return self.left + self.length

    def contains(self, x: Fraction) -> bool:
        return self.left <= x < self.right


def encode(x: RationalLike, bases: BaseSequence, depth: int) -> DigitWord:
    """Greedy digit extraction of an exact rational in [0, 1).

    At cylinder endpoints the expansion is not unique; the greedy floor
    picks the representation with trailing zeros, which is the one
    consistent with half-open cylinders.
    """
    x = _as_fraction(x, "encode input")
    if not 0 <= x < 1:
        raise ValueError(f"encode input must lie in [0, 1), got {x}")
    if depth > bases.max_depth:
        raise IndexError(f"depth {depth} exceeds horizon {bases.max_depth}")
    digits = []
    frac = x
    for k in range(1, depth + 1):
        scaled = frac * bases.value(k)
        d = int(scaled)  # floor: scaled >= 0
        digits.append(d)
        frac = scaled - d
    return DigitWord(tuple(digits), bases)


def decode(word: DigitWord) -> Fraction:
    """Left endpoint of the word's cylinder, exact."""
    num = 0
    den = 1
    for i, d in enumerate(word.digits, start=1):
        n = word.bases.value(i)
        num = num * n + d
        den *= n
    return Fraction(num, den)


def cylinder_of(word: DigitWord) -> Cylinder:
    k = word.rank
    left = decode(word)
    length = Fraction(1, word.bases.prefix_product(k))
    acc = Accumulator()
    for i in range(1, k + 1):
        acc.add(-word.bases.log_value(i))
    return Cylinder(word=word, left=left, length=length, log_length=acc.total)


def word_at_index(bases: BaseSequence, k: int, index: int) -> DigitWord:
    """The index-th rank-k word in left-to-right cylinder order."""
    total = bases.prefix_product(k)
    if not 0 <= index < total:
        raise ValueError(f"index {index} outside 0..{total - 1} at rank {k}")
    rem = index
    digits = [0] * k
    for i in range(k, 0, -1):
        rem, d = divmod(rem, bases.value(i))
        digits[i - 1] = d
    return DigitWord(tuple(digits), bases)
