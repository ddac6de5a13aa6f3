"""Finite-depth diagnostics for Cantor cylinder covering families.

Whether the family of all cylinders of a Cantor series expansion can
compute Hausdorff dimensions of arbitrary sets hinges on the asymptotics
of r_k = ln n_k / ln(n_1 n_2 ... n_{k-1}): the family is usable exactly
when r_k tends to zero.  A finite prefix can never decide a limit, so
everything here is explicitly a trend diagnostic: the verdict names say
"Trend", the limsup is a tail-window maximum, and the square-sum test
reports partial sums.

Also provided: the covering of an arbitrary subinterval by same-rank
cylinders whose count is controlled by the base at the chosen rank, the
combinatorial heart of why small r_k makes the family faithful.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bases import BaseSequence
from .codec import Cylinder, cylinder_of, word_at_index, _as_fraction
from .numutil import Accumulator

FAITHFUL_TREND = "FaithfulTrend"
NON_FAITHFUL_TREND = "NonFaithfulTrend"
INCONCLUSIVE = "Inconclusive"


def ratio_sequence(bases: BaseSequence, depth: int) -> List[float]:
    """(r_2, ..., r_depth) with r_k = ln n_k / sum_{i<k} ln n_i."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    if depth > bases.max_depth:
        raise IndexError(f"depth {depth} exceeds horizon {bases.max_depth}")
    acc = Accumulator()
    acc.add(bases.log_value(1))
    out = []
    for k in range(2, depth + 1):
        lk = bases.log_value(k)
        out.append(lk / acc.total)
        acc.add(lk)
    return out


def default_tail_window(depth: int) -> int:
    """Enough tail points to see a monotone trend for the shipped families."""
    return max(10, depth // 5)


def limsup_estimate(ratios: Sequence[float], window: int) -> float:
    """Maximum over the last `window` ratios; a finite-depth limsup surrogate."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > len(ratios):
        raise ValueError(f"window {window} exceeds {len(ratios)} ratios")
    return max(ratios[-window:])


def square_summability_partials(bases: BaseSequence, depth: int) -> List[float]:
    """Partial sums of (ln n_k / ln(n_1...n_k))^2 for k = 1..depth.

    Bounded partials are the regime where the entropy formula for the
    dimension of an independent-digit measure applies.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > bases.max_depth:
        raise IndexError(f"depth {depth} exceeds horizon {bases.max_depth}")
    acc = Accumulator()
    partial = Accumulator()
    out = []
    for k in range(1, depth + 1):
        lk = bases.log_value(k)
        acc.add(lk)
        partial.add((lk / acc.total) ** 2)
        out.append(partial.total)
    return out


def condition_appears_divergent(partials: Sequence[float], window: Optional[int] = None) -> bool:
    """Heuristic divergence flag for the square-sum partials.

    Compares the tail slope against the harmonic borderline: if the mean
    tail increment exceeds 1/K the partials grow at least like sum 1/k.
    """
    k = len(partials)
    if k < 2:
        return False
    w = min(window or default_tail_window(k), k - 1)
    tail_mean = (partials[-1] - partials[-1 - w]) / w
    return tail_mean * k >= 1.0


def _verdict(ratios: Sequence[float], depth: int, tol: float, window: int) -> str:
    tail = list(ratios[-window:])
    nonincreasing = all(b <= a + 1e-15 for a, b in zip(tail, tail[1:]))
    # decay at least half as fast as harmonic over the window, or already
    # below tol: the two ways a tail can look like r_k -> 0
    decays = tail[-1] < tol or tail[-1] <= tail[0] * (1 - window / (2 * depth))
    if nonincreasing and decays:
        return FAITHFUL_TREND
    flat_above_tol = min(tail) >= tol and (max(tail) - min(tail)) <= 0.5 * max(tail)
    if flat_above_tol:
        return NON_FAITHFUL_TREND
    return INCONCLUSIVE


@dataclass(frozen=True)
class FaithfulnessReport:
    """Ratio tail, limsup surrogate, square-sum partials, and the verdict."""

    depth: int
    tol: float
    tail_window: int
    ratios: Tuple[float, ...]  # r_2 .. r_depth
    limsup_estimate: float
    verdict: str
    square_sum_partials: Tuple[float, ...]  # partials for k = 1..depth

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "tol": self.tol,
            "tail_window": self.tail_window,
            "ratios": list(self.ratios),
            "limsup_estimate": self.limsup_estimate,
            "verdict": self.verdict,
            "square_sum_partials": list(self.square_sum_partials),
            "square_sum_appears_divergent": condition_appears_divergent(
                self.square_sum_partials
            ),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Rows (k, r_k, square_sum_partial); r_1 is undefined and left blank."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "ratio", "square_sum_partial"])
        for k in range(1, self.depth + 1):
            r = "" if k == 1 else f"{self.ratios[k - 2]:.15g}"
            w.writerow([k, r, f"{self.square_sum_partials[k - 1]:.15g}"])
        return buf.getvalue()


def faithfulness_verdict(
    bases: BaseSequence, depth: int, tol: float, window: Optional[int] = None
) -> str:
    """Trend verdict from the ratio tail.  A heuristic, never a proof.

    FaithfulTrend: tail monotone nonincreasing and visibly decaying
    (below tol, or at least half-harmonic decay across the window).
    NonFaithfulTrend: tail flat and bounded below by tol.
    Inconclusive: anything else (oscillation, mixed signals).
    """
    if depth < 4:
        raise ValueError("depth must be >= 4")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ratios = ratio_sequence(bases, depth)
    w = min(window or default_tail_window(depth), len(ratios))
    return _verdict(ratios, depth, tol, w)


def faithfulness_report(
    bases: BaseSequence, depth: int, tol: float, window: Optional[int] = None
) -> FaithfulnessReport:
    if depth < 4:
        raise ValueError("depth must be >= 4")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ratios = ratio_sequence(bases, depth)
    w = min(window or default_tail_window(depth), len(ratios))
    return FaithfulnessReport(
        depth=depth,
        tol=tol,
        tail_window=w,
        ratios=tuple(ratios),
        limsup_estimate=limsup_estimate(ratios, w),
        verdict=_verdict(ratios, depth, tol, w),
        square_sum_partials=tuple(square_summability_partials(bases, depth)),
    )


def interval_cylinder_cover(a, b, bases: BaseSequence) -> List[Cylinder]:
    """Cover [a, b) by same-rank cylinders no longer than the interval.

    The rank is the smallest k whose cylinder length 1/(n_1...n_k) fits
    inside |I|; the cover consists of every rank-k cylinder meeting the
    interval.  Because rank-(k-1) cylinders are longer than |I|, the
    cover has at most n_k + 2 members, well under the 2 n_k + 2 budget
    the dimension argument needs.
    """
    a = _as_fraction(a, "interval endpoint")
    b = _as_fraction(b, "interval endpoint")
    if not 0 <= a < b <= 1:
        raise ValueError(f"need 0 <= a < b <= 1, got [{a}, {b})")
    width = b - a
    k = 0
    grid = 1  # n_1 ... n_k
    while Fraction(1, grid) > width:
        k += 1
        if k > bases.max_depth:
            raise IndexError(
                f"interval of length {width} needs rank beyond horizon {bases.max_depth}"
            )
        grid *= bases.value(k)
    first = math.floor(a * grid)  # index of the cylinder containing a
    last = math.ceil(b * grid) - 1  # index of the last cylinder meeting [a, b)
    cover = [cylinder_of(word_at_index(bases, k, m)) for m in range(first, last + 1)]
    assert all(c.length <= width for c in cover)
    assert cover[0].left <= a and cover[-1].right >= b
    if k >= 1:
        assert len(cover) <= 2 * bases.value(k) + 2
    return cover
