"""Covering volumes, critical exponents, and dimension certificates.

The true Hausdorff premeasure takes an infimum over all coverings and is
not computable; this module exposes three concrete covering classes of a
digit-restricted set and the two quantities that bracket its dimension
from both sides at finite depth:

* uniform rank-k cylinder covers (one piece per surviving cylinder),
* merged-run covers (maximal blocks of consecutive allowed digits at the
  deepest level glued into single intervals, which is how adjacency
  beats cylinder covers),
* the optimal cylinder antichain, found by dynamic programming over the
  surviving tree.

Shrinking covering volumes witness upper dimension bounds; the
mass-distribution certificate (measure of every piece at most its
length to the power alpha) witnesses lower bounds for the cylinder
family.  All volume arithmetic is in natural-log space with compensated
summation; dyadic constructions cancel exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .codec import DigitWord
from .digit_sets import FULL, DigitRuleSet
from .measure import ProductMeasure, cylinder_log_measure
from .numutil import Accumulator, NEG_INF, ln_fraction, ln_int, logsumexp


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if not 0 < a <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return a


def critical_exponent(ruleset: DigitRuleSet, depth: int) -> float:
    """The alpha at which the rank-`depth` cylinder cover has volume 1.

    Closed form: sum of log digit counts over the sum of log bases.
    This also equals the log-measure ratio of the uniform measure on the
    set, so it doubles as a finite-depth dimension estimate.
    """
    if not 1 <= depth <= ruleset.depth:
        raise IndexError(f"depth {depth} outside 1..{ruleset.depth}")
    num = Accumulator()
    den = Accumulator()
    for i in range(1, depth + 1):
        num.add(ruleset.log_cardinality(i))
        den.add(ruleset.bases.log_value(i))
    return num.total / den.total


def cylinder_cover_volume(ruleset: DigitRuleSet, depth: int, alpha) -> float:
    """Log alpha-volume of the cover by all surviving rank-`depth` cylinders.

    N pieces of equal length L give log(N * L^alpha) = ln N + alpha ln L.
    """
    a = _check_alpha(alpha)
    if not 1 <= depth <= ruleset.depth:
        raise IndexError(f"depth {depth} outside 1..{ruleset.depth}")
    count = Accumulator()
    length = Accumulator()
    for i in range(1, depth + 1):
        count.add(ruleset.log_cardinality(i))
        length.add(ruleset.bases.log_value(i))
    return count.total + a * -length.total


def _run_log_lengths(ruleset: DigitRuleSet, k: int) -> List[float]:
    lv = ruleset.level(k)
    if lv == FULL:
        return [ruleset.bases.log_value(k)]
    return [ln_int(hi - lo + 1) for lo, hi in lv]


def merged_run_cover_volume(ruleset: DigitRuleSet, depth: int, alpha) -> float:
    """Log alpha-volume of the cover whose pieces are digit runs.

    Each surviving rank-(depth-1) prefix contributes one piece per
    maximal run of consecutive allowed digits at the last level; a run
    of length r becomes a single interval of length r/(n_1...n_depth).
    Runs exploit adjacency, so this cover can have a strictly smaller
    volume than any cylinder cover of the same set.
    """
    a = _check_alpha(alpha)
    if not 1 <= depth <= ruleset.depth:
        raise IndexError(f"depth {depth} outside 1..{ruleset.depth}")
    prefix_count = Accumulator()
    for i in range(1, depth):
        prefix_count.add(ruleset.log_cardinality(i))
    grid_log = Accumulator()
    for i in range(1, depth + 1):
        grid_log.add(ruleset.bases.log_value(i))
    piece_terms = [a * (rl - grid_log.total) for rl in _run_log_lengths(ruleset, depth)]
    return prefix_count.total + logsumexp(piece_terms)


def merged_run_piece_count(ruleset: DigitRuleSet, depth: int) -> int:
    lv = ruleset.level(depth)
    runs = 1 if lv == FULL else len(lv)
    return (ruleset.surviving_count(depth - 1) if depth > 1 else 1) * runs


# ---------------------------------------------------------------------------
# optimal cylinder antichains
# ---------------------------------------------------------------------------


def dp_optimal_cylinder_cover(
    ruleset: DigitRuleSet,
    depth: int,
    alpha,
    mode: str = "counts",
    node_budget: int = 250_000,
) -> float:
    """Log of the minimal alpha-volume over all cylinder antichain covers.

    cost(node) = min(|node|^alpha, sum of children costs), leaves scored
    at rank `depth`; the root cost is the exact optimum over antichains
    of the surviving tree truncated there.

    Cylinder lengths depend only on rank, so every surviving node at one
    level has an identical subtree and the recursion collapses to one
    value per level ("counts" mode, O(depth)).  "nodes" mode walks the
    tree explicitly under a node budget; it exists as a structural
    cross-check and for oracle tests.
    """
    a = _check_alpha(alpha)
    if not 1 <= depth <= ruleset.depth:
        raise IndexError(f"depth {depth} outside 1..{ruleset.depth}")
    if mode == "counts":
        return _dp_counts(ruleset, depth, a)[0]
    if mode == "nodes":
        return _dp_nodes(ruleset, depth, a, node_budget)
    raise ValueError(f"unknown dp mode {mode!r}")


def _dp_counts(ruleset: DigitRuleSet, depth: int, a: float) -> Tuple[float, int]:
    """(log optimal cost, cut rank of an optimal uniform antichain)."""
    log_len = [0.0]
    acc = Accumulator()
    for k in range(1, depth + 1):
        acc.add(ruleset.bases.log_value(k))
        log_len.append(-acc.total)
    cost = a * log_len[depth]
    cut = depth
    for k in range(depth - 1, -1, -1):
        keep = a * log_len[k]
        push = ruleset.log_cardinality(k + 1) + cost
        if keep <= push:
            cost, cut = keep, k
        else:
            cost = push
    return cost, cut


def _dp_nodes(ruleset: DigitRuleSet, depth: int, a: float, node_budget: int) -> float:
    log_len = [0.0]
    acc = Accumulator()
    for k in range(1, depth + 1):
        acc.add(ruleset.bases.log_value(k))
        log_len.append(-acc.total)
    visited = 0

    def cost(k: int) -> float:
        nonlocal visited
        visited += 1
        if visited > node_budget:
            raise RuntimeError(
                f"node budget {node_budget} exceeded; use counts mode or lower depth"
            )
        own = a * log_len[k]
        if k == depth:
            return own
        child_costs = []
        for lo, hi in ruleset.allowed_digits(k + 1):
            child_costs.extend(cost(k + 1) for _ in range(lo, hi + 1))
        return min(own, logsumexp(child_costs))

    return cost(0)


def dp_optimal_cut(ruleset: DigitRuleSet, depth: int, alpha) -> Tuple[int, int]:
    """(rank, piece count) of an optimal uniform antichain."""
    a = _check_alpha(alpha)
    _, cut = _dp_counts(ruleset, depth, a)
    return cut, ruleset.surviving_count(cut) if cut >= 1 else 1


# ---------------------------------------------------------------------------
# measure-side: ratios and certificates
# ---------------------------------------------------------------------------


def billingsley_ratio(measure: ProductMeasure, word: DigitWord) -> float:
    """ln(cylinder measure) / ln(cylinder length) for the word's cylinder.

    The limit of this ratio along the expansion of a point bounds the
    dimension of any set the measure fills; at finite rank it is exact
    bookkeeping of how much mass sits in how little length.
    """
    if word.rank == 0:
        raise ValueError("the rank-0 cylinder has log length 0; ratio undefined")
    num = cylinder_log_measure(measure, word)
    if num == NEG_INF:
        raise ValueError("word leaves the measure's support (zero-probability digit)")
    den = Accumulator()
    for k in range(1, word.rank + 1):
        den.add(measure.bases.log_value(k))
    return num / -den.total


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of the mass-distribution check mu(piece) <= |piece|^alpha."""

    holds: bool
    worst_ratio: float  # max over ranks of mu(cyl) / |cyl|^alpha
    worst_rank: int
    first_failing_rank: Optional[int]
    checked_depth: int
    alpha: str
    exact: bool

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "worst_ratio": self.worst_ratio,
            "worst_rank": self.worst_rank,
            "first_failing_rank": self.first_failing_rank,
            "checked_depth": self.checked_depth,
            "alpha": self.alpha,
            "exact": self.exact,
        }


def mass_distribution_certificate(
    measure: ProductMeasure,
    ruleset: DigitRuleSet,
    depth: int,
    alpha: Union[Fraction, float],
    tolerance: float = 0.0,
) -> CertificateReport:
    """Verify mu(cylinder) <= |cylinder|^alpha on every surviving rank <= depth.

    The measure must be supported exactly on the set's surviving
    cylinders.  Cylinder length depends only on rank, so the worst
    cylinder per rank is the one with the most probable digits; checking
    the running product of per-level maxima covers every cylinder.

    With a Fraction alpha = p/q and rational level weights the check is
    exact integer arithmetic (mu^q <= length^p); with a float alpha it
    runs in log space with `tolerance` slack.

    A passing certificate bounds every cylinder alpha-volume of the set
    from below by its measure, i.e. by 1 for a probability measure.
    """
    if not 1 <= depth <= min(ruleset.depth, measure.depth):
        raise IndexError(f"depth {depth} beyond the set or measure horizon")
    for k in range(1, depth + 1):
        if measure.support_intervals(k) != ruleset.level(k):
            raise ValueError(
                f"support mismatch at level {k}: measure is not exactly "
                "the set's surviving cylinders"
            )
    # exact integer comparison needs mu^q; keep q sane, else fall back to logs
    exact = (
        isinstance(alpha, Fraction)
        and measure.is_rational
        and alpha.denominator <= 1024
    )
    a_float = float(alpha)
    _check_alpha(a_float)

    log_mu = Accumulator()
    log_grid = Accumulator()
    worst_gap = NEG_INF
    worst_rank = 0
    first_fail: Optional[int] = None
    if exact:
        mu = Fraction(1)
        length = Fraction(1)
    for k in range(1, depth + 1):
        pmax = measure.level_max_prob(k)
        log_mu.add(ln_fraction(pmax) if isinstance(pmax, Fraction) else math.log(pmax))
        log_grid.add(measure.bases.log_value(k))
        gap = log_mu.total + a_float * log_grid.total  # ln mu - alpha ln length
        if gap > worst_gap:
            worst_gap, worst_rank = gap, k
        if exact:
            mu *= pmax
            length = Fraction(length.numerator, length.denominator * measure.bases.value(k))
            ok = mu ** alpha.denominator <= length ** alpha.numerator
        else:
            ok = gap <= tolerance
        if not ok and first_fail is None:
            first_fail = k
    return CertificateReport(
        holds=first_fail is None,
        worst_ratio=math.exp(worst_gap),
        worst_rank=worst_rank,
        first_failing_rank=first_fail,
        checked_depth=depth,
        alpha=str(alpha),
        exact=exact,
    )


# ---------------------------------------------------------------------------
# closed-form dimension bounds for the thinned set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionBounds:
    """Closed-form bounds for the thinned set at growth rate c.

    upper bounds the plain Hausdorff dimension (via merged-run covers at
    the selected levels); lower bounds the dimension relative to the
    cylinder family (via the mass-distribution certificate); the slack
    variant keeps the working margin delta explicit.
    """

    upper: float
    lower: float
    lower_with_slack: float

    def to_dict(self) -> dict:
        return {
            "upper": self.upper,
            "lower": self.lower,
            "lower_with_slack": self.lower_with_slack,
        }


def thinning_dimension_bounds(c: float, delta: float = 0.0) -> DimensionBounds:
    """upper = 2/(2+c), lower = (4+c)/(4+3c), slack variant at margin delta."""
    if c <= 0:
        raise ValueError("c must be positive")
    if not 0 <= delta < c:
        raise ValueError("need 0 <= delta < c")
    return DimensionBounds(
        upper=2 / (2 + c),
        lower=(4 + c) / (4 + 3 * c),
        lower_with_slack=(4 + c - 2 * delta) / (4 + 3 * c + 4 * delta),
    )


# ---------------------------------------------------------------------------
# covering reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoveringReport:
    """Alpha-volume table of one covering of one set at one depth."""

    depth: int
    covering_kind: str  # "cylinders" or "merged_runs"
    piece_count: int
    alphas: Tuple[float, ...]
    log_volumes: Tuple[float, ...]
    critical_exponent: Optional[float]

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "covering_kind": self.covering_kind,
            "piece_count": self.piece_count,
            "alphas": list(self.alphas),
            "log_volumes": list(self.log_volumes),
            "critical_exponent": self.critical_exponent,
        }


def default_alpha_grid(n: int = 512) -> Tuple[float, ...]:
    """n evenly spaced points in (0, 1]."""
    return tuple((i + 1) / n for i in range(n))


def _bisect_zero(f, lo: float, hi: float, iters: int = 200) -> Optional[float]:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo < 0 or fhi > 0:  # f decreasing: need f(lo) > 0 > f(hi)
        return None
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def covering_report(
    ruleset: DigitRuleSet,
    depth: int,
    covering_kind: str = "cylinders",
    alphas: Optional[Tuple[float, ...]] = None,
) -> CoveringReport:
    if covering_kind == "cylinders":
        vol = lambda a: cylinder_cover_volume(ruleset, depth, a)
        pieces = ruleset.surviving_count(depth)
        crit: Optional[float] = critical_exponent(ruleset, depth)
    elif covering_kind == "merged_runs":
        vol = lambda a: merged_run_cover_volume(ruleset, depth, a)
        pieces = merged_run_piece_count(ruleset, depth)
        crit = _bisect_zero(vol, 1e-9, 1.0)
    else:
        raise ValueError(f"unknown covering kind {covering_kind!r}")
    grid = alphas if alphas is not None else default_alpha_grid()
    vols = tuple(vol(a) for a in grid)
    return CoveringReport(
        depth=depth,
        covering_kind=covering_kind,
        piece_count=pieces,
        alphas=tuple(grid),
        log_volumes=vols,
        critical_exponent=crit,
    )
