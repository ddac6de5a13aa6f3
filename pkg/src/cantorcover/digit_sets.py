"""Digit-restricted subsets of [0, 1).

A digit rule set prescribes, for every level k, the set V_k of digits a
point may use at that level of its Cantor series expansion.  Per level
the allowed set is stored as a canonical union of disjoint, sorted,
non-adjacent integer intervals, or as the FULL marker when every digit
is allowed (FULL levels never materialize the underlying base, which
matters for double-exponential bases).

Shipped constructions over the quartic bases n_k = 4^k:

* sqrt_set          -- V_k = {0, ..., sqrt(n_k) - 1}; a set of dimension
                       1/2 whose cylinder coverings cannot be beaten by
                       more than a square-root factor.
* boosted_set       -- same square-root budget, but inflated to
                       k*sqrt(n_k) digits whenever k is a power of two.
* power_set         -- exponent p/q instead of 1/2, same inflation rule.
* power_schedule_set-- per-level rational exponents approximating a
                       fixed real exponent from below.

Over arbitrary bases with positive log-ratio limsup:

* select_heavy_levels -- pick the levels whose base is comparable to a
                       power of the whole preceding product, then thin
                       them greedily until consecutive picks are
                       separated by nearly the full log mass between
                       them.
* thinned_set        -- restrict digits to {0, ..., isqrt(n_k)} exactly
                       on the selected levels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .bases import BaseSequence
from .numutil import Accumulator, int_nth_root, ln_int

FULL = "full"

Intervals = Tuple[Tuple[int, int], ...]
Level = Union[str, Intervals]  # FULL or interval tuple


def canonical_intervals(pairs: Sequence[Sequence[int]]) -> Intervals:
    """Sort, merge and validate closed integer intervals [lo, hi]."""
    items = sorted((int(lo), int(hi)) for lo, hi in pairs)
    if not items:
        raise ValueError("a level needs at least one allowed digit")
    merged: List[Tuple[int, int]] = []
    for lo, hi in items:
        if lo < 0 or hi < lo:
            raise ValueError(f"bad digit interval [{lo}, {hi}]")
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return tuple(merged)


def intervals_cardinality(iv: Intervals) -> int:
    return sum(hi - lo + 1 for lo, hi in iv)


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


@dataclass(frozen=True)
class DigitRuleSet:
    """Per-level allowed digit sets V_k over a base sequence."""

    bases: BaseSequence
    levels: Tuple[Level, ...]
    name: Optional[str] = None
    special_levels: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.levels) > self.bases.max_depth:
            raise ValueError("more levels than the base sequence horizon")
        norm = []
        for k, lv in enumerate(self.levels, start=1):
            if lv == FULL:
                norm.append(FULL)
                continue
            iv = canonical_intervals(lv)
            n = self.bases.value(k)
            if iv[-1][1] >= n:
                raise ValueError(
                    f"level {k}: digit {iv[-1][1]} outside 0..{n - 1}"
                )
            norm.append(iv)
        object.__setattr__(self, "levels", tuple(norm))
        object.__setattr__(self, "special_levels", tuple(sorted(self.special_levels)))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def _check_level(self, k: int) -> None:
        if not 1 <= k <= self.depth:
            raise IndexError(f"level {k} outside 1..{self.depth}")

    def level(self, k: int) -> Level:
        self._check_level(k)
        return self.levels[k - 1]

    def allowed_digits(self, k: int) -> Intervals:
        """Canonical interval union for V_k; materializes FULL levels."""
        lv = self.level(k)
        if lv == FULL:
            return ((0, self.bases.value(k) - 1),)
        return lv

    def is_full(self, k: int) -> bool:
        return self.level(k) == FULL

    def cardinality(self, k: int) -> int:
        lv = self.level(k)
        if lv == FULL:
            return self.bases.value(k)
        return intervals_cardinality(lv)

    def log_cardinality(self, k: int) -> float:
        """ln |V_k| without materializing FULL levels."""
        lv = self.level(k)
        if lv == FULL:
            return self.bases.log_value(k)
        return ln_int(intervals_cardinality(lv))

    def contains_digit(self, k: int, digit: int) -> bool:
        lv = self.level(k)
        if lv == FULL:
            return 0 <= digit < self.bases.value(k)
        return any(lo <= digit <= hi for lo, hi in lv)

    def surviving_count(self, k: int) -> int:
        """Exact number of rank-k cylinders meeting the set."""
        self._check_level(k)
        c = 1
        for i in range(1, k + 1):
            c *= self.cardinality(i)
        return c

    def log_surviving_count(self, k: int) -> float:
        self._check_level(k)
        acc = Accumulator()
        for i in range(1, k + 1):
            acc.add(self.log_cardinality(i))
        return acc.total

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        levels = []
        for k, lv in enumerate(self.levels, start=1):
            if lv == FULL:
                levels.append({"k": k, "full": True})
            else:
                levels.append({"k": k, "intervals": [list(p) for p in lv]})
        d = {"bases": self.bases.to_dict(), "levels": levels}
        if self.name:
            d["rule"] = self.name
        if self.special_levels:
            d["special_levels"] = list(self.special_levels)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DigitRuleSet":
        rule = d.get("rule")
        if rule and "levels" not in d:
            return named_rule_set(rule, d)
        bases = BaseSequence.from_dict(d["bases"])
        entries = sorted(d["levels"], key=lambda e: e["k"])
        if [e["k"] for e in entries] != list(range(1, len(entries) + 1)):
            raise ValueError("levels must cover k = 1..depth exactly once")
        levels: List[Level] = []
        for e in entries:
            if e.get("full"):
                levels.append(FULL)
            else:
                levels.append(tuple((int(a), int(b)) for a, b in e["intervals"]))
        return cls(
            bases=bases,
            levels=tuple(levels),
            name=rule,
            special_levels=tuple(d.get("special_levels", ())),
        )

    @classmethod
    def from_json(cls, s: str) -> "DigitRuleSet":
        return cls.from_dict(json.loads(s))


def full_set(bases: BaseSequence, depth: Optional[int] = None) -> DigitRuleSet:
    """Every digit allowed at every level: the whole interval [0, 1)."""
    d = bases.max_depth if depth is None else depth
    return DigitRuleSet(bases=bases, levels=(FULL,) * d, name="full")


# ---------------------------------------------------------------------------
# heavy-level selection and the thinned set
# ---------------------------------------------------------------------------


def growth_band_holds(bases: BaseSequence, k: int, c: float, delta: float) -> bool:
    """Is n_k within the two-sided band (n_1...n_{k-1})^(c +- delta)?

    Evaluated in log space: exact powers of huge products are never
    formed.
    """
    s = bases.log_prefix(k - 1)
    lk = bases.log_value(k)
    return (c - delta) * s <= lk <= (c + delta) * s


def separation_holds(bases: BaseSequence, prev: int, k: int, c: float) -> bool:
    """Gap test for consecutive selected levels prev < k.

    Requires the log mass strictly between the two levels to exceed the
    fraction 1 - c/4 of the whole log mass below k.
    """
    if prev == 0:
        return True
    num = bases.log_prefix(k - 1) - bases.log_prefix(prev)
    den = bases.log_prefix(k - 1)
    return num > (1 - c / 4) * den


@dataclass(frozen=True)
class LevelSelection:
    """Levels selected for thinning, with the scan thresholds that found them.

    candidates: every level in (start, depth] whose base sits in the
        two-sided growth band.
    selected:   greedy subsequence of candidates passing the separation
        test between consecutive picks.
    """

    bases: BaseSequence
    c: float
    delta: float
    epsilon: float
    first_stable: int  # last level violating the growth band (1 if none)
    first_small: int  # first level whose preceding cylinder length < epsilon
    start: int  # max(first_stable, first_small)
    candidates: Tuple[int, ...]
    selected: Tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.delta < self.c:
            raise ValueError("need 0 < delta < c")
        if self.start != max(self.first_stable, self.first_small):
            raise ValueError("start must equal max(first_stable, first_small)")
        if not set(self.selected) <= set(self.candidates):
            raise ValueError("selected levels must be candidates")
        for k in self.candidates:
            if k <= self.start:
                raise ValueError(f"candidate {k} not beyond start {self.start}")
            if not growth_band_holds(self.bases, k, self.c, self.delta):
                raise ValueError(f"candidate {k} fails the growth band")
        prev = 0
        for k in self.selected:
            if not separation_holds(self.bases, prev, k, self.c):
                raise ValueError(f"selected pair ({prev}, {k}) fails separation")
            prev = k


def select_heavy_levels(
    bases: BaseSequence,
    c: float,
    delta: float,
    epsilon: float,
    depth: int,
) -> LevelSelection:
    """Scan levels 2..depth for the growth-band/separation selection.

    c is the caller's estimate of the limsup of ln n_k / ln(n_1...n_{k-1});
    it is an input because no finite prefix determines the limsup.
    """
    if not 0 < delta < c:
        raise ValueError(f"need 0 < delta < c, got delta={delta}, c={c}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if depth < 4:
        raise ValueError("depth must be at least 4")
    if depth > bases.max_depth:
        raise IndexError(f"depth {depth} exceeds horizon {bases.max_depth}")

    in_band = {k: growth_band_holds(bases, k, c, delta) for k in range(2, depth + 1)}
    if not any(in_band.values()):
        raise ValueError(
            f"no level up to {depth} sits in the growth band for c={c}, delta={delta}"
        )
    violators = [k for k, ok in in_band.items() if not ok]
    first_stable = max(violators) if violators else 1

    log_eps = math.log(epsilon)
    first_small = None
    for k in range(1, depth + 1):
        if -bases.log_prefix(k - 1) < log_eps:
            first_small = k
            break
    if first_small is None:
        raise ValueError(f"no level up to {depth} reaches cylinder length < {epsilon}")

    start = max(first_stable, first_small)
    candidates = tuple(k for k in range(start + 1, depth + 1) if in_band[k])
    if not candidates:
        raise ValueError(
            f"no candidate level in ({start}, {depth}]; increase depth"
        )

    selected: List[int] = []
    prev = 0
    for k in candidates:
        if separation_holds(bases, prev, k, c):
            selected.append(k)
            prev = k

    return LevelSelection(
        bases=bases,
        c=c,
        delta=delta,
        epsilon=epsilon,
        first_stable=first_stable,
        first_small=first_small,
        start=start,
        candidates=candidates,
        selected=tuple(selected),
    )


def thinned_set(
    bases: BaseSequence,
    selection: LevelSelection,
    depth: Optional[int] = None,
) -> DigitRuleSet:
    """Full digits everywhere except the selected levels, which keep
    only {0, ..., isqrt(n_k)} (inclusive, hence isqrt(n_k)+1 digits)."""
    if selection.bases != bases:
        raise ValueError("selection was computed for different bases")
    d = bases.max_depth if depth is None else depth
    picked = set(selection.selected)
    levels: List[Level] = []
    for k in range(1, d + 1):
        if k in picked:
            levels.append(((0, math.isqrt(bases.value(k))),))
        else:
            levels.append(FULL)
    return DigitRuleSet(
        bases=bases,
        levels=tuple(levels),
        name="thinned",
        special_levels=tuple(sorted(picked & set(range(1, d + 1)))),
    )


# ---------------------------------------------------------------------------
# quartic-base constructions
# ---------------------------------------------------------------------------


def sqrt_set(depth: int) -> DigitRuleSet:
    """V_k = {0, ..., 2^k - 1} over n_k = 4^k: the square-root digit budget."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    bases = BaseSequence.power(4, max_depth=depth)
    levels = tuple(((0, 2 ** k - 1),) for k in range(1, depth + 1))
    return DigitRuleSet(bases=bases, levels=levels, name="sqrt")


def boosted_set(depth: int) -> DigitRuleSet:
    """Square-root budget, inflated to k * 2^k digits at k = 1, 2, 4, 8, ..."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    bases = BaseSequence.power(4, max_depth=depth)
    levels = []
    special = []
    for k in range(1, depth + 1):
        if _is_power_of_two(k):
            special.append(k)
            levels.append(((0, k * 2 ** k - 1),))
        else:
            levels.append(((0, 2 ** k - 1),))
    return DigitRuleSet(
        bases=bases, levels=tuple(levels), name="boosted", special_levels=tuple(special)
    )


def power_set(p: int, q: int, depth: int) -> DigitRuleSet:
    """Digit budget floor(n_k^(p/q)) over n_k = 4^k, inflated by k at k = 2^s.

    The budget is the exact integer q-th root of n_k^p; p/q = 1/2
    reproduces boosted_set level by level.
    """
    if not 0 < p < q:
        raise ValueError(f"need 0 < p < q, got {p}/{q}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    bases = BaseSequence.power(4, max_depth=depth)
    levels = []
    special = []
    for k in range(1, depth + 1):
        budget = int_nth_root((4 ** k) ** p, q)
        if _is_power_of_two(k):
            special.append(k)
            budget *= k
        levels.append(((0, budget - 1),))
    return DigitRuleSet(
        bases=bases,
        levels=tuple(levels),
        name=f"power:{p}/{q}",
        special_levels=tuple(special),
    )


def _floor_power_of_two_exponent(t: Fraction, bits: int) -> int:
    """floor(2^t) for rational t >= 0, certified.

    Integer t is exact; a small denominator goes through the exact
    integer root; otherwise exact root extraction is hopeless (the
    radicand would need denominator * bits bits), so evaluate in mpmath
    and escalate precision until the value is provably more than one
    rounding error away from both neighbouring integers.  2^t is
    irrational for non-integer rational t, so the escalation terminates.
    """
    if t.denominator == 1:
        return 1 << t.numerator
    if t.denominator <= 64:
        return int_nth_root(1 << t.numerator, t.denominator)
    import mpmath

    prec = bits + 64
    while prec <= 1 << 20:
        with mpmath.workprec(prec):
            x = mpmath.power(2, mpmath.mpf(t.numerator) / t.denominator)
            lo = int(mpmath.floor(x))
            err = mpmath.ldexp(1, bits - prec + 8)  # generous bound on |x - true|
            if x - lo > err and (lo + 1) - x > err:
                return lo
        prec *= 2
    raise ArithmeticError("cannot certify floor of 2^(p/q)")


def power_schedule_set(alpha, depth: int) -> DigitRuleSet:
    """Per-level exponents floor(alpha*10^m)/10^m, m = min(k, 12), over n_k = 4^k.

    Approximates an arbitrary exponent in (0, 1) by a rising rational
    schedule; the level-k budget is floor(n_k^(p_k/q_k)), inflated by k
    at k = 2^s as in power_set.
    """
    a = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    if not 0 < a < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    bases = BaseSequence.power(4, max_depth=depth)
    levels = []
    special = []
    for k in range(1, depth + 1):
        m = 10 ** min(k, 12)
        e = Fraction(int(a * m), m)  # floor(alpha * 10^m) / 10^m
        t = 2 * k * e  # n_k^e = 2^(2k * e)
        budget = _floor_power_of_two_exponent(t, bits=2 * k + 2)
        if _is_power_of_two(k):
            special.append(k)
            budget *= k
        levels.append(((0, budget - 1),))
    return DigitRuleSet(
        bases=bases,
        levels=tuple(levels),
        name=f"power-schedule:{a}",
        special_levels=tuple(special),
    )


def named_rule_set(rule: str, params: dict) -> DigitRuleSet:
    """Build one of the shipped constructions from its compressed JSON form."""
    if rule == "full":
        return full_set(BaseSequence.from_dict(params["bases"]), params.get("depth"))
    if rule == "sqrt":
        return sqrt_set(int(params["depth"]))
    if rule == "boosted":
        return boosted_set(int(params["depth"]))
    if rule == "power":
        return power_set(int(params["p"]), int(params["q"]), int(params["depth"]))
    raise ValueError(f"unknown rule {rule!r}")
