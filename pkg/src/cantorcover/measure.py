"""Probability measures with independent Cantor series digits.

A product measure assigns each level k an independent digit distribution
on {0, ..., n_k - 1}.  Two level forms are supported: uniform on a digit
set (stored as FULL or an interval union, so gigantic levels stay cheap)
and an explicit probability vector (exact rationals or floats).  All the
shipped constructions are uniform with dyadic weights, which keeps
cylinder measures and mass-distribution certificates exact.

Sampling uses an explicitly seeded ``random.Random`` (Mersenne Twister);
identical seed, measure and depth reproduce the identical digit word.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .bases import BaseSequence
from .codec import DigitWord, encode, _as_fraction
from .digit_sets import (
    FULL,
    DigitRuleSet,
    Intervals,
    boosted_set,
    canonical_intervals,
    intervals_cardinality,
)
from .faithfulness import (
    condition_appears_divergent,
    default_tail_window,
    square_summability_partials,
)
from .numutil import Accumulator, NEG_INF, ln_fraction, ln_int

# level payloads: ("uniform", FULL | intervals) or ("explicit", probs tuple)
UNIFORM = "uniform"
EXPLICIT = "explicit"

LevelDist = Tuple[str, object]


def _explicit_probs(raw: Sequence) -> Tuple:
    probs = []
    exact = True
    for p in raw:
        if isinstance(p, float):
            exact = False
            probs.append(p)
        else:
            probs.append(Fraction(p))
    if exact:
        total = sum(probs)
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected 1")
    else:
        probs = [float(p) for p in probs]
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {sum(probs)!r}, expected 1")
    if any(p < 0 for p in probs):
        raise ValueError("probabilities must be nonnegative")
    return tuple(probs)


@dataclass(frozen=True)
class ProductMeasure:
    """Independent-digit measure: one distribution per level."""

    bases: BaseSequence
    levels: Tuple[LevelDist, ...]

    def __post_init__(self):
        if len(self.levels) > self.bases.max_depth:
            raise ValueError("more levels than the base sequence horizon")
        norm: List[LevelDist] = []
        for k, (kind, payload) in enumerate(self.levels, start=1):
            if kind == UNIFORM:
                if payload != FULL:
                    payload = canonical_intervals(payload)
                    n = self.bases.value(k)
                    if payload[-1][1] >= n:
                        raise ValueError(f"level {k}: support exceeds 0..{n - 1}")
                norm.append((UNIFORM, payload))
            elif kind == EXPLICIT:
                probs = _explicit_probs(payload)
                if len(probs) != self.bases.value(k):
                    raise ValueError(
                        f"level {k}: vector has {len(probs)} entries, "
                        f"base is {self.bases.value(k)}"
                    )
                norm.append((EXPLICIT, probs))
            else:
                raise ValueError(f"unknown level kind {kind!r}")
        object.__setattr__(self, "levels", tuple(norm))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def _check_level(self, k: int) -> None:
        if not 1 <= k <= self.depth:
            raise IndexError(f"level {k} outside 1..{self.depth}")

    @property
    def is_rational(self) -> bool:
        return all(
            kind == UNIFORM or isinstance(payload[0], Fraction)
            for kind, payload in self.levels
        )

    # -- per-level queries ---------------------------------------------

    def support_intervals(self, k: int) -> Union[str, Intervals]:
        """FULL, or the canonical interval union of positive-probability digits."""
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            return payload
        pos = [(i, i) for i, p in enumerate(payload) if p > 0]
        return canonical_intervals(pos)

    def support_cardinality(self, k: int) -> int:
        sup = self.support_intervals(k)
        if sup == FULL:
            return self.bases.value(k)
        return intervals_cardinality(sup)

    def level_log_prob(self, k: int, digit: int) -> float:
        """ln p_{digit,k}; -inf outside the support."""
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                if 0 <= digit < self.bases.value(k):
                    return -self.bases.log_value(k)
                return NEG_INF
            if any(lo <= digit <= hi for lo, hi in payload):
                return -ln_int(intervals_cardinality(payload))
            return NEG_INF
        p = payload[digit] if 0 <= digit < len(payload) else 0
        if p == 0:
            return NEG_INF
        if isinstance(p, Fraction):
            return ln_fraction(p)
        return math.log(p)

    def level_prob(self, k: int, digit: int) -> Fraction:
        """Exact digit probability (rational levels only)."""
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                n = self.bases.value(k)
                return Fraction(1, n) if 0 <= digit < n else Fraction(0)
            if any(lo <= digit <= hi for lo, hi in payload):
                return Fraction(1, intervals_cardinality(payload))
            return Fraction(0)
        p = payload[digit] if 0 <= digit < len(payload) else 0
        if not isinstance(p, (Fraction, int)):
            raise TypeError("level has float probabilities; no exact value")
        return Fraction(p)

    def level_mass_below(self, k: int, digit: int):
        """Total probability of digits strictly below `digit` at level k."""
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                return Fraction(digit, self.bases.value(k))
            count = 0
            for lo, hi in payload:
                if lo >= digit:
                    break
                count += min(hi, digit - 1) - lo + 1
            return Fraction(count, intervals_cardinality(payload))
        head = payload[:digit]
        if not head:
            return Fraction(0)
        return sum(head)

    def level_max_prob(self, k: int):
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                return Fraction(1, self.bases.value(k))
            return Fraction(1, intervals_cardinality(payload))
        return max(payload)

    def level_total(self, k: int):
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            return Fraction(1)
        return sum(payload)

    def level_entropy(self, k: int) -> float:
        """Shannon entropy of the level-k digit, natural log."""
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                return self.bases.log_value(k)
            return ln_int(intervals_cardinality(payload))
        acc = Accumulator()
        for p in payload:
            if p == 0:
                continue
            if isinstance(p, Fraction):
                acc.add(float(p) * ln_fraction(p))
            else:
                acc.add(p * math.log(p))
        return -acc.total

    def sample_digit(self, k: int, rng: random.Random) -> int:
        self._check_level(k)
        kind, payload = self.levels[k - 1]
        if kind == UNIFORM:
            if payload == FULL:
                return rng.randrange(self.bases.value(k))
            idx = rng.randrange(intervals_cardinality(payload))
            for lo, hi in payload:
                span = hi - lo + 1
                if idx < span:
                    return lo + idx
                idx -= span
            raise AssertionError("unreachable: index walked past the support")
        if isinstance(payload[0], Fraction):
            denom = math.lcm(*(p.denominator for p in payload))
            t = rng.randrange(denom)
            acc = 0
            for digit, p in enumerate(payload):
                acc += p.numerator * (denom // p.denominator)
                if t < acc:
                    return digit
            raise AssertionError("unreachable: probabilities sum to 1")
        u = rng.random()
        acc = 0.0
        for digit, p in enumerate(payload):
            acc += p
            if u < acc:
                return digit
        return len(payload) - 1

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        levels = []
        for k, (kind, payload) in enumerate(self.levels, start=1):
            if kind == UNIFORM:
                if payload == FULL:
                    levels.append({"k": k, "uniform_on": "full"})
                else:
                    levels.append({"k": k, "uniform_on": [list(p) for p in payload]})
            else:
                levels.append({"k": k, "probs": [str(p) for p in payload]})
        return {"bases": self.bases.to_dict(), "levels": levels}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ProductMeasure":
        if "rule" in d and "levels" not in d:
            if d["rule"] == "uniform_on_set":
                return uniform_measure_on(DigitRuleSet.from_dict(d["set"]))
            raise ValueError(f"unknown measure rule {d['rule']!r}")
        bases = BaseSequence.from_dict(d["bases"])
        entries = sorted(d["levels"], key=lambda e: e["k"])
        levels: List[LevelDist] = []
        for e in entries:
            if "uniform_on" in e:
                sup = e["uniform_on"]
                levels.append((UNIFORM, FULL if sup == "full" else tuple(map(tuple, sup))))
            else:
                levels.append((EXPLICIT, tuple(e["probs"])))
        return cls(bases=bases, levels=tuple(levels))

    @classmethod
    def from_json(cls, s: str) -> "ProductMeasure":
        return cls.from_dict(json.loads(s))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def uniform_measure_on(ruleset: DigitRuleSet) -> ProductMeasure:
    """Uniform digit distribution on each level's allowed set."""
    return ProductMeasure(
        bases=ruleset.bases,
        levels=tuple((UNIFORM, ruleset.level(k)) for k in range(1, ruleset.depth + 1)),
    )


def uniform_full_measure(bases: BaseSequence, depth: Optional[int] = None) -> ProductMeasure:
    """The uniform measure: every cylinder gets exactly its length."""
    d = bases.max_depth if depth is None else depth
    return ProductMeasure(bases=bases, levels=((UNIFORM, FULL),) * d)


def explicit_measure(bases: BaseSequence, vectors: Sequence[Sequence]) -> ProductMeasure:
    return ProductMeasure(
        bases=bases, levels=tuple((EXPLICIT, tuple(v)) for v in vectors)
    )


def boosted_split_pieces(m: int, depth: Optional[int] = None) -> List[Tuple[DigitRuleSet, ProductMeasure]]:
    """Split the boosted set at level 2^m into 2^m disjoint spectra.

    Level 2^m of the boosted set has 2^m * 2^(2^m) digits; block j keeps
    digits [j*2^K, (j+1)*2^K) where K = 2^m.  The pieces partition the
    set, each carries a uniform measure, and each measure obeys the
    half-exponent mass bound, so together they push the cylinder-cover
    half-measure above 2^m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    block_level = 2 ** m
    d = block_level if depth is None else depth
    if d < block_level:
        raise ValueError(f"depth {d} does not reach the split level {block_level}")
    base_set = boosted_set(d)
    pieces = []
    width = 2 ** block_level
    for j in range(block_level):
        levels = list(base_set.levels)
        levels[block_level - 1] = ((j * width, (j + 1) * width - 1),)
        piece_set = DigitRuleSet(
            bases=base_set.bases,
            levels=tuple(levels),
            name=f"boosted-split:{m}:{j}",
            special_levels=base_set.special_levels,
        )
        pieces.append((piece_set, uniform_measure_on(piece_set)))
    return pieces


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def cylinder_log_measure(measure: ProductMeasure, word: DigitWord) -> float:
    """ln of the word's cylinder measure; -inf off the support."""
    acc = Accumulator()
    for k, d in enumerate(word.digits, start=1):
        lp = measure.level_log_prob(k, d)
        if lp == NEG_INF:
            return NEG_INF
        acc.add(lp)
    return acc.total


def cylinder_measure(measure: ProductMeasure, word: DigitWord) -> Fraction:
    """Exact cylinder measure (rational levels only)."""
    out = Fraction(1)
    for k, d in enumerate(word.digits, start=1):
        out *= measure.level_prob(k, d)
        if out == 0:
            return out
    return out


def entropy_sequence(measure: ProductMeasure, depth: int) -> List[float]:
    """Partial sums H_k of per-level digit entropies, k = 1..depth."""
    if not 1 <= depth <= measure.depth:
        raise IndexError(f"depth {depth} outside 1..{measure.depth}")
    acc = Accumulator()
    out = []
    for k in range(1, depth + 1):
        acc.add(measure.level_entropy(k))
        out.append(acc.total)
    return out


@dataclass(frozen=True)
class EntropyDimensionReport:
    """Entropy-to-log-length ratios with tail-window limit surrogates.

    The dimension formula dim = lim H_k / ln(n_1...n_k) is only valid
    when the square-sum partials stay bounded; the divergence flag marks
    runs where that hypothesis looks false.
    """

    depth: int
    tail_window: int
    values: Tuple[float, ...]
    liminf_estimate: float
    limsup_estimate: float
    condition_partials: Tuple[float, ...]
    condition_appears_divergent: bool

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "tail_window": self.tail_window,
            "values": list(self.values),
            "liminf_estimate": self.liminf_estimate,
            "limsup_estimate": self.limsup_estimate,
            "condition_partials": list(self.condition_partials),
            "condition_appears_divergent": self.condition_appears_divergent,
        }


def entropy_dimension(
    measure: ProductMeasure, depth: int, window: Optional[int] = None
) -> EntropyDimensionReport:
    """H_k / ln(n_1...n_k) with liminf/limsup tail surrogates."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    values = []
    num = Accumulator()
    den = Accumulator()
    for k in range(1, depth + 1):
        num.add(measure.level_entropy(k))
        den.add(measure.bases.log_value(k))
        values.append(num.total / den.total)
    w = min(window or default_tail_window(depth), depth)
    tail = values[-w:]
    partials = square_summability_partials(measure.bases, depth)
    return EntropyDimensionReport(
        depth=depth,
        tail_window=w,
        values=tuple(values),
        liminf_estimate=min(tail),
        limsup_estimate=max(tail),
        condition_partials=tuple(partials),
        condition_appears_divergent=condition_appears_divergent(partials),
    )


def cdf(measure: ProductMeasure, x, depth: int):
    """Distribution function bracket (lower, upper) at an exact rational.

    lower sums the measure of all rank-`depth` cylinders strictly left
    of the one containing x; upper adds that cylinder's own mass.  Exact
    rationals whenever the level distributions are rational.
    """
    x = _as_fraction(x, "cdf input")
    if not 0 <= x <= 1:
        raise ValueError(f"cdf input must lie in [0, 1], got {x}")
    if x == 1:
        return (Fraction(1), Fraction(1))
    word = encode(x, measure.bases, depth)
    lower = Fraction(0)
    weight = Fraction(1)
    for k, d in enumerate(word.digits, start=1):
        lower += weight * measure.level_mass_below(k, d)
        weight *= measure.level_prob(k, d)
        if weight == 0:
            break
    return (lower, lower + weight)


def sample(
    measure: ProductMeasure, seed: Union[int, random.Random], depth: int
) -> DigitWord:
    """One independent-digit draw to the given depth.

    Pass a ``random.Random`` to draw several words from one stream; an
    integer seed builds a fresh generator, so equal seeds give equal
    words.
    """
    if not 1 <= depth <= measure.depth:
        raise IndexError(f"depth {depth} outside 1..{measure.depth}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    digits = tuple(measure.sample_digit(k, rng) for k in range(1, depth + 1))
    return DigitWord(digits, measure.bases)
