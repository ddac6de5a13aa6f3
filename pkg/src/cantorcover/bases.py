"""Base sequences for Cantor series expansions.

A base sequence is the rule behind the denominators of a Cantor series:
x = sum_k a_k / (n_1 n_2 ... n_k) with every n_k an integer >= 2.  Four
rules are supported: an explicit finite list, a constant base, the
geometric rule n_k = b^k, and the double-exponential rule n_k = b^(2^k).

The exact value n_k can be astronomically large (the double-exponential
rule at level 60 would not fit in memory), so every consumer that only
needs logarithms must go through ``log_value`` / ``log_prefix``, which
never materialize the integer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple

from .numutil import Accumulator, ln_int

_KINDS = ("explicit", "constant", "power", "double_exponential")


@dataclass(frozen=True)
class BaseSequence:
    """Immutable rule producing the Cantor bases n_1, n_2, ..., n_max_depth."""

    kind: str
    base: Optional[int] = None
    values: Optional[Tuple[int, ...]] = None
    max_depth: int = 64

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown base-sequence kind {self.kind!r}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.kind == "explicit":
            if not self.values:
                raise ValueError("explicit base sequence needs a nonempty value list")
            bad = [v for v in self.values if v < 2]
            if bad:
                raise ValueError(f"all bases must be >= 2, got {bad[:3]}")
            object.__setattr__(self, "values", tuple(int(v) for v in self.values))
            object.__setattr__(self, "max_depth", len(self.values))
        else:
            if self.base is None or self.base < 2:
                raise ValueError("base must be an integer >= 2")

    # -- constructors -------------------------------------------------

    @classmethod
    def explicit(cls, values) -> "BaseSequence":
        return cls(kind="explicit", values=tuple(values))

    @classmethod
    def constant(cls, base: int, max_depth: int = 64) -> "BaseSequence":
        return cls(kind="constant", base=base, max_depth=max_depth)

    @classmethod
    def power(cls, base: int, max_depth: int = 64) -> "BaseSequence":
        """n_k = base^k."""
        return cls(kind="power", base=base, max_depth=max_depth)

    @classmethod
    def double_exponential(cls, base: int, max_depth: int = 16) -> "BaseSequence":
        """n_k = base^(2^k); values explode fast, keep max_depth modest."""
        return cls(kind="double_exponential", base=base, max_depth=max_depth)

    # -- access -------------------------------------------------------

    def _check_level(self, k: int) -> None:
        if not 1 <= k <= self.max_depth:
            raise IndexError(f"level {k} outside 1..{self.max_depth}")

    def value(self, k: int) -> int:
        """Exact n_k.  Materializes the integer; see log_value for big levels."""
        self._check_level(k)
        if self.kind == "explicit":
            return self.values[k - 1]
        if self.kind == "constant":
            return self.base
        if self.kind == "power":
            return self.base ** k
        return self.base ** (1 << k)

    def log_value(self, k: int) -> float:
        """ln n_k without constructing n_k."""
        self._check_level(k)
        if self.kind == "explicit":
            return ln_int(self.values[k - 1])
        if self.kind == "constant":
            return ln_int(self.base)
        if self.kind == "power":
            return k * ln_int(self.base)
        return float(1 << k) * ln_int(self.base)

    def prefix_product(self, k: int) -> int:
        """Exact n_1 * n_2 * ... * n_k (1 for k = 0)."""
        if k == 0:
            return 1
        self._check_level(k)
        p = 1
        for i in range(1, k + 1):
            p *= self.value(i)
        return p

    def log_prefix(self, k: int) -> float:
        """Compensated ln(n_1 ... n_k), 0.0 for k = 0."""
        if k == 0:
            return 0.0
        self._check_level(k)
        acc = Accumulator()
        for i in range(1, k + 1):
            acc.add(self.log_value(i))
        return acc.total

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "values": list(self.values)}
        return {"kind": self.kind, "base": self.base, "max_depth": self.max_depth}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BaseSequence":
        kind = d.get("kind")
        if kind == "explicit":
            return cls.explicit(d["values"])
        if kind in ("constant", "power", "double_exponential"):
            kwargs = {}
            if "max_depth" in d:
                kwargs["max_depth"] = int(d["max_depth"])
            return cls(kind=kind, base=int(d["base"]), **kwargs)
        raise ValueError(f"unknown base-sequence kind {kind!r}")

    @classmethod
    def from_json(cls, s: str) -> "BaseSequence":
        return cls.from_dict(json.loads(s))
