"""End-to-end report bundles for the headline quantitative claims.

Each target wires codec, set construction, measures and the dimension
engine into one deterministic run that prints a pass/fail line per
check and emits machine-readable tables:

* sqrt-set      -- the square-root digit set over n_k = 4^k: merged-run
                   half-volumes collapse like 2^(-k/2) while the mass
                   certificate pins the cylinder-family half-measure at 1.
* boosted-set   -- the inflated variant: half-volumes still collapse at
                   levels 2^s, yet splitting the inflated level into 2^m
                   blocks certifies a cylinder-family half-measure >= 2^m
                   for every m, i.e. the value is unbounded.
* thinned-set   -- bases with a positive log-ratio limit: selecting and
                   thinning heavy levels separates the plain dimension
                   (upper bound 2/(2+c)) from the cylinder-family
                   dimension (lower bound (4+c)/(4+3c)).
* entropy-dim   -- entropy-over-log-length dimension of independent-digit
                   measures, with the square-sum validity flag.
* power-set     -- the exponent-p/q generalization: budgets reproduce the
                   boosted set at p/q = 1/2 and tune the critical
                   exponent to p/q.

Bundles embed their full configuration and the package version; output
bytes depend on nothing else.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .bases import BaseSequence
from .codec import DigitWord
from .digit_sets import (
    boosted_set,
    growth_band_holds,
    power_set,
    select_heavy_levels,
    separation_holds,
    sqrt_set,
    thinned_set,
)
from .dimension import (
    billingsley_ratio,
    critical_exponent,
    mass_distribution_certificate,
    merged_run_cover_volume,
    thinning_dimension_bounds,
)
from .measure import (
    boosted_split_pieces,
    entropy_dimension,
    explicit_measure,
    uniform_full_measure,
    uniform_measure_on,
)
from .numutil import LN2

TARGETS = ("sqrt-set", "boosted-set", "thinned-set", "entropy-dim", "power-set")

_DEFAULT_DEPTH = {
    "sqrt-set": 30,
    "boosted-set": 5,  # number of inflated levels 2^1 .. 2^5
    "thinned-set": 12,
    "entropy-dim": 60,
    "power-set": 64,
}


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a reproduce run's output bytes."""

    target: str
    depth: int
    splits: int = 8
    c: float = 1.0
    delta: float = 0.1
    epsilon: float = 0.1
    tol: float = 0.01
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Bundle:
    """A reproduce run: checks, inline report, and CSV tables."""

    config: RunConfig
    checks: List[dict] = field(default_factory=list)
    report: dict = field(default_factory=dict)
    tables: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def check(self, name: str, passed: bool, detail: str) -> None:
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    def check_lines(self) -> List[str]:
        return [
            f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}: {c['detail']}"
            for c in self.checks
        ]

    def report_json(self) -> str:
        payload = {
            "version": __version__,
            "config": self.config.to_dict(),
            "passed": self.passed,
            "checks": self.checks,
            "report": self.report,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def write(self, out_dir) -> List[Path]:
        """Write report.json and one CSV per table; returns the paths."""
        root = Path(out_dir) / self.config.target
        root.mkdir(parents=True, exist_ok=True)
        paths = []
        p = root / "report.json"
        p.write_text(self.report_json())
        paths.append(p)
        for name, text in sorted(self.tables.items()):
            p = root / f"{name}.csv"
            p.write_text(text)
            paths.append(p)
        return paths


def _csv(header: List[str], rows: List[List]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(
            [f"{v:.15g}" if isinstance(v, float) else v for v in row]
        )
    return buf.getvalue()


def _zero_word(bases: BaseSequence, rank: int) -> DigitWord:
    return DigitWord((0,) * rank, bases)


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------


def _run_sqrt_set(cfg: RunConfig) -> Bundle:
    bundle = Bundle(config=cfg)
    depth = cfg.depth
    ruleset = sqrt_set(depth)
    measure = uniform_measure_on(ruleset)

    rows = []
    max_vol_err = 0.0
    ratios_ok = True
    exponents_ok = True
    for k in range(1, depth + 1):
        log2_vol = merged_run_cover_volume(ruleset, k, 0.5) / LN2
        expect = -k / 2
        max_vol_err = max(max_vol_err, abs(log2_vol - expect))
        ratio = billingsley_ratio(measure, _zero_word(ruleset.bases, k))
        crit = critical_exponent(ruleset, k)
        ratios_ok = ratios_ok and ratio == 0.5
        exponents_ok = exponents_ok and crit == 0.5
        rows.append([k, log2_vol, expect, ratio, crit])
    bundle.tables["half_volume"] = _csv(
        ["k", "log2_half_volume", "expected", "log_measure_ratio", "critical_exponent"],
        rows,
    )
    bundle.check(
        "merged-run half-volume collapses like 2^(-k/2)",
        max_vol_err <= 1e-9,
        f"max |log2 volume + k/2| = {max_vol_err:.3g} over k=1..{depth}",
    )

    cert = mass_distribution_certificate(measure, ruleset, depth, Fraction(1, 2))
    bundle.check(
        "mass certificate at alpha=1/2 holds with equality",
        cert.holds and abs(cert.worst_ratio - 1.0) <= 1e-12,
        f"holds={cert.holds}, worst mu/length^alpha = {cert.worst_ratio!r}",
    )
    bundle.check(
        "log-measure ratio is exactly 1/2 at every rank",
        ratios_ok,
        f"checked ranks 1..{depth}",
    )
    bundle.check(
        "cylinder-cover critical exponent is exactly 1/2",
        exponents_ok,
        f"checked ranks 1..{depth}",
    )
    bundle.report = {
        "depth": depth,
        "certificate": cert.to_dict(),
        "set": ruleset.to_dict(),
    }
    return bundle


def _run_boosted_set(cfg: RunConfig) -> Bundle:
    bundle = Bundle(config=cfg)
    s_max = cfg.depth
    depth = 2 ** s_max
    ruleset = boosted_set(depth)

    rows = []
    max_vol_err = 0.0
    for s in range(1, s_max + 1):
        k = 2 ** s
        log2_vol = merged_run_cover_volume(ruleset, k, 0.5) / LN2
        expect = -(2 ** s - s * s) / 2
        max_vol_err = max(max_vol_err, abs(log2_vol - expect))
        rows.append([s, k, log2_vol, expect])
    bundle.tables["half_volume"] = _csv(
        ["s", "rank", "log2_half_volume", "expected"], rows
    )
    bundle.check(
        "merged-run half-volume at inflated levels matches 2^(-(2^s - s^2)/2)",
        max_vol_err <= 1e-9,
        f"max deviation {max_vol_err:.3g} over s=1..{s_max}",
    )

    split_rows = []
    all_hold = True
    best_bound = 0
    for m in range(1, cfg.splits + 1):
        pieces = boosted_split_pieces(m)
        holds = True
        for piece_set, piece_measure in pieces:
            cert = mass_distribution_certificate(
                piece_measure, piece_set, 2 ** m, Fraction(1, 2)
            )
            holds = holds and cert.holds
        all_hold = all_hold and holds
        if holds:
            best_bound = 2 ** m
        split_rows.append([m, len(pieces), holds, 2 ** m])
    bundle.tables["split_certificates"] = _csv(
        ["m", "pieces", "all_hold", "half_measure_lower_bound"], split_rows
    )
    bundle.check(
        f"split certificates hold for m=1..{cfg.splits}",
        all_hold,
        f"certified cylinder-family half-measure >= {best_bound}",
    )
    bundle.report = {
        "depth": depth,
        "inflated_levels": list(ruleset.special_levels),
        "half_measure_lower_bound": best_bound,
    }
    return bundle


def _run_thinned_set(cfg: RunConfig) -> Bundle:
    bundle = Bundle(config=cfg)
    depth = cfg.depth
    bases = BaseSequence.double_exponential(2, max_depth=depth)
    selection = select_heavy_levels(bases, cfg.c, cfg.delta, cfg.epsilon, depth)

    band_ok = all(
        growth_band_holds(bases, k, cfg.c, cfg.delta) for k in selection.candidates
    )
    sep_ok = all(
        separation_holds(bases, prev, k, cfg.c)
        for prev, k in zip((0,) + selection.selected, selection.selected)
    )
    bundle.check(
        "selected levels re-certify the growth band and separation tests",
        band_ok and sep_ok,
        f"candidates={list(selection.candidates)}, selected={list(selection.selected)}",
    )

    ruleset = thinned_set(bases, selection, depth)
    measure = uniform_measure_on(ruleset)
    bounds = thinning_dimension_bounds(cfg.c, cfg.delta)

    rows = []
    ratio_ok = True
    for k in selection.selected:
        crit = critical_exponent(ruleset, k)
        ratio = billingsley_ratio(measure, _zero_word(bases, k))
        ratio_ok = ratio_ok and ratio >= bounds.lower_with_slack - 1e-9
        rows.append([k, crit, ratio])
    bundle.tables["selected_levels"] = _csv(
        ["rank", "critical_exponent", "log_measure_ratio"], rows
    )

    deepest_crit = rows[-1][1] if rows else float("nan")
    bundle.check(
        "deepest critical exponent is within 0.05 of the upper bound",
        bool(rows) and deepest_crit <= bounds.upper + 0.05,
        f"exponent {deepest_crit:.6f} vs upper bound {bounds.upper:.6f}",
    )
    bundle.check(
        "log-measure ratios at selected levels clear the slack lower bound",
        ratio_ok,
        f"lower bound with slack = {bounds.lower_with_slack:.6f}",
    )
    bundle.report = {
        "bounds": bounds.to_dict(),
        "selection": {
            "c": cfg.c,
            "delta": cfg.delta,
            "epsilon": cfg.epsilon,
            "first_stable": selection.first_stable,
            "first_small": selection.first_small,
            "start": selection.start,
            "candidates": list(selection.candidates),
            "selected": list(selection.selected),
        },
    }
    return bundle


def _run_entropy_dim(cfg: RunConfig) -> Bundle:
    bundle = Bundle(config=cfg)
    depth = cfg.depth

    uniform_cases = {
        "constant3": BaseSequence.constant(3, max_depth=depth),
        "power5": BaseSequence.power(5, max_depth=depth),
    }
    uniform_ok = True
    for name, bases in uniform_cases.items():
        rep = entropy_dimension(uniform_full_measure(bases, depth), depth)
        uniform_ok = uniform_ok and all(v == 1.0 for v in rep.values)
    bundle.check(
        "uniform digits give entropy dimension exactly 1",
        uniform_ok,
        f"bases: {', '.join(uniform_cases)}",
    )

    sqrt_measure = uniform_measure_on(sqrt_set(depth))
    rep_sqrt = entropy_dimension(sqrt_measure, depth)
    bundle.check(
        "square-root digit budget gives entropy dimension exactly 1/2",
        all(v == 0.5 for v in rep_sqrt.values),
        f"values constant at {rep_sqrt.values[-1]!r}",
    )

    half_vectors = [(Fraction(1, 2), Fraction(1, 2), Fraction(0), Fraction(0))] * depth
    rep_half = entropy_dimension(
        explicit_measure(BaseSequence.constant(4, max_depth=depth), half_vectors), depth
    )
    bundle.check(
        "two live digits out of four give entropy dimension exactly 1/2",
        all(v == 0.5 for v in rep_half.values),
        f"values constant at {rep_half.values[-1]!r}",
    )

    rep_dexp = entropy_dimension(
        uniform_full_measure(BaseSequence.double_exponential(2, max_depth=depth), depth),
        depth,
    )
    rep_const = entropy_dimension(
        uniform_full_measure(BaseSequence.constant(2, max_depth=depth), depth), depth
    )
    bundle.check(
        "square-sum validity flag separates the base families",
        rep_dexp.condition_appears_divergent and not rep_const.condition_appears_divergent,
        "divergent for doubly exponential bases, convergent for constant bases",
    )

    rows = [
        [k, rep_sqrt.values[k - 1], rep_half.values[k - 1], rep_dexp.values[k - 1],
         rep_dexp.condition_partials[k - 1], rep_const.condition_partials[k - 1]]
        for k in range(1, depth + 1)
    ]
    bundle.tables["entropy_dimension"] = _csv(
        [
            "k",
            "sqrt_set_value",
            "half_vector_value",
            "double_exponential_value",
            "double_exponential_partial",
            "constant2_partial",
        ],
        rows,
    )
    bundle.report = {
        "liminf_sqrt": rep_sqrt.liminf_estimate,
        "liminf_half_vector": rep_half.liminf_estimate,
        "double_exponential_divergent": rep_dexp.condition_appears_divergent,
        "constant2_divergent": rep_const.condition_appears_divergent,
    }
    return bundle


def _run_power_set(cfg: RunConfig) -> Bundle:
    bundle = Bundle(config=cfg)
    depth = cfg.depth

    half = power_set(1, 2, depth)
    boosted = boosted_set(depth)
    same = all(half.level(k) == boosted.level(k) for k in range(1, depth + 1))
    bundle.check(
        "exponent 1/2 reproduces the boosted set level by level",
        same,
        f"levels 1..{depth}",
    )

    rows = []
    exps_ok = True
    for p, q in ((1, 3), (2, 3)):
        rs = power_set(p, q, depth)
        crit = critical_exponent(rs, depth)
        target = p / q
        exps_ok = exps_ok and abs(crit - target) <= 0.02
        rows.append([f"{p}/{q}", crit, target, abs(crit - target)])
    bundle.tables["critical_exponents"] = _csv(
        ["exponent", "critical_exponent", "target", "deviation"], rows
    )
    bundle.check(
        "critical exponents land within 0.02 of the digit-budget exponent",
        exps_ok,
        f"depth {depth}",
    )
    bundle.report = {"depth": depth}
    return bundle


_RUNNERS = {
    "sqrt-set": _run_sqrt_set,
    "boosted-set": _run_boosted_set,
    "thinned-set": _run_thinned_set,
    "entropy-dim": _run_entropy_dim,
    "power-set": _run_power_set,
}


def reproduce(target: str, depth: Optional[int] = None, **knobs) -> Bundle:
    """Run one report bundle; see the module docstring for the targets."""
    if target not in _RUNNERS:
        raise ValueError(f"unknown target {target!r}; choose from {TARGETS}")
    cfg = RunConfig(
        target=target, depth=depth or _DEFAULT_DEPTH[target], **knobs
    )
    if cfg.depth < 1:
        raise ValueError("depth must be >= 1")
    return _RUNNERS[target](cfg)
