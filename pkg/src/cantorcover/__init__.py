"""Cantor series expansions, cylinder coverings, and singular measures.

Exact arithmetic end to end: points are rationals, cylinders carry exact
endpoints plus compensated log-lengths, digit-restricted sets and
product measures stay in integer/rational form wherever the constructions
are dyadic, and every alpha-volume is evaluated in log space.
"""

from .bases import BaseSequence
from .codec import Cylinder, DigitWord, cylinder_of, decode, encode, word_at_index
from .digit_sets import (
    FULL,
    DigitRuleSet,
    LevelSelection,
    boosted_set,
    full_set,
    power_schedule_set,
    power_set,
    select_heavy_levels,
    sqrt_set,
    thinned_set,
)
from .dimension import (
    CertificateReport,
    CoveringReport,
    DimensionBounds,
    billingsley_ratio,
    covering_report,
    critical_exponent,
    cylinder_cover_volume,
    dp_optimal_cylinder_cover,
    mass_distribution_certificate,
    merged_run_cover_volume,
    thinning_dimension_bounds,
)
from .faithfulness import (
    FAITHFUL_TREND,
    INCONCLUSIVE,
    NON_FAITHFUL_TREND,
    FaithfulnessReport,
    faithfulness_report,
    faithfulness_verdict,
    interval_cylinder_cover,
    limsup_estimate,
    ratio_sequence,
    square_summability_partials,
)
from .measure import (
    EntropyDimensionReport,
    ProductMeasure,
    boosted_split_pieces,
    cdf,
    cylinder_log_measure,
    cylinder_measure,
    entropy_dimension,
    entropy_sequence,
    explicit_measure,
    sample,
    uniform_full_measure,
    uniform_measure_on,
)

__version__ = "0.1.0"

__all__ = [
    "BaseSequence",
    "Cylinder",
    "DigitWord",
    "cylinder_of",
    "decode",
    "encode",
    "word_at_index",
    "FULL",
    "DigitRuleSet",
    "LevelSelection",
    "boosted_set",
    "full_set",
    "power_schedule_set",
    "power_set",
    "select_heavy_levels",
    "sqrt_set",
    "thinned_set",
    "CertificateReport",
    "CoveringReport",
    "DimensionBounds",
    "billingsley_ratio",
    "covering_report",
    "critical_exponent",
    "cylinder_cover_volume",
    "dp_optimal_cylinder_cover",
    "mass_distribution_certificate",
    "merged_run_cover_volume",
    "thinning_dimension_bounds",
    "FAITHFUL_TREND",
    "INCONCLUSIVE",
    "NON_FAITHFUL_TREND",
    "FaithfulnessReport",
    "faithfulness_report",
    "faithfulness_verdict",
    "interval_cylinder_cover",
    "limsup_estimate",
    "ratio_sequence",
    "square_summability_partials",
    "EntropyDimensionReport",
    "ProductMeasure",
    "boosted_split_pieces",
    "cdf",
    "cylinder_log_measure",
    "cylinder_measure",
    "entropy_dimension",
    "entropy_sequence",
    "explicit_measure",
    "sample",
    "uniform_full_measure",
    "uniform_measure_on",
    "__version__",
]
