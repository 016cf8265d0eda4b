"""Finite-horizon distribution and almost-convergence analysis of bounded
real sequences: exact sliding-window extrema, sub-limit weights,
simply/properly-distributed diagnostics, quantized Banach-limit estimates,
and uniform-Cesaro verdicts.
"""

from .errors import (
    DegenerateEpsilonError,
    IndexOutOfRangeError,
    InvalidSpecError,
    NotSimplyDistributedError,
    OverweightError,
    ResourceLimitError,
    SeqdistError,
    ValueOutOfBoundsError,
    WindowTooLongError,
)
from .sequences import (
    FIXTURE_NAMES,
    GOLDEN,
    Prefix,
    SequenceSpec,
    affine_combo,
    doubling_blocks,
    dyadic_harmonic,
    eval_at,
    fixture,
    materialize,
    ones_then_zeros,
    periodic,
    rotation,
    shift,
    table,
)
from .windows import (
    CesaroProfile,
    CesaroRow,
    DensityProfile,
    DensityRow,
    Membership,
    WindowSchedule,
    cesaro_profile,
    count_extrema,
    density_profile,
    mean_extrema,
    naive_count_extrema,
    window_counts,
)
from .weights import (
    DEFAULT_TOLERANCES,
    IndexSet,
    SubLimitCluster,
    SubLimitReport,
    Tolerances,
    WeightEstimate,
    detect_sublimits,
    essential_indices,
    exact_weight,
    sublimit_weight,
    subsequence_weights,
    weight_from_membership,
)
from .distribution import (
    ALMOST_CONVERGENT,
    DEFAULT_MESHES,
    DEFAULT_VALUE_CAP,
    INCONCLUSIVE,
    NOT_ALMOST_CONVERGENT,
    BanachEstimate,
    IntervalSet,
    Partition,
    SimpleReport,
    banach_limit_bounds,
    banach_limit_simply,
    banach_limit_via_quantization,
    interval_about,
    is_simply_distributed,
    limit_point_weight,
    quantize,
    set_weight,
    weight_bounds_estimate,
)
from .lorentz import CrossValidation, LorentzVerdict, cross_validate, lorentz_verdict

__version__ = "0.1.0"

__all__ = [
    "ALMOST_CONVERGENT",
    "BanachEstimate",
    "CesaroProfile",
    "CesaroRow",
    "CrossValidation",
    "DEFAULT_MESHES",
    "DEFAULT_TOLERANCES",
    "DEFAULT_VALUE_CAP",
    "DegenerateEpsilonError",
    "DensityProfile",
    "DensityRow",
    "FIXTURE_NAMES",
    "GOLDEN",
    "INCONCLUSIVE",
    "IndexOutOfRangeError",
    "IndexSet",
    "IntervalSet",
    "InvalidSpecError",
    "LorentzVerdict",
    "Membership",
    "NOT_ALMOST_CONVERGENT",
    "NotSimplyDistributedError",
    "OverweightError",
    "Partition",
    "Prefix",
    "ResourceLimitError",
    "SeqdistError",
    "SequenceSpec",
    "SimpleReport",
    "SubLimitCluster",
    "SubLimitReport",
    "Tolerances",
    "ValueOutOfBoundsError",
    "WeightEstimate",
    "WindowSchedule",
    "WindowTooLongError",
    "affine_combo",
    "banach_limit_bounds",
    "banach_limit_simply",
    "banach_limit_via_quantization",
    "cesaro_profile",
    "count_extrema",
    "cross_validate",
    "density_profile",
    "detect_sublimits",
    "doubling_blocks",
    "dyadic_harmonic",
    "essential_indices",
    "eval_at",
    "exact_weight",
    "fixture",
    "interval_about",
    "is_simply_distributed",
    "limit_point_weight",
    "lorentz_verdict",
    "materialize",
    "mean_extrema",
    "naive_count_extrema",
    "ones_then_zeros",
    "periodic",
    "quantize",
    "rotation",
    "set_weight",
    "shift",
    "sublimit_weight",
    "subsequence_weights",
    "table",
    "weight_bounds_estimate",
    "weight_from_membership",
    "window_counts",
]
