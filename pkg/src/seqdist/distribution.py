"""Distribution diagnostics, quantization, and Banach-limit estimation.

A prefix is "simply distributed" at finite scale when it takes few distinct
values and each value's windowed density has settled uniformly in the
offset; the point estimate of the unique Banach limit is then the weighted
sum of the values.  General prefixes are handled by quantizing onto a
partition (piecewise-constant, left-endpoint rule) and driving the mesh
down, with the mesh itself serving as a rigorous sup-norm error term.

Weighted sums are accumulated in exact rational arithmetic and converted to
float only at the report boundary, so periodic fixtures whose counts are
exact produce exactly representable estimates.

Set weights are supported for finite unions of half-open intervals only.
Every weight actually used downstream is an interval weight, and nothing
beyond intervals is verifiable from data; there is deliberately no
measure-theoretic extension (windowed densities are finitely additive but
provably not countably additive, see the CLI's demo command).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InvalidSpecError,
    NotSimplyDistributedError,
    OverweightError,
    ValueOutOfBoundsError,
)
from .sequences import Prefix, SequenceSpec, materialize
from .weights import (
    DEFAULT_TOLERANCES,
    Tolerances,
    WeightEstimate,
    weight_from_membership,
)
from .windows import Membership, WindowSchedule

# Verdicts shared across estimation paths.
ALMOST_CONVERGENT = "almost-convergent"
NOT_ALMOST_CONVERGENT = "not-almost-convergent"
INCONCLUSIVE = "inconclusive"

METHOD_SIMPLE_SUM = "simple-sum"
METHOD_WEIGHT_BOUNDS = "weight-bounds"
METHOD_QUANTIZATION = "quantization"
METHOD_CESARO = "cesaro"

DEFAULT_VALUE_CAP = 64
DEFAULT_MESHES = (1.0 / 16.0, 1.0 / 64.0)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint half-open intervals [a, b), sorted by a.

    ``top_closed`` additionally includes the right endpoint of the last
    interval, which is how a cell touching the sequence bound +M gets to
    contain +M itself (half-open cells alone can never cover the supremum).
    """

    intervals: tuple[tuple[float, float], ...]
    top_closed: bool = False

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in ivs:
            if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
                raise InvalidSpecError(f"need finite a < b, got [{a}, {b})")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise InvalidSpecError("intervals must be disjoint and sorted")
        object.__setattr__(self, "intervals", ivs)

    def contains(self, values: np.ndarray) -> np.ndarray:
        mask = np.zeros(np.shape(values), dtype=bool)
        for a, b in self.intervals:
            mask |= (values >= a) & (values < b)
        if self.top_closed and self.intervals:
            mask |= values == self.intervals[-1][1]
        return mask


def interval_about(center: float, epsilon: float, bound: float) -> IntervalSet:
    """[center - epsilon, center + epsilon) clipped to [-bound, bound].

    When the window sticks out past +bound the clipped cell is closed at the
    top, so a sequence sitting exactly on its bound is still covered.
    Windows entirely outside, or degenerating to a point after clipping,
    come back empty.
    """
    if epsilon <= 0:
        raise InvalidSpecError("epsilon must be positive")
    lo = max(center - epsilon, -bound)
    hi = min(center + epsilon, bound)
    if lo >= hi:
        return IntervalSet(intervals=())
    return IntervalSet(intervals=((lo, hi),), top_closed=center + epsilon > bound)


@dataclass(frozen=True)
class Partition:
    """Grid a_0 < a_1 < ... < a_m used for piecewise-constant quantization."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        if len(pts) < 2 or any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidSpecError("partition needs >= 2 strictly increasing points")
        object.__setattr__(self, "points", pts)

    @property
    def lo(self) -> float:
        return self.points[0]

    @property
    def hi(self) -> float:
        return self.points[-1]

    @property
    def mesh(self) -> float:
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    @classmethod
    def uniform(cls, lo: float, hi: float, cells: int) -> "Partition":
        if cells < 1:
            raise InvalidSpecError("need at least one cell")
        return cls(points=tuple(np.linspace(lo, hi, cells + 1)))

    @classmethod
    def with_mesh(cls, lo: float, hi: float, mesh: float) -> "Partition":
        """Uniform partition of [lo, hi] with spacing <= mesh."""
        if mesh <= 0 or hi <= lo:
            raise InvalidSpecError("need mesh > 0 and hi > lo")
        return cls.uniform(lo, hi, int(math.ceil((hi - lo) / mesh)))


@dataclass(frozen=True)
class SimpleReport:
    """Distinct values of a prefix with per-value weight estimates.

    ``simply_distributed`` is true when every per-value weight converged and
    the weight midpoints sum to 1 within the gap tolerance.  When the number
    of distinct values exceeds the cap the verdict is immediately false and
    no weights are estimated (``residual_mass`` is then 1).
    """

    values: tuple[float, ...]
    weights: tuple[WeightEstimate, ...]
    residual_mass: Fraction
    simply_distributed: bool
    distinct_count: int
    weight_sum: Fraction | None


@dataclass(frozen=True)
class BanachEstimate:
    """A Banach-limit estimate with its enclosing interval.

    ``point`` always lies inside [lower, upper]: it is the weighted sum of
    weight midpoints and the interval is the weighted sum stretched to the
    lower/upper weights (positive values paired with lower weights on the
    left end, negative values the other way around).  ``error_bound``, when
    present, additionally covers the sup-norm distance to the sequence that
    was actually analyzed (the quantization mesh).
    """

    point: float
    lower: float
    upper: float
    error_bound: float | None
    method: str
    verdict: str


def set_weight(
    p: Prefix,
    region: IntervalSet,
    schedule: WindowSchedule | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WeightEstimate:
    """Weight estimate of {n : x(n) in region}.

    The gap field is the uniformity diagnostic: a small gap across the tail
    rows is consistent with the windowed density of the region converging
    uniformly in the offset.  An empty region yields exactly (0, 0).
    """
    sched = schedule if schedule is not None else WindowSchedule.geometric(p.horizon)
    m = Membership.from_mask(region.contains(p.values))
    return weight_from_membership(m, sched, tolerances)


def _merge_values(
    uniq: np.ndarray, counts: np.ndarray, tol: float
) -> list[tuple[float, np.ndarray]]:
    """Group sorted distinct values whose neighbor gaps are <= tol.

    Representative = the most frequent member (ties toward the smaller
    value)."""
    groups: list[np.ndarray] = []
    start = 0
    for i in range(1, uniq.size + 1):
        if i == uniq.size or uniq[i] - uniq[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    out = []
    for g in groups:
        best = g[np.lexsort((uniq[g], -counts[g]))[0]]
        out.append((float(uniq[best]), g))
    return out


def is_simply_distributed(
    p: Prefix,
    value_tolerance: float = 0.0,
    schedule: WindowSchedule | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    value_cap: int = DEFAULT_VALUE_CAP,
) -> SimpleReport:
    """Check whether the prefix looks finitely-valued with settled weights."""
    if value_tolerance < 0:
        raise InvalidSpecError("value_tolerance must be >= 0")
    sched = schedule if schedule is not None else WindowSchedule.geometric(p.horizon)
    uniq, inverse, counts = np.unique(p.values, return_inverse=True, return_counts=True)
    groups = _merge_values(uniq, counts, value_tolerance)
    if len(groups) > value_cap:
        return SimpleReport(
            values=(),
            weights=(),
            residual_mass=Fraction(1),
            simply_distributed=False,
            distinct_count=len(groups),
            weight_sum=None,
        )
    group_of = np.empty(uniq.size, dtype=np.int64)
    for gid, (_, members) in enumerate(groups):
        group_of[members] = gid
    elem_group = group_of[inverse]
    weights = []
    for gid in range(len(groups)):
        m = Membership.from_mask(elem_group == gid)
        weights.append(weight_from_membership(m, sched, tolerances))
    total = sum((w.midpoint for w in weights), Fraction(0))
    verdict = all(w.converged for w in weights) and abs(total - 1) <= tolerances.gap
    return SimpleReport(
        values=tuple(v for v, _ in groups),
        weights=tuple(weights),
        residual_mass=Fraction(0),
        simply_distributed=bool(verdict),
        distinct_count=len(groups),
        weight_sum=total,
    )


def quantize(p: Prefix, partition: Partition) -> Prefix:
    """Snap every term to the left endpoint of its partition cell.

    Cells are half-open [a_j, a_{j+1}) except the top cell, which is closed
    so a term sitting exactly on the partition's upper end still maps to the
    last left endpoint.  The sup-norm error is below the mesh for every term
    strictly inside the grid; a term exactly at the top can realize the full
    width of the final cell, so keep that cell no wider than the rest if the
    strict bound matters.
    """
    vals = p.values
    if vals.size and (float(vals.min()) < partition.lo or float(vals.max()) > partition.hi):
        raise ValueOutOfBoundsError(
            f"values outside partition span [{partition.lo}, {partition.hi}]"
        )
    pts = np.asarray(partition.points)
    idx = np.searchsorted(pts, vals, side="right") - 1
    idx = np.minimum(idx, len(pts) - 2)
    bound = max(p.bound, abs(partition.lo), abs(partition.hi))
    return Prefix(values=pts[idx], horizon=p.horizon, bound=bound)


def _weighted_point(pairs) -> Fraction:
    total = Fraction(0)
    for value, w in pairs:
        total += Fraction(value) * w.midpoint
    return total


def _bounds_fractions(pairs) -> tuple[Fraction, Fraction]:
    lower = Fraction(0)
    upper = Fraction(0)
    for value, w in pairs:
        v = Fraction(value)
        if v > 0:
            lower += v * w.w_l_hat
            upper += v * w.w_u_hat
        elif v < 0:
            lower += v * w.w_u_hat
            upper += v * w.w_l_hat
    return lower, upper


def banach_limit_bounds(values_and_weights) -> tuple[float, float]:
    """Two-sided enclosure of every Banach limit from value weights.

    lower = sum of positive values times their lower weights plus negative
    values times their upper weights; upper mirrors it.  Zero values drop
    out of both ends.  Exact in rational arithmetic, rounded only on return.
    """
    pairs = list(values_and_weights)
    vals = [float(v) for v, _ in pairs]
    if len(set(vals)) != len(vals):
        raise InvalidSpecError("values must be distinct")
    lower, upper = _bounds_fractions(pairs)
    return float(lower), float(upper)


def weight_bounds_estimate(values_and_weights) -> BanachEstimate:
    """Enclosure-style estimate from (value, weight) pairs.

    ``point`` is the weighted sum of midpoints, which is exactly the
    midpoint of [lower, upper].  The verdict is almost-convergent when every
    weight converged (settled weights for every value force a unique limit
    inside the enclosure) and inconclusive otherwise.
    """
    pairs = list(values_and_weights)
    vals = [float(v) for v, _ in pairs]
    if len(set(vals)) != len(vals):
        raise InvalidSpecError("values must be distinct")
    lower, upper = _bounds_fractions(pairs)
    converged = all(w.converged for _, w in pairs)
    return BanachEstimate(
        point=float(_weighted_point(pairs)),
        lower=float(lower),
        upper=float(upper),
        error_bound=float((upper - lower) / 2),
        method=METHOD_WEIGHT_BOUNDS,
        verdict=ALMOST_CONVERGENT if converged else INCONCLUSIVE,
    )


def banach_limit_simply(
    report: SimpleReport,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> BanachEstimate:
    """Point estimate sum(value * weight midpoint) for a simple prefix."""
    if not report.simply_distributed:
        raise NotSimplyDistributedError(
            "prefix did not pass the simply-distributed check"
        )
    pairs = list(zip(report.values, report.weights))
    point = _weighted_point(pairs)
    lower, upper = _bounds_fractions(pairs)
    return BanachEstimate(
        point=float(point),
        lower=float(lower),
        upper=float(upper),
        error_bound=None,
        method=METHOD_SIMPLE_SUM,
        verdict=ALMOST_CONVERGENT,
    )


def banach_limit_via_quantization(
    spec: SequenceSpec,
    horizon: int,
    mesh_schedule=DEFAULT_MESHES,
    schedule: WindowSchedule | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> BanachEstimate:
    """Estimate the Banach limit by quantizing at successively finer meshes.

    Each mesh yields a finitely-valued prefix whose cells act as the values;
    the point estimate is the weighted sum over the finest mesh and the
    error bound is that mesh (sup-norm distance to the true prefix) plus the
    half-width of the weight-bounds interval.  The verdict is
    almost-convergent only when every per-cell weight converged at every
    mesh and successive point estimates moved by less than the sum of the
    two meshes involved; weights that refuse to settle leave the verdict
    inconclusive.
    """
    meshes = [float(m) for m in mesh_schedule]
    if not meshes or any(m <= 0 for m in meshes):
        raise InvalidSpecError("meshes must be positive")
    if any(b >= a for a, b in zip(meshes, meshes[1:])):
        raise InvalidSpecError("meshes must be strictly decreasing")
    p = materialize(spec, horizon)
    sched = schedule if schedule is not None else WindowSchedule.geometric(p.horizon)
    if p.bound == 0:
        return BanachEstimate(
            point=0.0, lower=0.0, upper=0.0, error_bound=0.0,
            method=METHOD_QUANTIZATION, verdict=ALMOST_CONVERGENT,
        )
    points: list[Fraction] = []
    all_converged = True
    lower = upper = Fraction(0)
    for mesh in meshes:
        part = Partition.with_mesh(-p.bound, p.bound, mesh)
        q = quantize(p, part)
        # Cell count bounds the distinct values, so the cap never bites here.
        rep = is_simply_distributed(
            q, 0.0, sched, tolerances, value_cap=len(part.points)
        )
        pairs = list(zip(rep.values, rep.weights))
        points.append(_weighted_point(pairs))
        lower, upper = _bounds_fractions(pairs)
        all_converged = all_converged and all(w.converged for w in rep.weights)
    steady = all(
        abs(float(b - a)) < meshes[i] + meshes[i + 1]
        for i, (a, b) in enumerate(zip(points, points[1:]))
    )
    half_width = (upper - lower) / 2
    verdict = ALMOST_CONVERGENT if (all_converged and steady) else INCONCLUSIVE
    return BanachEstimate(
        point=float(points[-1]),
        lower=float(lower),
        upper=float(upper),
        error_bound=meshes[-1] + float(half_width),
        method=METHOD_QUANTIZATION,
        verdict=verdict,
    )


def limit_point_weight(
    known,
    p_candidate: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WeightEstimate:
    """Complement weight at the unique accumulation point of the values.

    When every value except ``p_candidate`` carries a settled weight, the
    candidate's weight is pinned by total mass 1: its lower estimate is
    1 minus the sum of upper weights (clamped at 0) and its upper estimate
    1 minus the sum of lower weights.  An empty ``known`` list puts the
    whole mass at the candidate.
    """
    pairs = list(known)
    for _, w in pairs:
        if not w.converged:
            raise InvalidSpecError("known weights must be converged")
    sum_l = sum((w.w_l_hat for _, w in pairs), Fraction(0))
    sum_u = sum((w.w_u_hat for _, w in pairs), Fraction(0))
    if sum_l > 1 + tolerances.gap:
        raise OverweightError(f"lower weights already sum to {float(sum_l)} > 1")
    if sum_u > 1 + tolerances.gap:
        raise OverweightError(f"upper weights already sum to {float(sum_u)} > 1")
    w_l = max(Fraction(0), 1 - sum_u)
    w_u = max(Fraction(0), min(Fraction(1), 1 - sum_l))
    return WeightEstimate(
        w_l_hat=w_l,
        w_u_hat=w_u,
        gap=w_u - w_l,
        per_window=None,
        converged=True,
        tail_rows_used=0,
    )
