"""Sub-limit detection and upper/lower weight estimation.

The upper (lower) weight of a subsequence is the limsup (liminf), over
window length n, of the largest (smallest) windowed density of its index
set.  A prefix cannot take n to infinity, so the estimators here surrogate
the limit superior/inferior with the extreme densities over the last few
rows of a window schedule; using a tail window rather than the single last
row captures oscillation, since the plain limit need not exist.

All weight values are exact rationals (window count over window length);
convergence flags are the only place tolerances enter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateEpsilonError, InvalidSpecError
from .sequences import Prefix
from .windows import DensityProfile, Membership, WindowSchedule, density_profile


@dataclass(frozen=True)
class Tolerances:
    """Estimator knobs shared by the weight and Cesaro paths.

    gap: max spread between upper and lower tail densities (as a fraction
    of total mass 1, or of 2M for means) still called converged.
    trend: max movement between the last two rows still called settled.
    tail_rows: how many trailing schedule rows feed the limsup/liminf
    surrogates.
    divergence_floor: gap level (times 2M) that, if held across the whole
    tail while windows double, is reported as divergence.
    """

    gap: float = 0.02
    trend: float = 0.01
    tail_rows: int = 3
    divergence_floor: float = 0.25


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing 1-based indices of a subsequence."""

    indices: np.ndarray
    horizon: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise InvalidSpecError("indices must be one-dimensional")
        if idx.size:
            if np.any(np.diff(idx) <= 0):
                raise InvalidSpecError("indices must be strictly increasing")
            if idx[0] < 1 or idx[-1] > self.horizon:
                raise InvalidSpecError("indices must lie in [1, horizon]")
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True)
class WeightEstimate:
    """Finite-horizon surrogate of a (lower, upper) weight pair.

    w_u_hat is the largest tail-row density max_count/n, w_l_hat the
    smallest tail-row density min_count/n, both exact rationals.
    ``converged`` means the gap is within tolerance and the last two rows
    barely moved.  ``per_window`` is None for derived estimates (e.g. the
    complement weight at a limit point) that were never counted directly.
    """

    w_l_hat: Fraction
    w_u_hat: Fraction
    gap: Fraction
    per_window: DensityProfile | None
    converged: bool
    tail_rows_used: int

    def __post_init__(self):
        if not 0 <= self.w_l_hat <= self.w_u_hat <= 1:
            raise InvalidSpecError("need 0 <= w_l_hat <= w_u_hat <= 1")

    @property
    def midpoint(self) -> Fraction:
        return (self.w_l_hat + self.w_u_hat) / 2

    @property
    def n_tail(self) -> int | None:
        """Smallest window length among the tail rows used."""
        if self.per_window is None or not self.per_window.rows:
            return None
        return self.per_window.rows[-self.tail_rows_used].n


def exact_weight(value: Fraction | int) -> WeightEstimate:
    """A weight known exactly (no profile behind it)."""
    f = Fraction(value)
    return WeightEstimate(
        w_l_hat=f, w_u_hat=f, gap=Fraction(0), per_window=None,
        converged=True, tail_rows_used=0,
    )


def weight_from_membership(
    m: Membership,
    schedule: WindowSchedule,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WeightEstimate:
    """Weight estimate of an index set given as an indicator."""
    prof = density_profile(m, schedule)
    k = min(tolerances.tail_rows, len(prof.rows))
    tail = prof.rows[-k:]
    w_u = max(Fraction(r.max_count, r.n) for r in tail)
    w_l = min(Fraction(r.min_count, r.n) for r in tail)
    gap = w_u - w_l
    if len(tail) >= 2:
        a, b = tail[-2], tail[-1]
        trend_ok = (
            abs(Fraction(b.max_count, b.n) - Fraction(a.max_count, a.n)) <= tolerances.trend
            and abs(Fraction(b.min_count, b.n) - Fraction(a.min_count, a.n)) <= tolerances.trend
        )
    else:
        trend_ok = True
    return WeightEstimate(
        w_l_hat=w_l,
        w_u_hat=w_u,
        gap=gap,
        per_window=prof,
        converged=bool(gap <= tolerances.gap and trend_ok),
        tail_rows_used=k,
    )


def subsequence_weights(
    idx: IndexSet,
    schedule: WindowSchedule,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WeightEstimate:
    """Upper/lower weight estimate of the subsequence indexed by ``idx``.

    The full index set 1..N yields exactly (1, 1) for every schedule; the
    empty set yields exactly (0, 0).
    """
    m = Membership.from_indices(idx.indices, idx.horizon)
    return weight_from_membership(m, schedule, tolerances)


def essential_indices(p: Prefix, a: float, epsilon0: float) -> IndexSet:
    """All indices n with x(n) in [a - epsilon0, a + epsilon0).

    When ``a`` is an isolated candidate sub-limit and epsilon0 is below its
    separation, this is the canonical essential subsequence for a: every
    subsequence converging to a is eventually inside it.  The window is
    half-open so that interval weights and sub-limit weights count the very
    same index set.
    """
    if epsilon0 <= 0:
        raise InvalidSpecError("epsilon0 must be positive")
    mask = (p.values >= a - epsilon0) & (p.values < a + epsilon0)
    return IndexSet(indices=np.flatnonzero(mask).astype(np.int64) + 1, horizon=p.horizon)


def sublimit_weight(
    p: Prefix,
    a: float,
    epsilon: float,
    schedule: WindowSchedule,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WeightEstimate:
    """Weight estimate of the terms lying in [a - epsilon, a + epsilon).

    For an isolated candidate sub-limit with separation >= epsilon this
    estimates the weight of ``a`` itself: the interval membership and the
    essential subsequence are the same index set, so the two estimates are
    identical by construction, not merely close.
    """
    return subsequence_weights(essential_indices(p, a, epsilon), schedule, tolerances)


@dataclass(frozen=True)
class SubLimitCluster:
    """One recurrent value cluster: a finite-scale sub-limit candidate."""

    center: float
    radius: float
    occurrences: int
    isolated: bool
    last_index: int
    weight: WeightEstimate


@dataclass(frozen=True)
class SubLimitReport:
    """Recurrent clusters plus the mass they fail to cover.

    ``clusters`` holds only candidates (clusters that recur in the final
    stretch of the prefix), sorted by center.  ``residual_count`` is the
    number of terms falling in clusters that stopped recurring; candidate
    occurrences plus the residual always account for every term.
    """

    clusters: tuple[SubLimitCluster, ...]
    residual_count: int
    residual_mass: Fraction
    horizon: int
    epsilon: float


def detect_sublimits(
    p: Prefix,
    epsilon: float,
    recurrence_window: float = 0.25,
    schedule: WindowSchedule | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SubLimitReport:
    """Cluster recurrent values and estimate a weight for each cluster.

    Clustering is greedy on an epsilon grid: distinct values are visited in
    decreasing occurrence order (ties toward smaller values) and each
    unassigned seed absorbs every still-unassigned value in
    [seed - epsilon, seed + epsilon).  A cluster is a sub-limit candidate iff
    it recurs past index (1 - recurrence_window) * N; "recurs late" is the
    finite-scale stand-in for "occurs infinitely often", and values that stop
    appearing carry weight 0 in the limit anyway.

    Cluster centers are occurrence-weighted means of their member values.
    Each candidate's weight is estimated from the indices of its own members;
    for an isolated cluster whose separation exceeds epsilon this equals
    subsequence_weights(essential_indices(p, center, epsilon), ...) exactly,
    and for abutting clusters it keeps the per-cluster index sets disjoint so
    their window counts stay additive.

    Whether a non-isolated cluster is a true sub-limit of the infinite
    sequence is not decidable from a prefix; the flag is all this reports.
    """
    if epsilon <= 0:
        raise InvalidSpecError("epsilon must be positive")
    if epsilon >= 2 * p.bound:
        raise DegenerateEpsilonError(
            f"epsilon {epsilon} cannot separate values within [-{p.bound}, {p.bound}]"
        )
    if not 0 < recurrence_window <= 1:
        raise InvalidSpecError("recurrence_window must lie in (0, 1]")
    sched = schedule if schedule is not None else WindowSchedule.geometric(p.horizon)

    uniq, inverse, counts = np.unique(p.values, return_inverse=True, return_counts=True)
    last_index = np.zeros(uniq.size, dtype=np.int64)
    np.maximum.at(last_index, inverse, np.arange(1, p.horizon + 1, dtype=np.int64))

    order = np.lexsort((uniq, -counts))
    assigned = np.zeros(uniq.size, dtype=bool)
    cluster_of = np.full(uniq.size, -1, dtype=np.int64)
    members_of: list[np.ndarray] = []
    for uid in order:
        if assigned[uid]:
            continue
        seed = uniq[uid]
        lo = int(np.searchsorted(uniq, seed - epsilon, side="left"))
        hi = int(np.searchsorted(uniq, seed + epsilon, side="left"))
        span = np.arange(lo, hi)
        members = span[~assigned[lo:hi]]
        assigned[lo:hi] = True
        cluster_of[members] = len(members_of)
        members_of.append(members)

    centers = np.empty(len(members_of))
    radii = np.empty(len(members_of))
    occs = np.empty(len(members_of), dtype=np.int64)
    lasts = np.empty(len(members_of), dtype=np.int64)
    for k, members in enumerate(members_of):
        w = counts[members].astype(np.float64)
        centers[k] = float(np.dot(uniq[members], w) / w.sum())
        radii[k] = float(np.max(np.abs(uniq[members] - centers[k])))
        occs[k] = int(counts[members].sum())
        lasts[k] = int(last_index[members].max())

    # Isolation is judged against every detected cluster, recurrent or not.
    isolated = np.ones(len(members_of), dtype=bool)
    by_center = np.argsort(centers, kind="stable")
    sorted_centers = centers[by_center]
    for pos, k in enumerate(by_center):
        if pos > 0 and sorted_centers[pos] - sorted_centers[pos - 1] < 3 * epsilon:
            isolated[k] = False
        if pos + 1 < len(by_center) and sorted_centers[pos + 1] - sorted_centers[pos] < 3 * epsilon:
            isolated[k] = False

    threshold = (1.0 - recurrence_window) * p.horizon
    elem_cluster = cluster_of[inverse]
    clusters = []
    covered = 0
    for k in np.argsort(centers, kind="stable"):
        if not lasts[k] > threshold:
            continue
        idx = IndexSet(np.flatnonzero(elem_cluster == k).astype(np.int64) + 1, p.horizon)
        clusters.append(
            SubLimitCluster(
                center=float(centers[k]),
                radius=float(radii[k]),
                occurrences=int(occs[k]),
                isolated=bool(isolated[k]),
                last_index=int(lasts[k]),
                weight=subsequence_weights(idx, sched, tolerances),
            )
        )
        covered += int(occs[k])
    residual = p.horizon - covered
    return SubLimitReport(
        clusters=tuple(clusters),
        residual_count=residual,
        residual_mass=Fraction(residual, p.horizon),
        horizon=p.horizon,
        epsilon=float(epsilon),
    )
