"""Finitely-described bounded real sequences and their materialized prefixes.

Every sequence is given by a generator kind plus parameters, together with a
bound M certified at construction so that ``|x(n)| <= M`` for all n.
Indexing is 1-based throughout: ``x(1)`` is the first term.  A :class:`Prefix`
is the exact float64 materialization of ``x(1..N)``.

Generator kinds:

* ``periodic``        -- repeats a finite pattern.
* ``ones-then-zeros`` -- 1 for ``n <= n0``, then 0 forever.
* ``rotation``        -- ``frac(n * alpha)``; equidistributed on [0, 1) for
  irrational alpha.
* ``doubling-blocks`` -- constant blocks of doubling length; block t has
  length ``2**t`` and value ``t mod 2`` (so the terms run 0, 11, 0000,
  11111111, ...).  Its window means never settle, which is what it is for.
* ``dyadic-harmonic`` -- ``x(n) = 1/j`` where ``2**(j-1)`` is the largest
  power of two dividing n; the value ``1/j`` occupies a residue class of
  density ``2**-j``.
* ``table``           -- explicit finite value table; defined only up to its
  length.
* ``affine-combo``    -- ``sum(coef * child)`` over child specs, used to
  exercise linearity of downstream estimators.

Only finitely-described generators are supported; there is no hook for
arbitrary user callables.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRangeError, InvalidSpecError, ResourceLimitError

#: Fractional part of the golden ratio, the default rotation angle.
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

MAX_HORIZON_ENV = "SEQDIST_MAX_HORIZON"
DEFAULT_MAX_HORIZON = 50_000_000

KINDS = (
    "periodic",
    "ones-then-zeros",
    "rotation",
    "doubling-blocks",
    "dyadic-harmonic",
    "table",
    "affine-combo",
)


def max_horizon() -> int:
    """Materialization cap, overridable through SEQDIST_MAX_HORIZON."""
    raw = os.environ.get(MAX_HORIZON_ENV)
    if raw is None:
        return DEFAULT_MAX_HORIZON
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidSpecError(
            f"{MAX_HORIZON_ENV} must be an integer, got {raw!r}"
        ) from exc


@dataclass(frozen=True)
class SequenceSpec:
    """A bounded real sequence described by a generator kind and parameters.

    ``bound`` is certified per kind at construction time (for example
    ``max(|pattern|)`` for periodic, 1 for rotation, ``sum(|c_i| * M_i)``
    for affine combinations), so ``|x(n)| <= bound`` holds for every n.

    ``shift`` offsets evaluation: term n of this spec is term ``n + shift``
    of the underlying generator.  It exists so that translation returns a
    first-class spec; use :func:`shift` rather than setting it directly.
    """

    kind: str
    bound: float
    pattern: tuple[float, ...] = ()
    n0: int = 0
    alpha: float = 0.0
    values: tuple[float, ...] = ()
    terms: tuple[tuple[float, "SequenceSpec"], ...] = ()
    shift: int = 0

    def describe(self) -> str:
        """Short human-readable summary used by reports."""
        parts = [self.kind]
        if self.kind == "periodic":
            parts.append(f"pattern={list(self.pattern)}")
        elif self.kind == "ones-then-zeros":
            parts.append(f"n0={self.n0}")
        elif self.kind == "rotation":
            parts.append(f"alpha={self.alpha!r}")
        elif self.kind == "table":
            parts.append(f"length={len(self.values)}")
        elif self.kind == "affine-combo":
            parts.append(f"terms={len(self.terms)}")
        if self.shift:
            parts.append(f"shift={self.shift}")
        parts.append(f"bound={self.bound!r}")
        return " ".join(parts)


def _finite_reals(values, what: str) -> tuple[float, ...]:
    out = []
    for v in values:
        f = float(v)
        if not math.isfinite(f):
            raise InvalidSpecError(f"{what} must be finite, got {v!r}")
        out.append(f)
    return tuple(out)


def periodic(pattern) -> SequenceSpec:
    pat = _finite_reals(pattern, "periodic pattern")
    if not pat:
        raise InvalidSpecError("periodic pattern must be nonempty")
    return SequenceSpec(kind="periodic", bound=max(abs(v) for v in pat), pattern=pat)


def ones_then_zeros(n0: int) -> SequenceSpec:
    if int(n0) != n0 or n0 < 1:
        raise InvalidSpecError(f"n0 must be a positive integer, got {n0!r}")
    return SequenceSpec(kind="ones-then-zeros", bound=1.0, n0=int(n0))


def rotation(alpha: float) -> SequenceSpec:
    a = float(alpha)
    if not (0.0 < a < 1.0):
        raise InvalidSpecError(f"rotation alpha must lie in (0, 1), got {alpha!r}")
    return SequenceSpec(kind="rotation", bound=1.0, alpha=a)


def doubling_blocks() -> SequenceSpec:
    return SequenceSpec(kind="doubling-blocks", bound=1.0)


def dyadic_harmonic() -> SequenceSpec:
    return SequenceSpec(kind="dyadic-harmonic", bound=1.0)


def table(values) -> SequenceSpec:
    vals = _finite_reals(values, "table values")
    if not vals:
        raise InvalidSpecError("table must hold at least one value")
    return SequenceSpec(kind="table", bound=max(abs(v) for v in vals), values=vals)


def affine_combo(terms) -> SequenceSpec:
    packed = []
    for coef, child in terms:
        c = float(coef)
        if not math.isfinite(c):
            raise InvalidSpecError(f"affine coefficient must be finite, got {coef!r}")
        if not isinstance(child, SequenceSpec):
            raise InvalidSpecError("affine-combo children must be SequenceSpec")
        packed.append((c, child))
    if not packed:
        raise InvalidSpecError("affine-combo needs at least one term")
    bound = 0.0
    for c, child in packed:
        bound += abs(c) * child.bound
    return SequenceSpec(kind="affine-combo", bound=bound, terms=tuple(packed))


# Canonical fixtures.  F1 accepts an n0 override; the rest take no parameters.
FIXTURE_NAMES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7")


def fixture(name: str, n0: int | None = None) -> SequenceSpec:
    """Resolve a reserved fixture name to a spec.

    F1 ones-then-zeros(n0, default 3); F2 all ones; F3 alternating -1, 1;
    F4 periodic 1, 0, 0; F5 golden rotation; F6 doubling blocks;
    F7 dyadic harmonic.
    """
    if name != "F1" and n0 is not None:
        raise InvalidSpecError(f"fixture {name} takes no n0 parameter")
    if name == "F1":
        return ones_then_zeros(3 if n0 is None else n0)
    if name == "F2":
        return periodic((1.0,))
    if name == "F3":
        return periodic((-1.0, 1.0))
    if name == "F4":
        return periodic((1.0, 0.0, 0.0))
    if name == "F5":
        return rotation(GOLDEN)
    if name == "F6":
        return doubling_blocks()
    if name == "F7":
        return dyadic_harmonic()
    raise InvalidSpecError(f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}")


def _scalar(spec: SequenceSpec, n: int) -> float:
    m = n + spec.shift
    kind = spec.kind
    if kind == "periodic":
        return spec.pattern[(m - 1) % len(spec.pattern)]
    if kind == "ones-then-zeros":
        return 1.0 if m <= spec.n0 else 0.0
    if kind == "rotation":
        v = float(m) * spec.alpha
        return v - math.floor(v)
    if kind == "doubling-blocks":
        return float((m.bit_length() - 1) % 2)
    if kind == "dyadic-harmonic":
        j = (m & -m).bit_length()
        return 1.0 / j
    if kind == "table":
        if m > len(spec.values):
            raise IndexOutOfRangeError(
                f"table defines x only up to n={len(spec.values) - spec.shift}"
            )
        return spec.values[m - 1]
    if kind == "affine-combo":
        acc = 0.0
        for coef, child in spec.terms:
            acc += coef * _scalar(child, m)
        return acc
    raise InvalidSpecError(f"unknown sequence kind {kind!r}")


def _block(spec: SequenceSpec, ns: np.ndarray) -> np.ndarray:
    # ns holds requested 1-based positions; every arithmetic step mirrors
    # _scalar exactly so eval_at and materialize agree bit for bit.
    ms = ns + spec.shift
    kind = spec.kind
    if kind == "periodic":
        pat = np.asarray(spec.pattern, dtype=np.float64)
        return pat[(ms - 1) % len(pat)]
    if kind == "ones-then-zeros":
        return np.where(ms <= spec.n0, 1.0, 0.0)
    if kind == "rotation":
        v = ms.astype(np.float64) * spec.alpha
        return v - np.floor(v)
    if kind == "doubling-blocks":
        t = np.frexp(ms.astype(np.float64))[1] - 1
        return (t % 2).astype(np.float64)
    if kind == "dyadic-harmonic":
        j = np.frexp((ms & -ms).astype(np.float64))[1]
        return 1.0 / j
    if kind == "table":
        vals = np.asarray(spec.values, dtype=np.float64)
        if ms.size and int(ms.max()) > vals.size:
            raise IndexOutOfRangeError(
                f"table defines x only up to n={vals.size - spec.shift}"
            )
        return vals[ms - 1]
    if kind == "affine-combo":
        acc = np.zeros(ms.shape, dtype=np.float64)
        for coef, child in spec.terms:
            acc += coef * _block(child, ms)
        return acc
    raise InvalidSpecError(f"unknown sequence kind {kind!r}")


def eval_at(spec: SequenceSpec, n: int) -> float:
    """Evaluate x(n).  Deterministic; ``|x(n)| <= spec.bound``."""
    if int(n) != n or n < 1:
        raise InvalidSpecError(f"index must be a positive integer, got {n!r}")
    return float(_scalar(spec, int(n)))


@dataclass(frozen=True)
class Prefix:
    """Materialized values x(1..N).

    ``values[k]`` holds ``x(k + 1)``; the array is frozen after
    construction and may be shared freely across workers.
    """

    values: np.ndarray
    horizon: int
    bound: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size != self.horizon:
            raise InvalidSpecError("prefix length must equal its horizon")
        if vals.size and float(np.max(np.abs(vals))) > self.bound:
            raise InvalidSpecError("prefix values exceed the certified bound")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def value_at(self, n: int) -> float:
        """1-based access: value_at(1) == x(1)."""
        if not 1 <= n <= self.horizon:
            raise IndexOutOfRangeError(f"n={n} outside 1..{self.horizon}")
        return float(self.values[n - 1])


def materialize(spec: SequenceSpec, horizon: int) -> Prefix:
    """Evaluate x(1..horizon) into a Prefix."""
    if int(horizon) != horizon or horizon < 1:
        raise InvalidSpecError(f"horizon must be a positive integer, got {horizon!r}")
    cap = max_horizon()
    if horizon > cap:
        raise ResourceLimitError(f"horizon {horizon} exceeds the cap of {cap}")
    ns = np.arange(1, int(horizon) + 1, dtype=np.int64)
    vals = np.asarray(_block(spec, ns), dtype=np.float64)
    return Prefix(values=vals, horizon=int(horizon), bound=spec.bound)


def shift(spec: SequenceSpec, k: int) -> SequenceSpec:
    """Translate: the result y satisfies y(n) = x(n + k) for all n."""
    if int(k) != k or k < 0:
        raise InvalidSpecError(f"shift must be a nonnegative integer, got {k!r}")
    return dataclasses.replace(spec, shift=spec.shift + int(k))
