"""Command-line front end.

Subcommands:

* ``analyze``         -- full cross-validated report for one sequence:
  sub-limit table, weight estimates, weight-bounds interval, quantization
  estimate with error bound, and the uniform-Cesaro verdict.
* ``weights``         -- weight tables for explicit intervals and/or values,
  with per-window (n, min_count, max_count) rows.
* ``demo-nonmeasure`` -- the finite-additivity-only demonstration: finite
  index sets all get weight 0, yet the constant-one sequence forces total
  weight 1, so no countably additive measure can reproduce windowed
  densities.

Sequences come either from the built-in fixtures F1..F7 or from a spec
file holding one sequence as flat ``key = value`` lines, e.g.::

    kind = periodic       # or: rotation + alpha, table + values,
    pattern = 1, 0, 0     #     affine-combo + coefficients + children, ...

Lists are comma-separated; ``#`` starts a comment; an optional ``bound``
line may widen (never narrow) the certified bound; affine children are
fixture names.  Exit codes: 0 success, 2 usage or parse error, 3 resource
limit.  Machine formats (jsonl, csv) are deterministic for a fixed
configuration and carry a schema field; every density decimal travels with
its exact (count, n) pair.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .distribution import IntervalSet, interval_about, set_weight
from .errors import (
    IndexOutOfRangeError,
    InvalidSpecError,
    ResourceLimitError,
    SeqdistError,
)
from .lorentz import cross_validate
from .sequences import (
    FIXTURE_NAMES,
    SequenceSpec,
    affine_combo,
    fixture,
    materialize,
    ones_then_zeros,
    periodic,
    rotation,
    table,
)
from .sequences import doubling_blocks as _doubling
from .sequences import dyadic_harmonic as _dyadic
from .weights import DEFAULT_TOLERANCES, Tolerances
from .windows import WindowSchedule

SCHEMA = "seqdist.report/1"

FORMATS = ("table", "jsonl", "csv")

# Stable column order for the CSV mirror of the JSONL rows.
CSV_FIELDS = (
    "schema", "record", "source", "label", "horizon", "bound", "n",
    "min_count", "max_count", "offsets", "min_density", "max_density",
    "min_mean", "max_mean", "gap", "center", "radius", "occurrences",
    "isolated", "converged", "w_l_num", "w_l_den", "w_u_num", "w_u_den",
    "w_l", "w_u", "lower", "upper", "point", "error_bound", "estimate",
    "uniform_gap", "verdict", "difference", "combined_bound", "consistent",
    "residual_count", "value",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs, resolved from flags."""

    source: str
    spec: SequenceSpec
    horizon: int
    schedule: WindowSchedule
    tolerances: Tolerances
    out_format: str
    out_path: str | None


def parse_spec_file(text: str) -> SequenceSpec:
    """Parse the flat key=value grammar into a spec."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidSpecError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        if key in fields:
            raise InvalidSpecError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value.strip()
    if "kind" not in fields:
        raise InvalidSpecError("spec file must declare a kind")
    kind = fields.pop("kind")
    declared_bound = fields.pop("bound", None)

    def floats(key: str) -> list[float]:
        raw = fields.pop(key, None)
        if raw is None:
            raise InvalidSpecError(f"kind {kind!r} needs a {key!r} line")
        try:
            return [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError as exc:
            raise InvalidSpecError(f"could not parse {key!r}: {raw!r}") from exc

    if kind == "periodic":
        spec = periodic(floats("pattern"))
    elif kind == "ones-then-zeros":
        raw = fields.pop("n0", None)
        if raw is None:
            raise InvalidSpecError("ones-then-zeros needs an n0 line")
        try:
            spec = ones_then_zeros(int(raw))
        except ValueError as exc:
            raise InvalidSpecError(f"could not parse n0: {raw!r}") from exc
    elif kind == "rotation":
        vals = floats("alpha")
        if len(vals) != 1:
            raise InvalidSpecError("rotation takes a single alpha")
        spec = rotation(vals[0])
    elif kind == "doubling-blocks":
        spec = _doubling()
    elif kind == "dyadic-harmonic":
        spec = _dyadic()
    elif kind == "table":
        spec = table(floats("values"))
    elif kind == "affine-combo":
        coefs = floats("coefficients")
        raw = fields.pop("children", None)
        if raw is None:
            raise InvalidSpecError("affine-combo needs a children line")
        names = [tok.strip() for tok in raw.split(",") if tok.strip()]
        if len(names) != len(coefs):
            raise InvalidSpecError("coefficients and children must pair up")
        spec = affine_combo(list(zip(coefs, (fixture(n) for n in names))))
    else:
        raise InvalidSpecError(f"unknown kind {kind!r}")
    if fields:
        raise InvalidSpecError(f"unrecognized keys: {sorted(fields)}")
    if declared_bound is not None:
        try:
            explicit = float(declared_bound)
        except ValueError as exc:
            raise InvalidSpecError(f"could not parse bound: {declared_bound!r}") from exc
        if explicit < spec.bound:
            raise InvalidSpecError(
                f"declared bound {explicit} is below the certified bound {spec.bound}"
            )
        spec = dataclasses.replace(spec, bound=explicit)
    return spec


def _fraction_fields(prefix: str, value: Fraction) -> dict:
    return {
        f"{prefix}_num": value.numerator,
        f"{prefix}_den": value.denominator,
        prefix: float(value),
    }


def _weight_rows(label: str, w, record: str) -> list[dict]:
    rows = [
        {
            "schema": SCHEMA,
            "record": record,
            "label": label,
            "converged": w.converged,
            "gap": float(w.gap),
            **_fraction_fields("w_l", w.w_l_hat),
            **_fraction_fields("w_u", w.w_u_hat),
        }
    ]
    if w.per_window is not None:
        for r in w.per_window.rows:
            rows.append(
                {
                    "schema": SCHEMA,
                    "record": f"{record}_window",
                    "label": label,
                    "n": r.n,
                    "min_count": r.min_count,
                    "max_count": r.max_count,
                    "offsets": r.offsets_scanned,
                    "min_density": r.min_count / r.n,
                    "max_density": r.max_count / r.n,
                }
            )
    return rows


def analyze_rows(config: RunConfig, record) -> list[dict]:
    """Flatten a CrossValidation into report rows."""
    rows: list[dict] = [
        {
            "schema": SCHEMA,
            "record": "meta",
            "source": config.source,
            "horizon": config.horizon,
            "bound": config.spec.bound,
            "label": config.spec.describe(),
            "value": "prefix-relative",
        }
    ]
    for c in record.sublimits.clusters:
        rows.append(
            {
                "schema": SCHEMA,
                "record": "sublimit",
                "center": c.center,
                "radius": c.radius,
                "occurrences": c.occurrences,
                "isolated": c.isolated,
                "converged": c.weight.converged,
                **_fraction_fields("w_l", c.weight.w_l_hat),
                **_fraction_fields("w_u", c.weight.w_u_hat),
            }
        )
        for r in c.weight.per_window.rows:
            rows.append(
                {
                    "schema": SCHEMA,
                    "record": "sublimit_window",
                    "center": c.center,
                    "n": r.n,
                    "min_count": r.min_count,
                    "max_count": r.max_count,
                    "offsets": r.offsets_scanned,
                    "min_density": r.min_count / r.n,
                    "max_density": r.max_count / r.n,
                }
            )
    rows.append(
        {
            "schema": SCHEMA,
            "record": "residual",
            "residual_count": record.sublimits.residual_count,
            "value": float(record.sublimits.residual_mass),
        }
    )
    rows.append(
        {
            "schema": SCHEMA,
            "record": "weight_bounds",
            "lower": record.bounds.lower,
            "upper": record.bounds.upper,
            "point": record.bounds.point,
            "verdict": record.bounds.verdict,
        }
    )
    q = record.quantization
    rows.append(
        {
            "schema": SCHEMA,
            "record": "quantization",
            "point": q.point,
            "lower": q.lower,
            "upper": q.upper,
            "error_bound": q.error_bound,
            "verdict": q.verdict,
        }
    )
    lv = record.lorentz
    rows.append(
        {
            "schema": SCHEMA,
            "record": "lorentz",
            "estimate": lv.estimate,
            "uniform_gap": lv.uniform_gap,
            "verdict": lv.verdict,
        }
    )
    for r in lv.profile.rows:
        rows.append(
            {
                "schema": SCHEMA,
                "record": "cesaro_window",
                "n": r.n,
                "min_mean": r.min_mean,
                "max_mean": r.max_mean,
                "gap": r.max_mean - r.min_mean,
            }
        )
    rows.append(
        {
            "schema": SCHEMA,
            "record": "consistency",
            "difference": record.difference,
            "combined_bound": record.combined_bound,
            "consistent": record.consistent,
        }
    )
    return rows


def _render_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _render_table(rows: list[dict]) -> str:
    out: list[str] = []
    windows: list[dict] = []

    def flush_windows():
        if not windows:
            return
        out.append(f"    {'n':>8} {'min':>12} {'max':>12}")
        for w in windows:
            if "min_count" in w:
                out.append(f"    {w['n']:>8} {w['min_count']:>12} {w['max_count']:>12}")
            else:
                out.append(f"    {w['n']:>8} {w['min_mean']:>12.6g} {w['max_mean']:>12.6g}")
        windows.clear()

    for row in rows:
        rec = row["record"]
        if rec.endswith("_window"):
            windows.append(row)
            continue
        flush_windows()
        if rec == "meta":
            out.append(f"sequence {row['source']}: {row['label']}")
            out.append(
                f"horizon {row['horizon']}  schema {row['schema']}  "
                "(all quantities prefix-relative)"
            )
        elif rec == "sublimit":
            tag = "isolated" if row["isolated"] else "non-isolated"
            out.append(
                f"sub-limit candidate at {row['center']:.6g} ({tag}, "
                f"{row['occurrences']} occurrences): weight in "
                f"[{row['w_l']:.6g}, {row['w_u']:.6g}]"
                + ("" if row["converged"] else "  [not converged]")
            )
        elif rec == "weight":
            out.append(
                f"weight of {row['label']}: [{row['w_l']:.6g}, {row['w_u']:.6g}]"
                f" = [{row['w_l_num']}/{row['w_l_den']}, {row['w_u_num']}/{row['w_u_den']}]"
                + ("" if row["converged"] else "  [not converged]")
            )
        elif rec == "residual":
            out.append(f"terms outside recurrent clusters: {row['residual_count']}")
        elif rec == "weight_bounds":
            out.append(
                f"weight-bounds interval: [{row['lower']:.6g}, {row['upper']:.6g}]"
                f" around {row['point']:.6g}, verdict {row['verdict']}"
            )
        elif rec == "quantization":
            out.append(
                f"quantization estimate: {row['point']:.6g} "
                f"(+/- {row['error_bound']:.3g}), verdict {row['verdict']}"
            )
        elif rec == "lorentz":
            out.append(
                f"uniform-Cesaro estimate: {row['estimate']:.6g}, "
                f"gap {row['uniform_gap']:.3g}, verdict {row['verdict']}"
            )
        elif rec == "consistency":
            flag = "consistent" if row["consistent"] else "INCONSISTENT"
            out.append(
                f"route difference {row['difference']:.3g} vs combined bound "
                f"{row['combined_bound']:.3g}: {flag}"
            )
        elif rec == "note":
            out.append(row["value"])
    flush_windows()
    return "\n".join(out) + "\n"


def render(rows: list[dict], out_format: str) -> str:
    if out_format == "jsonl":
        return _render_jsonl(rows)
    if out_format == "csv":
        return _render_csv(rows)
    return _render_table(rows)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_spec(args) -> tuple[str, SequenceSpec]:
    if args.fixture and args.spec_file:
        raise InvalidSpecError("give either --fixture or --spec-file, not both")
    if args.fixture:
        return args.fixture, fixture(args.fixture)
    if args.spec_file:
        try:
            with open(args.spec_file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidSpecError(f"cannot read {args.spec_file}: {exc}") from exc
        return args.spec_file, parse_spec_file(text)
    raise InvalidSpecError("one of --fixture or --spec-file is required")


def _parse_schedule(args, horizon: int) -> WindowSchedule:
    if args.lengths:
        try:
            return WindowSchedule(tuple(int(tok) for tok in args.lengths.split(",")))
        except ValueError as exc:
            raise InvalidSpecError(f"bad --lengths {args.lengths!r}") from exc
    base, ratio = 16, 2
    if args.schedule:
        try:
            base_s, ratio_s = args.schedule.lower().split("x", 1)
            base, ratio = int(base_s), int(ratio_s)
        except ValueError as exc:
            raise InvalidSpecError(
                f"--schedule wants BASExRATIO (e.g. 16x2), got {args.schedule!r}"
            ) from exc
    return WindowSchedule.geometric(horizon, base=base, ratio=ratio)


def _config_from(args) -> RunConfig:
    source, spec = _resolve_spec(args)
    horizon = args.horizon
    schedule = _parse_schedule(args, horizon)
    schedule.validate_for(horizon)
    tol = Tolerances(
        gap=args.tolerance_gap,
        trend=args.tolerance_trend,
        tail_rows=DEFAULT_TOLERANCES.tail_rows,
        divergence_floor=DEFAULT_TOLERANCES.divergence_floor,
    )
    if tol.gap <= 0 or tol.trend <= 0:
        raise InvalidSpecError("tolerances must be positive")
    return RunConfig(
        source=source,
        spec=spec,
        horizon=horizon,
        schedule=schedule,
        tolerances=tol,
        out_format=args.format,
        out_path=args.out,
    )


def cmd_analyze(args) -> int:
    config = _config_from(args)
    record = cross_validate(
        config.spec,
        config.horizon,
        schedule=config.schedule,
        tolerances=config.tolerances,
    )
    _emit(render(analyze_rows(config, record), config.out_format), config.out_path)
    return 0


def _parse_interval(token: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = token.split(":", 1)
        return float(lo_s), float(hi_s)
    except ValueError as exc:
        raise InvalidSpecError(f"--interval wants LO:HI, got {token!r}") from exc


def cmd_weights(args) -> int:
    config = _config_from(args)
    if not args.interval and args.value is None:
        raise InvalidSpecError("give at least one --interval or --value")
    p = materialize(config.spec, config.horizon)
    rows: list[dict] = [
        {
            "schema": SCHEMA,
            "record": "meta",
            "source": config.source,
            "horizon": config.horizon,
            "bound": config.spec.bound,
            "label": config.spec.describe(),
            "value": "prefix-relative",
        }
    ]
    targets: list[tuple[str, IntervalSet]] = []
    for token in args.interval or ():
        lo, hi = _parse_interval(token)
        if lo < -p.bound or hi > p.bound:
            raise InvalidSpecError(
                f"interval [{lo}, {hi}) outside the bound [-{p.bound}, {p.bound}]"
            )
        targets.append((f"[{lo!r}, {hi!r})", IntervalSet(intervals=((lo, hi),))))
    if args.value is not None:
        for v in args.value:
            targets.append(
                (f"[{v!r} +/- {args.epsilon!r})", interval_about(v, args.epsilon, p.bound))
            )
    for label, region in targets:
        w = set_weight(p, region, config.schedule, config.tolerances)
        rows.extend(_weight_rows(label, w, "weight"))
    _emit(render(rows, config.out_format), config.out_path)
    return 0


DEMO_PROSE = (
    "Windowed densities behave like a finitely additive set function but not "
    "like a measure.  Every finite index set has weight 0: its members fall "
    "out of all but boundedly many windows, so the windowed density tends to "
    "0 uniformly in the offset.  If some countably additive measure on the "
    "positive integers reproduced these weights, every finite set would get "
    "measure 0 and, summing a countable disjoint cover, the whole index set "
    "would too.  But the constant-one sequence concentrates weight 1 on any "
    "cell around 1, i.e. on the whole index set.  0 = 1 is the contradiction: "
    "no such measure exists, and the demo table below shows both halves with "
    "exact window counts."
)


def cmd_demo_nonmeasure(args) -> int:
    horizon = args.horizon
    schedule = WindowSchedule.geometric(horizon)
    rows: list[dict] = [
        {
            "schema": SCHEMA,
            "record": "meta",
            "source": "demo-nonmeasure",
            "horizon": horizon,
            "bound": 1.0,
            "label": "finite sets weigh 0, the full space weighs 1",
            "value": "prefix-relative",
        },
        {"schema": SCHEMA, "record": "note", "value": DEMO_PROSE},
    ]
    eps = 0.1
    for n0 in (1, 10, 100):
        spec = ones_then_zeros(n0)
        p = materialize(spec, horizon)
        w = set_weight(p, interval_about(1.0, eps, 1.0), schedule)
        rows.extend(_weight_rows(f"ones-then-zeros(n0={n0}) near 1", w, "weight"))
    p2 = materialize(fixture("F2"), horizon)
    w2 = set_weight(p2, interval_about(1.0, eps, 1.0), schedule)
    rows.extend(_weight_rows("all-ones near 1", w2, "weight"))
    _emit(render(rows, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdist",
        description="Finite-horizon distribution and almost-convergence reports "
        "for bounded sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_spec=True):
        if with_spec:
            sp.add_argument("--fixture", choices=FIXTURE_NAMES, help="built-in sequence")
            sp.add_argument("--spec-file", help="path to a key=value spec file")
            sp.add_argument(
                "--horizon", type=int, default=10_000, help="prefix length N"
            )
            sp.add_argument(
                "--schedule",
                help="geometric window schedule as BASExRATIO (default 16x2)",
            )
            sp.add_argument(
                "--lengths", help="explicit comma-separated window lengths"
            )
            sp.add_argument(
                "--tolerance-gap", type=float, default=DEFAULT_TOLERANCES.gap
            )
            sp.add_argument(
                "--tolerance-trend", type=float, default=DEFAULT_TOLERANCES.trend
            )
        sp.add_argument("--format", choices=FORMATS, default="table")
        sp.add_argument("--out", help="write the report here instead of stdout")

    sp_analyze = sub.add_parser("analyze", help="full cross-validated report")
    add_common(sp_analyze)
    sp_analyze.set_defaults(func=cmd_analyze)

    sp_weights = sub.add_parser("weights", help="interval / value weight tables")
    add_common(sp_weights)
    sp_weights.add_argument(
        "--interval", action="append", help="half-open interval LO:HI (repeatable)"
    )
    sp_weights.add_argument(
        "--value", action="append", type=float, help="estimate the weight near VALUE"
    )
    sp_weights.add_argument(
        "--epsilon", type=float, default=0.05, help="half-width used with --value"
    )
    sp_weights.set_defaults(func=cmd_weights)

    sp_demo = sub.add_parser(
        "demo-nonmeasure", help="finite additivity vs countable additivity demo"
    )
    sp_demo.add_argument("--horizon", type=int, default=10_000)
    add_common(sp_demo, with_spec=False)
    sp_demo.set_defaults(func=cmd_demo_nonmeasure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"seqdist: resource limit: {exc}", file=sys.stderr)
        return 3
    except (InvalidSpecError, IndexOutOfRangeError) as exc:
        print(f"seqdist: {exc}", file=sys.stderr)
        return 2
    except SeqdistError as exc:
        print(f"seqdist: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
