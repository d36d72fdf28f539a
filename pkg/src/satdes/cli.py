"""Command-line front end.

Subcommands: matrix, check, enumerate, optimal, estimate, simulate,
spectrum.  Reports print to stdout as JSON (default) or CSV where a tabular
shape exists.  Arbitrary-precision integers and rationals serialize as
strings ("48", "2/3") so nothing is rounded; parallel *_decimal fields give
12-significant-digit renderings.  Exit codes: 0 success, 1 domain failures
(inadmissible design, no admissible set), 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from satdes.estimation import (
    ObservationError,
    blue,
    read_observations,
    simulate,
)
from satdes.kernels import backend_name
from satdes.model import (
    LabelError,
    ModelSpec,
    all_effects,
    all_runs,
    build_model_matrix,
)
from satdes.partition import InadmissibleDesignError, make_partition
from satdes.search import (
    CapExceededError,
    DesignReport,
    NoAdmissibleSetError,
    SearchConfig,
    d_optimal,
    enumerate_admissible,
    is_admissible,
    spectrum,
)


def _dec(x) -> str:
    return f"{float(x):.12g}"


def _frac(x: Fraction) -> str:
    return str(x)


def _report_dict(r: DesignReport) -> dict:
    return {
        "k": r.k,
        "n": r.n,
        "d": r.d,
        "negligible": list(r.negligible),
        "deleted": list(r.deleted),
        "kept": list(r.kept),
        "admissible": r.admissible,
        "abs_det_C": str(r.abs_det_c),
        "abs_det_D": str(r.abs_det_d),
        "efficiency_ratio": None if r.efficiency_ratio is None else _frac(r.efficiency_ratio),
        "efficiency_ratio_decimal": None
        if r.efficiency_ratio is None
        else _dec(r.efficiency_ratio),
        "optimal": r.optimal,
        "method": r.method,
        "certified": r.certified,
    }


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _report_rows_csv(rows: "list[tuple[DesignReport, int | None]]") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["deleted_set", "abs_det_C", "admissible", "class_rank"])
    for rep, rank in rows:
        writer.writerow(
            [
                " ".join(rep.deleted),
                str(rep.abs_det_c),
                str(rep.admissible).lower(),
                "" if rank is None else rank,
            ]
        )
    return buf.getvalue()


def _model_from_args(args) -> ModelSpec:
    labels = [t for t in (args.negligible or "").split(",") if t]
    if not labels:
        raise LabelError("--negligible requires at least one effect label")
    return ModelSpec.from_labels(args.k, labels)


def _deleted_from_args(args) -> list:
    labels = [t for t in (args.delete or "").split(",") if t]
    if not labels:
        raise LabelError("--delete requires at least one run label")
    return labels


def _config_from_args(args) -> SearchConfig:
    return SearchConfig(
        method=args.method,
        subset_cap=args.cap,
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
    )


def _cmd_matrix(args):
    h = build_model_matrix(args.k)
    runs = [r.label for r in all_runs(args.k)]
    effects = [e.label for e in all_effects(args.k)]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["run"] + effects)
        for i, lab in enumerate(runs):
            writer.writerow([lab] + [h.at(i, j) for j in range(h.cols)])
        return buf.getvalue(), 0
    body = {
        "k": args.k,
        "order": 1 << args.k,
        "runs": runs,
        "effects": effects,
        "rows": h.to_lists(),
    }
    return _emit_json(body), 0


def _cmd_check(args):
    spec = _model_from_args(args)
    report = is_admissible(spec, _deleted_from_args(args))
    code = 0 if report.admissible else 1
    if args.format == "csv":
        return _report_rows_csv([(report, None)]), code
    return _emit_json(_report_dict(report)), code


def _cmd_enumerate(args):
    spec = _model_from_args(args)
    result = enumerate_admissible(spec, _config_from_args(args))
    if args.format == "csv":
        rows = []
        for rank, cls in enumerate(
            [c for c in result.classes if c.abs_det_c > 0], start=1
        ):
            rows.extend((rep, rank) for rep in cls.reports)
        return _report_rows_csv(rows), 0
    body = {
        "k": result.k,
        "n": spec.run_count,
        "d": result.d,
        "negligible": [e.label for e in spec.negligible],
        "total_sets": result.total,
        "admissible_count": result.admissible_count,
        "max_abs_det_C": str(result.max_abs_det_c),
        "classes": [
            {
                "abs_det_C": str(cls.abs_det_c),
                "count": cls.count,
                "reports": [_report_dict(r) for r in cls.reports],
            }
            for cls in result.classes
        ],
    }
    return _emit_json(body), 0


def _cmd_optimal(args):
    spec = _model_from_args(args)
    result = d_optimal(spec, _config_from_args(args), force=args.force)
    if args.format == "csv":
        reports = result.optima if args.all else (result.best,)
        return _report_rows_csv([(r, 1) for r in reports]), 0
    if args.all:
        body = {
            "method": result.method,
            "certified": result.certified,
            "searched": result.searched,
            "count": len(result.optima),
            "optima": [_report_dict(r) for r in result.optima],
        }
        return _emit_json(body), 0
    return _emit_json(_report_dict(result.best)), 0


def _cmd_estimate(args):
    if args.format == "csv":
        raise LabelError("estimate output has no CSV form; use --format json")
    spec = _model_from_args(args)
    p = make_partition(spec, _deleted_from_args(args))
    y = read_observations(args.data, p)
    est = blue(p, y)
    n = spec.run_count
    disp = est.dispersion
    body = {
        "k": spec.k,
        "n": n,
        "d": spec.deletion_count,
        "negligible": [e.label for e in spec.negligible],
        "deleted": list(p.deleted_labels),
        "kept": list(p.kept_labels),
        "abs_det_C": str(abs(est.det_complement)),
        "abs_det_D": str(est.abs_det_design),
        "theta1_hat": {k: _frac(v) for k, v in est.theta1_hat.items()},
        "theta1_hat_decimal": {k: _dec(v) for k, v in est.theta1_hat.items()},
        "y2_blup": {k: _frac(v) for k, v in est.y2_blup.items()},
        "y2_blup_decimal": {k: _dec(v) for k, v in est.y2_blup.items()},
        "dispersion": [
            [_frac(disp.at(i, j)) for j in range(n)] for i in range(n)
        ],
        "dispersion_decimal": [
            [_dec(disp.at(i, j)) for j in range(n)] for i in range(n)
        ],
    }
    return _emit_json(body), 0


def _cmd_simulate(args):
    if args.format == "csv":
        raise LabelError("simulate output has no CSV form; use --format json")
    spec = _model_from_args(args)
    p = make_partition(spec, _deleted_from_args(args))
    n = spec.run_count
    if args.theta:
        parts = args.theta.split(",")
        if len(parts) != n:
            raise LabelError(
                f"--theta needs {n} comma-separated values, got {len(parts)}"
            )
        theta = [Fraction(t) for t in parts]
    else:
        theta = [Fraction(0)] * n
    summary = simulate(p, theta, sigma=args.sigma, reps=args.reps, seed=args.seed)
    bounds = [
        4.0 * math.sqrt(summary.theoretical_cov[i][i] / summary.reps)
        for i in range(n)
    ]
    body = {
        "k": spec.k,
        "deleted": list(p.deleted_labels),
        "sigma": _dec(summary.sigma),
        "reps": summary.reps,
        "seed": summary.seed,
        "effects": list(summary.effects),
        "bias": {e: _dec(b) for e, b in zip(summary.effects, summary.bias)},
        "bias_bound": {e: _dec(b) for e, b in zip(summary.effects, bounds)},
        "bias_within_bound": bool(
            all(abs(b) <= bd for b, bd in zip(summary.bias, bounds))
        ),
        "empirical_cov": [[_dec(x) for x in row] for row in summary.empirical_cov],
        "theoretical_cov": [
            [_dec(x) for x in row] for row in summary.theoretical_cov
        ],
    }
    return _emit_json(body), 0


def _cmd_spectrum(args):
    result = spectrum(args.order)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["raw_abs_det", "normalized"])
        for raw, norm in zip(result.raw, result.normalized):
            writer.writerow([raw, norm])
        return buf.getvalue(), 0
    body = {
        "order": result.order,
        "raw": [str(v) for v in result.raw],
        "normalized": [str(v) for v in result.normalized],
    }
    return _emit_json(body), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satdes",
        description="Saturated two-level factorial designs by exact run deletion",
    )
    parser.add_argument(
        "--backend-info",
        action="store_true",
        help="print the active kernel backend and exit",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(sp, negligible=True, delete=False):
        sp.add_argument("--k", type=int, required=True, help="number of factors")
        if negligible:
            sp.add_argument(
                "--negligible",
                required=True,
                help="comma-separated negligible effect labels, e.g. F123,F1234",
            )
        if delete:
            sp.add_argument(
                "--delete",
                required=True,
                help="comma-separated run labels to delete, e.g. 0000,1111",
            )
        sp.add_argument(
            "--format", choices=("json", "csv"), default="json", help="output format"
        )

    def add_search(sp):
        sp.add_argument(
            "--method", choices=("exhaustive", "exchange"), default="exhaustive"
        )
        sp.add_argument("--cap", type=int, default=10**7, help="subset cap")
        sp.add_argument("--restarts", type=int, default=20)
        sp.add_argument("--max-iters", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("matrix", help="print the full model matrix")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_matrix)

    sp = sub.add_parser("check", help="classify one deletion set")
    add_common(sp, delete=True)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("enumerate", help="classify every deletion set")
    add_common(sp)
    add_search(sp)
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("optimal", help="search for a maximal |det C| deletion")
    add_common(sp)
    add_search(sp)
    sp.add_argument("--all", action="store_true", help="list every maximizer")
    sp.add_argument(
        "--force", action="store_true", help="run exhaustive search above the cap"
    )
    sp.set_defaults(func=_cmd_optimal)

    sp = sub.add_parser("estimate", help="BLUE/BLUP from observed responses")
    add_common(sp, delete=True)
    sp.add_argument("--data", required=True, help="CSV file with header run,y")
    sp.set_defaults(func=_cmd_estimate)

    sp = sub.add_parser("simulate", help="Monte Carlo check of the estimator")
    add_common(sp, delete=True)
    sp.add_argument("--theta", help="comma-separated true effect values")
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--reps", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("spectrum", help="attained |det| values of sign matrices")
    sp.add_argument("--order", type=int, required=True, help="matrix order, 1..6")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "backend_info", False) and args.command is None:
        sys.stdout.write(_emit_json({"kernel_backend": backend_name()}))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        out, code = args.func(args)
    except (InadmissibleDesignError, NoAdmissibleSetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LabelError, ObservationError, CapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
