"""Command-line front end.

Exit codes: 0 on success, 1 on domain/config/budget errors or a failed
verification, 2 on usage errors. ``RELBOUNDS_OUTPUT_DIR`` sets the directory
for relative ``--output`` paths and for ``figures``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analytic, binomial, bounds, capacity
from .errors import BudgetError, ConfigError, DenominatorZeroError, DivergenceError, DomainError
from .io import emit_report, load_config
from .models import ParetoLoss

OUTPUT_DIR_ENV = "RELBOUNDS_OUTPUT_DIR"


def _add_output(p, formats=("json",)):
    p.add_argument("--output", help="file to write (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relbounds", description="Relative deviation bounds toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate a closed-form bound")
    b.add_argument("--id", required=True, dest="bound_id",
                   help="one of: " + ", ".join(sorted(bounds.BOUNDS)))
    for name in ("alpha", "epsilon", "tau", "nu", "v", "delta", "rate", "moment",
                 "shatter", "growth", "log-shatter"):
        b.add_argument(f"--{name}", type=float)
    for name in ("m", "vc-dim", "pdim", "n"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--direction")
    _add_output(b)

    s = sub.add_parser("binomial-scan", help="grid certificate for the binomial 1/4 lemmas")
    s.add_argument("--which", choices=(binomial.GEQ_MEAN, binomial.LEQ_MEAN), default=binomial.GEQ_MEAN)
    s.add_argument("--m-max", type=int, default=200)
    s.add_argument("--resolution", type=float, default=1e-3)
    s.add_argument("--k", type=int, default=1)
    _add_output(s, ("csv", "json"))

    c = sub.add_parser("capacity", help="shatter/growth/VC/pseudo-dimension of a table")
    c.add_argument("--table", required=True, help="CSV table (binary, or losses for pdim)")
    c.add_argument("--op", required=True, choices=("shatter", "growth", "vc", "pdim"))
    c.add_argument("--m", type=int)
    c.add_argument("--sample", help="comma-separated domain indices for --op shatter")
    c.add_argument("--max-domain", type=int, default=capacity.DEFAULT_BUDGET.max_domain)
    c.add_argument("--max-subset", type=int, default=capacity.DEFAULT_BUDGET.max_subset)
    _add_output(c)

    a = sub.add_parser("analytic", help="analytic checks")
    a.add_argument("--op", required=True, choices=("approx", "f", "monotonicity", "moment", "sqrt-tail"))
    a.add_argument("--epsilon", type=float)
    a.add_argument("--beta", type=float, default=0.75)
    a.add_argument("--alpha", type=float)
    a.add_argument("--eta", type=float)
    a.add_argument("--x", type=float)
    a.add_argument("--y", type=float)
    a.add_argument("--variant", choices=(analytic.HALVED, analytic.PLAIN), default=analytic.HALVED)
    a.add_argument("--samples", type=int, default=100000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--pareto-shape", type=float)
    a.add_argument("--pareto-scale", type=float, default=1.0)
    _add_output(a, ("json", "csv"))

    e = sub.add_parser("experiment", help="run a Monte Carlo verification from a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--records", help="JSON-lines file receiving per-trial records")
    _add_output(e, ("json", "csv"))

    f = sub.add_parser("figures", help="write the binomial-scan and approximation CSVs")
    f.add_argument("--output-dir")
    f.add_argument("--m-max", type=int, default=14)
    f.add_argument("--resolution", type=float, default=1e-3)
    return parser


def _resolve(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _write(text: str, output: str | None, stdout):
    if output:
        p = _resolve(output)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    else:
        stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cmd_bound(args, stdout, stderr):
    kw = {"alpha": args.alpha, "epsilon": args.epsilon, "tau": args.tau, "nu": args.nu,
          "v": args.v, "delta": args.delta, "m": args.m, "rate": args.rate, "moment": args.moment,
          "shatter": args.shatter, "growth": args.growth, "log_shatter": args.log_shatter,
          "vc_dim": args.vc_dim, "pdim": args.pdim, "n": args.n, "direction": args.direction}
    result = bounds.evaluate(args.bound_id, **kw)
    _write(_json({"id": args.bound_id, **result}), args.output, stdout)
    return 0


def _cmd_scan(args, stdout, stderr):
    res = binomial.certify_lemma(args.which, args.m_max, args.resolution, args.k)
    _write(res.to_csv() if args.format == "csv" else res.to_json() + "\n", args.output, stdout)
    return 0


def _cmd_capacity(args, stdout, stderr):
    budget = capacity.Budget(args.max_domain, args.max_subset)
    if args.op == "pdim":
        value = capacity.pseudo_dimension(capacity.LossTable.from_csv(args.table), "auto", budget)
    else:
        table = capacity.HypothesisTable.from_csv(args.table)
        if args.op == "shatter":
            if not args.sample:
                raise DomainError("--sample is required for --op shatter")
            value = capacity.shatter_count(table, [int(i) for i in args.sample.split(",")])
        elif args.op == "growth":
            if args.m is None:
                raise DomainError("--m is required for --op growth")
            value = capacity.growth_function(table, args.m, budget)
        else:
            value = capacity.vc_dimension(table, budget)
    _write(_json({"op": args.op, "value": value}), args.output, stdout)
    return 0


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise DomainError("missing --" + ", --".join(missing))


def _cmd_analytic(args, stdout, stderr):
    if args.op == "approx":
        if args.epsilon is None:
            rows = analytic.approx_grid(analytic.default_approx_epsilons(), args.beta)
            text = analytic.approx_csv(rows) if args.format == "csv" else _json(
                {"beta": args.beta, "holds": all(lhs <= rhs for _, lhs, rhs in rows),
                 "points": len(rows)})
        else:
            r = analytic.approx_check(args.epsilon, args.beta)
            text = _json(r._asdict())
    elif args.op == "f":
        _need(args, "alpha", "eta", "x", "y")
        val = analytic.f_value(analytic.FParams(args.alpha, args.eta), args.x, args.y, args.variant)
        text = _json({"f": val})
    elif args.op == "monotonicity":
        _need(args, "alpha", "eta")
        r = analytic.monotonicity_probe(analytic.FParams(args.alpha, args.eta), args.samples,
                                        args.seed, args.variant)
        text = _json(r._asdict())
    elif args.op == "moment":
        _need(args, "pareto-shape", "alpha")
        model = ParetoLoss(args.pareto_shape, args.pareto_scale)
        exact = model.moment(args.alpha)
        val = analytic.tail_integral_moment(model.tail, args.alpha, [model.scale])
        text = _json({"quadrature": val, "closed_form": exact})
    else:
        _need(args, "pareto-shape", "alpha")
        model = ParetoLoss(args.pareto_shape, args.pareto_scale)
        r = analytic.sqrt_tail_dominance(model.tail, model.moment(args.alpha), args.alpha, [model.scale])
        text = _json(r._asdict())
    _write(text, args.output, stdout)
    return 0


def _cmd_experiment(args, stdout, stderr):
    from .montecarlo import run_experiment

    config = load_config(args.config)
    if args.records:
        p = _resolve(args.records)
        p.parent.mkdir(parents=True, exist_ok=True)
        with p.open("w") as fh:
            report = run_experiment(config, records=fh)
    else:
        report = run_experiment(config)
    _write(emit_report(report, args.format), args.output, stdout)
    if report.any_fail:
        stderr.write("verification failed: an empirical frequency exceeds its bound\n")
        return 1
    return 0


def _cmd_figures(args, stdout, stderr):
    out = Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    scan = binomial.certify_lemma(binomial.GEQ_MEAN, args.m_max, args.resolution)
    (out / "binomial_tail_geq_mean.csv").write_text(scan.to_csv())
    scan2 = binomial.certify_lemma(binomial.GEQ_MEAN, args.m_max, args.resolution, k=2)
    (out / "binomial_tail_geq_mean_k2.csv").write_text(scan2.to_csv())
    rows = analytic.approx_grid(analytic.default_approx_epsilons(), 0.75)
    (out / "approximation.csv").write_text(analytic.approx_csv(rows))
    stdout.write(_json({"binomial_min": scan.min_value, "all_above_quarter": scan.all_above_quarter,
                        "files": sorted(p.name for p in out.glob("*.csv"))}))
    return 0


_COMMANDS = {"bound": _cmd_bound, "binomial-scan": _cmd_scan, "capacity": _cmd_capacity,
             "analytic": _cmd_analytic, "experiment": _cmd_experiment, "figures": _cmd_figures}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, stdout, stderr)
    except (DomainError, ConfigError, BudgetError, DivergenceError, DenominatorZeroError) as exc:
        stderr.write(_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
