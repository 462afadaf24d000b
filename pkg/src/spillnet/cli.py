"""Command-line interface.

Exit codes: 0 success, 2 validation or parse failure, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from pathlib import Path

from .longrun import predict_regime, solve_support_system
from .model import NumericalError, SpillnetError, ValidationError
from .scenarios import (
    Scenario,
    builtin_scenarios,
    load_scenario,
    run,
    run_with_overrides,
)
from .structure import classify

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _print_structure(scenario: Scenario) -> None:
    report = classify(scenario.matrix)
    print(f"scenario: {scenario.name}")
    print(f"classes: {', '.join(sorted(report.classes))}")
    print(f"cores: {[sorted(c) for c in report.cores] or 'none'}")
    print(f"irreducible: {report.irreducible}")
    print(f"weak components: {[sorted(c) for c in report.weak_components]}")
    print(f"dominant eigenvalue: {report.dominant_eigenvalue:.9g}")
    flag, k = report.eventually_nonnegative
    print(f"eventually nonnegative: {flag}" + (f" (witness power {k})" if flag else ""))
    if report.negative_edges:
        print(f"negative entries at: {[list(e) for e in report.negative_edges]}")
    if report.spectrum is not None:
        eigs = ", ".join(f"{e:.6g}" for e in report.spectrum)
        print(f"spectrum: {eigs}")


def _cmd_classify(args) -> int:
    scenario = load_scenario(args.file)
    _print_structure(scenario)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scenario = run_with_overrides(load_scenario(args.file), args.horizon, args.step)
    report = run(scenario, outdir=args.out)
    print(f"simulated {scenario.name} to t = {scenario.horizon:g}")
    print(f"regime: {report.prediction.regime}")
    print(f"terminal growth rate: {report.convergence.growth_rate:.6g}")
    print(f"realized support: {sorted(report.realized_support)}")
    for e in report.transitions:
        print(
            f"transition at t={e.time:g}: {sorted(e.old_leaders)} -> {sorted(e.new_leaders)}"
        )
    if report.outputs:
        for kind, path in report.outputs.items():
            print(f"wrote {kind}: {path}")
    return EXIT_OK


def _cmd_longrun(args) -> int:
    scenario = load_scenario(args.file)
    report = classify(scenario.matrix)
    prediction = predict_regime(report, scenario.matrix, scenario.params)
    print(f"regime: {prediction.regime} (reason: {prediction.reason})")
    solutions = (
        list(prediction.candidates)
        if prediction.candidates
        else solve_support_system(scenario.matrix, scenario.params)
    )
    if not solutions:
        print("no growing long-run solution")
    for sol in solutions:
        zs = ", ".join(f"{v:.6g}" for v in sol.z_star)
        print(
            f"support {sorted(sol.support)}: g = {sol.growth_rate:.9g}, "
            f"z* = [{zs}], residual = {sol.residual:.3g}"
        )
    if prediction.initial_condition_dependent:
        print("realized support depends on initial conditions")
    return EXIT_OK


def _cmd_paper_figs(args) -> int:
    outdir = Path(args.out)
    for scenario in builtin_scenarios():
        report = run(scenario, outdir=outdir)
        status = report.prediction.regime
        print(f"{scenario.name}: regime={status}, "
              f"terminal g={report.convergence.growth_rate:.6g}")
    print(f"outputs in {outdir}")
    return EXIT_OK


def _run_one(path_and_out: tuple[str, str | None]):
    path, out = path_and_out
    scenario = load_scenario(path)
    report = run(scenario, outdir=out)
    return scenario.name, report.prediction.regime, report.convergence.growth_rate


def _cmd_sweep(args) -> int:
    files = sorted(Path(args.dir).glob("*.json"))
    if not files:
        raise ValidationError(f"no scenario JSON files in {args.dir}")
    jobs = [(str(f), args.out) for f in files]
    results = {}
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
        for name, regime, growth in pool.map(_run_one, jobs):
            results[name] = (regime, growth)
    for name in sorted(results):
        regime, growth = results[name]
        print(f"{name}: regime={regime}, terminal g={growth:.6g}")
    if args.out:
        index = {
            name: {"regime": regime, "terminal_growth": growth}
            for name, (regime, growth) in results.items()
        }
        Path(args.out, "sweep.json").write_text(
            json.dumps(index, indent=2, sort_keys=True) + "\n"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spillnet",
        description="Simulate and classify R&D growth under cross-technology "
        "spillover structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="structural report for a scenario file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("simulate", help="integrate a scenario and export results")
    p.add_argument("file")
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("longrun", help="long-run supports and growth rates")
    p.add_argument("file")
    p.set_defaults(func=_cmd_longrun)

    p = sub.add_parser("paper-figs", help="run the built-in example suite")
    p.add_argument("--out", default="paper-figs")
    p.set_defaults(func=_cmd_paper_figs)

    p = sub.add_parser("sweep", help="run every scenario JSON in a directory")
    p.add_argument("dir")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SpillnetError as e:
        # validation errors plus model-domain violations (negative
        # productivity, degenerate economy)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"i/o failure: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
