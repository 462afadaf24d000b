#!/usr/bin/env python3
"""Run the built-in scenario suite and export trajectories, reports, and
charts into ./paper-figs (or a directory given as the first argument)."""

import sys
from pathlib import Path

from spillnet import builtin_scenarios, run


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("paper-figs")
    for scenario in builtin_scenarios():
        report = run(scenario, outdir=outdir)
        print(
            f"{scenario.name:22s} regime={report.prediction.regime:12s} "
            f"terminal g={report.convergence.growth_rate:9.6f} "
            f"transitions={len(report.transitions)}"
        )
    print(f"\nwrote outputs to {outdir}/")


if __name__ == "__main__":
    main()
