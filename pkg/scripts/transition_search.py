#!/usr/bin/env python3
"""Search for staged technology transitions on chained cluster structures.

Two demonstrations: a pair of twin cycles joined by a one-way link, and the
three-stage chain of the built-in fig4-transitions matrix.  Each search
scales the final cluster's internal spillovers (phi2) and head-starts the
first cluster (phi1) until the run starts with the first cluster holding
the scientist majority and ends with the last cluster holding nearly all
of it.
"""

import sys
from pathlib import Path

import numpy as np

from spillnet import (
    EconomyParams,
    QualityState,
    SpilloverMatrix,
    builtin_scenario,
    construct_transition,
    detect_transitions,
)
from spillnet.svgchart import trajectory_chart


def describe(tag, design, outdir):
    traj = design.trajectory
    events = detect_transitions(traj, theta=0.6, hold=1.0)
    print(f"{tag}: phi1={design.phi1:g} phi2={design.phi2:g}")
    print(f"  initial shares: {np.round(traj.shares[0], 3)}")
    print(f"  terminal shares: {np.round(traj.shares[-1], 4)}")
    for e in events:
        print(f"  leaders {sorted(e.old_leaders)} -> {sorted(e.new_leaders)} at t={e.time:g}")
    path = outdir / f"{tag}.svg"
    path.write_text(
        trajectory_chart(traj.times, traj.shares, traj.tech_growth, traj.sector_growth)
    )
    print(f"  chart: {path}")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("transitions")
    outdir.mkdir(parents=True, exist_ok=True)
    params = EconomyParams(nu=0.5, alpha=0.0, s_total=1.0)

    linked_cycles = SpilloverMatrix(
        [[0, 1, 0, 0], [1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0]]
    )
    design = construct_transition(
        linked_cycles, params, clusters=[[0, 1], [2, 3]], horizon=60.0
    )
    describe("two-cluster", design, outdir)

    fig4 = builtin_scenario("fig4-transitions")
    design = construct_transition(
        fig4.matrix,
        params,
        clusters=[[0], [1], [2, 3]],
        q0=QualityState(0.0, fig4.q0.q),
        horizon=60.0,
    )
    describe("three-stage", design, outdir)


if __name__ == "__main__":
    main()
