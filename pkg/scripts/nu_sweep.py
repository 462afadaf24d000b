#!/usr/bin/env python3
"""Sweep the R&D labor exponent nu and report the asymptotic growth rate
for a few canonical spillover structures.

Higher nu concentrates scientists on the best-fed technologies (the share
exponent 1/(1-nu) grows), which reshapes both the surviving set's internal
balance and the common growth rate.
"""

import numpy as np

from spillnet import EconomyParams, SpilloverMatrix, solve_support_system

STRUCTURES = {
    "homogeneous 4x4 (f=1)": np.ones((4, 4)),
    "symmetric 2-cycle": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "asymmetric 2-cycle (2,8)": np.array([[0.0, 2.0], [8.0, 0.0]]),
    "circular 4-chain": np.array(
        [[0, 0, 0, 1], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]], dtype=float
    ),
}


def main():
    nus = [0.1, 0.25, 0.5, 0.75, 0.9]
    header = "structure".ljust(28) + "".join(f"nu={v:<8g}" for v in nus)
    print(header)
    print("-" * len(header))
    for name, f in STRUCTURES.items():
        rates = []
        for nu in nus:
            params = EconomyParams(nu=nu, alpha=0.0, s_total=1.0)
            sols = solve_support_system(SpilloverMatrix(f), params)
            rates.append(min(s.growth_rate for s in sols) if sols else float("nan"))
        print(name.ljust(28) + "".join(f"{r:<11.5f}" for r in rates))


if __name__ == "__main__":
    main()
