"""Market-clearing scientist allocation and production-side statics.

The share of scientists hired by R&D firm i is

    s_i = (F_i q + alpha)^(1/(1-nu)) / sum_j (F_j q + alpha)^(1/(1-nu)),

the outcome of perfect competition for a fixed supply of scientists when
all firms face the same marginal return to quality.  Everything here is a
pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    DegenerateEconomyError,
    DimensionMismatchError,
    EconomyParams,
    MarketStatics,
    NegativeProductivityError,
    QualityState,
    SpilloverMatrix,
)


@dataclass(frozen=True)
class AllocationShares:
    """Scientist shares s_i (a simplex vector) and headcounts S_i = s_i * S."""

    shares: np.ndarray
    scientists: np.ndarray


def shares_from_productivities(p: np.ndarray, nu: float) -> np.ndarray:
    """Simplex of shares from raw R&D productivities p_i = F_i q + alpha.

    Productivities are normalized by their maximum before exponentiation:
    shares are homogeneous of degree zero in p, and the rescaling prevents
    overflow when 1/(1-nu) is large.  All-zero productivities mean firms
    are indistinguishable, which yields the uniform allocation.
    """
    p = np.asarray(p, dtype=float)
    pmax = p.max()
    if pmax <= 0.0:
        return np.full(p.shape, 1.0 / p.size)
    w = (p / pmax) ** (1.0 / (1.0 - nu))
    return w / w.sum()


def compute_shares(
    matrix: SpilloverMatrix, q: QualityState, params: EconomyParams
) -> AllocationShares:
    """Market-clearing allocation of scientists at quality vector q."""
    if q.n != matrix.n:
        raise DimensionMismatchError(
            f"quality vector has length {q.n} but matrix is {matrix.n}x{matrix.n}"
        )
    p = matrix.entries @ q.q + params.alpha
    bad = np.flatnonzero(p < 0)
    if bad.size:
        raise NegativeProductivityError(
            f"productivity F_i q + alpha is negative for rows {bad.tolist()}"
        )
    s = shares_from_productivities(p, params.nu)
    return AllocationShares(shares=s, scientists=s * params.s_total)


def market_statics(q: QualityState, params: EconomyParams) -> MarketStatics:
    """Wage, labor allocation, prices, profits, outputs, and sector output.

    Closed forms under beta = 1/2: the wage clearing the unit labor supply
    is w = (c/2) sqrt(sum q); labor splits proportionally to quality; the
    monopoly price is the 2x markup on marginal labor cost w/q_i.
    """
    total = q.q.sum()
    if total <= 0.0:
        raise DegenerateEconomyError("all qualities are zero; no production possible")
    w = 0.5 * params.c * np.sqrt(total)
    labor = q.q / total
    with np.errstate(divide="ignore"):
        prices = np.where(q.q > 0, 2.0 * w / np.where(q.q > 0, q.q, 1.0), np.inf)
    flagged = tuple(int(i) for i in np.flatnonzero(q.q == 0))
    profits = params.c**2 / (4.0 * w) * q.q
    outputs = q.q * labor
    y_l = float(np.sqrt(outputs).sum() ** 2)
    return MarketStatics(
        wage=float(w),
        labor=labor,
        prices=prices,
        profits=profits,
        outputs=outputs,
        y_l=y_l,
        flagged_prices=flagged,
    )
