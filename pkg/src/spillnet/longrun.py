"""Long-run analysis: surviving technology sets, growth regimes, block
competition, and constructed technology transitions.

A set of technologies can sustain common exponential growth only when the
relative qualities z (normalized to sum 1 on the candidate support) solve

    z_j (F_i z)^(1/(1-nu)) = z_i (F_j z)^(1/(1-nu))   for all i, j in the support

with z strictly positive on the support and zero off it.  The autonomous
term alpha is dropped here: along any growing path alpha / q vanishes, so
the fixed point is alpha-free; alpha only affects transient selection,
which simulation resolves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .allocation import shares_from_productivities
from .dynamics import Trajectory, simulate
from .model import (
    EconomyParams,
    Model,
    PreconditionError,
    QualityState,
    SpilloverMatrix,
    TransitionSearchExhaustedError,
    validate_model,
)
from .structure import StructureReport, classify

EXHAUSTIVE_LIMIT = 12
SUPPORT_LIMIT = 20

_DAMPING = 0.5
_FP_TOL = 1e-12
_FP_MAX_ITER = 100_000
_RESIDUAL_TOL = 1e-9
_POSITIVITY_FLOOR = 1e-6
_STABILITY_TOL = 1e-6


@dataclass(frozen=True)
class LongRunSolution:
    """One candidate surviving set with its relative qualities and rate."""

    support: frozenset[int]
    stagnant: frozenset[int]
    z_star: np.ndarray
    shares_inf: np.ndarray
    growth_rate: float
    residual: float


@dataclass(frozen=True)
class RegimePrediction:
    regime: str  # stagnating | linear | polynomial | exponential
    reason: str
    survivors: frozenset[int] | None
    candidates: tuple[LongRunSolution, ...]
    initial_condition_dependent: bool


@dataclass(frozen=True)
class TransitionDesign:
    phi1: float
    phi2: float
    model: Model
    trajectory: Trajectory


def _support_field(z, f_sub, nu, s_total):
    """zdot on the support simplex at alpha = 0 (clamped against tiny
    negative productivities from finite-difference probes)."""
    p = np.maximum(f_sub @ z, 0.0)
    s = shares_from_productivities(p, nu)
    v = (s * s_total) ** nu * p
    return v - v.sum() * z


def _interior_unstable(z, f_sub, nu, s_total, scale) -> bool:
    """True when the equal-growth point repels within its own simplex.

    The Jacobian of the share-weighted field is estimated by central
    differences and restricted to the tangent space sum(dz) = 0; any
    eigenvalue with clearly positive real part marks a saddle that the
    dynamics cannot settle on.
    """
    m = z.size
    if m == 1:
        return False
    h = 1e-7
    jac = np.empty((m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        fp = _support_field(z + e, f_sub, nu, s_total)
        fm = _support_field(z - e, f_sub, nu, s_total)
        jac[:, k] = (fp - fm) / (2 * h)
    # orthonormal basis of the simplex tangent space
    _, _, vt = np.linalg.svd(np.ones((1, m)))
    basis = vt[1:]
    reduced = basis @ jac @ basis.T
    max_re = float(np.linalg.eigvals(reduced).real.max())
    return max_re > _STABILITY_TOL * max(1.0, scale)


def _solve_on_support(f, support, nu, s_total):
    """Damped nonlinear power iteration z <- normalize(diag((sS)^nu) F z)
    restricted to the support; None when it fails to converge or leaves
    the positive region.

    Damping starts at 0.5 and shrinks whenever the update direction
    reverses: on bipartite cores with strong share concentration (large
    1/(1-nu)) a fixed 0.5 settles into a stable 2-cycle instead of the
    fixed point.
    """
    idx = sorted(support)
    f_sub = f[np.ix_(idx, idx)]
    m = len(idx)
    z = np.full(m, 1.0 / m)
    lam = _DAMPING
    prev_delta = None
    for _ in range(_FP_MAX_ITER):
        u = f_sub @ z
        if u.min() <= 0.0:
            return None
        s = shares_from_productivities(u, nu)
        w = (s * s_total) ** nu * u
        delta = w / w.sum() - z
        if prev_delta is not None and float(delta @ prev_delta) < 0.0:
            lam = max(0.5 * lam, 1e-3)
        prev_delta = delta
        z_new = z + lam * delta
        if np.abs(z_new - z).max() < _FP_TOL:
            return idx, f_sub, z_new
        z = z_new
    return None


def _pairwise_residual(z, f_sub, nu) -> float:
    u = (f_sub @ z) ** (1.0 / (1.0 - nu))
    # violation of z_j u_i = z_i u_j, scale-free in both z and u
    cross = np.abs(np.outer(u, z) - np.outer(z, u))
    denom = max(z.max() * u.max(), np.finfo(float).tiny)
    return float(cross.max() / denom)


def _candidate_supports(f: np.ndarray, report: StructureReport) -> list[frozenset[int]]:
    n = f.shape[0]
    positive = f > 0
    nonzero = f != 0

    def admissible(mask: np.ndarray) -> bool:
        inside = np.flatnonzero(mask)
        outside = np.flatnonzero(~mask)
        # every member needs a positive inflow from within the support
        if not np.all(positive[np.ix_(inside, inside)].any(axis=1)):
            return False
        # exclusion of outsiders is only stable when the support exerts no
        # influence on them
        if outside.size and nonzero[np.ix_(outside, inside)].any():
            return False
        return True

    candidates = []
    if n <= EXHAUSTIVE_LIMIT:
        for r in range(1, n + 1):
            for combo in itertools.combinations(range(n), r):
                mask = np.zeros(n, dtype=bool)
                mask[list(combo)] = True
                if admissible(mask):
                    candidates.append(frozenset(combo))
    else:
        # only unions of cores together with everything they feed can
        # satisfy the closure conditions, so enumerate those
        reach = report.closure
        core_closures = []
        for core in report.cores:
            mask = np.zeros(n, dtype=bool)
            mask[list(core)] = True
            fed = reach[:, mask].any(axis=1)
            core_closures.append(frozenset(np.flatnonzero(mask | fed).tolist()))
        core_closures = sorted(set(core_closures), key=sorted)
        for r in range(1, len(core_closures) + 1):
            for combo in itertools.combinations(core_closures, r):
                merged = frozenset().union(*combo)
                mask = np.zeros(n, dtype=bool)
                mask[list(merged)] = True
                if admissible(mask):
                    candidates.append(merged)
        candidates = sorted(set(candidates), key=sorted)
    return candidates


def solve_support_system(
    matrix: SpilloverMatrix, params: EconomyParams
) -> list[LongRunSolution]:
    """All stable candidate surviving sets with their relative qualities,
    asymptotic shares, and common growth rate.

    A support is accepted iff its fixed point converges, stays strictly
    positive, satisfies the pairwise equations to within 1e-9, excludes
    every outside technology structurally, and does not repel within its
    own simplex.  Diagonal matrices short-circuit to the max-intra-spillover
    singletons, which is the selection the independent-technology case pins
    down analytically.
    """
    n = matrix.n
    if n > SUPPORT_LIMIT:
        raise PreconditionError(
            f"support enumeration handles n <= {SUPPORT_LIMIT}, got {n}"
        )
    report = classify(matrix)
    if not (matrix.nonnegative or report.eventually_nonnegative[0]):
        raise PreconditionError(
            "long-run analysis requires a nonnegative or eventually "
            "nonnegative spillover matrix"
        )
    f = matrix.entries

    if not np.any(f[~np.eye(n, dtype=bool)]):
        # independent technologies: the largest self-spillover wins
        diag = np.diag(f)
        top = diag.max()
        if top <= 0:
            return []
        solutions = []
        for i in np.flatnonzero(diag == top):
            z = np.zeros(n)
            z[i] = 1.0
            solutions.append(
                LongRunSolution(
                    support=frozenset({int(i)}),
                    stagnant=frozenset(range(n)) - {int(i)},
                    z_star=z,
                    shares_inf=z.copy(),
                    growth_rate=float(params.s_total**params.nu * top),
                    residual=0.0,
                )
            )
        return solutions

    solutions = []
    seen: set[frozenset[int]] = set()
    for support in _candidate_supports(f, report):
        solved = _solve_on_support(f, support, params.nu, params.s_total)
        if solved is None:
            continue
        idx, f_sub, z = solved
        if z.min() < _POSITIVITY_FLOOR:
            continue
        residual = _pairwise_residual(z, f_sub, params.nu)
        if residual >= _RESIDUAL_TOL:
            continue
        u = f_sub @ z
        s = shares_from_productivities(u, params.nu)
        growth = float(
            np.linalg.eigvals(np.diag((s * params.s_total) ** params.nu) @ f_sub)
            .real.max()
        )
        if _interior_unstable(z, f_sub, params.nu, params.s_total, abs(growth)):
            continue
        if support in seen:
            continue
        seen.add(support)
        z_full = np.zeros(n)
        z_full[idx] = z
        s_full = np.zeros(n)
        s_full[idx] = s
        solutions.append(
            LongRunSolution(
                support=support,
                stagnant=frozenset(range(n)) - support,
                z_star=z_full,
                shares_inf=s_full,
                growth_rate=growth,
                residual=residual,
            )
        )
    return solutions


def predict_regime(
    report: StructureReport, matrix: SpilloverMatrix, params: EconomyParams
) -> RegimePrediction:
    """Long-run growth regime from the spillover structure alone.

    stagnating: no positive spillovers at all (qualities at most linear,
    rates tending to zero).  linear/polynomial: edges but no cycle; the
    label is polynomial when some technology receives a chained spillover
    (a path through at least one intermediate).  exponential: some cycle
    whose induced submatrix has a positive dominant eigenvalue; survivor
    candidates then come from the support solver, which restricts inputs
    to nonnegative or eventually nonnegative matrices of desk scale.
    """
    f = matrix.entries
    n = matrix.n
    adj = report.adjacency

    exponential_core = None
    for core in report.cores:
        idx = sorted(core)
        sub_dom = float(np.linalg.eigvals(f[np.ix_(idx, idx)]).real.max())
        if sub_dom > 0:
            exponential_core = core
            break

    if exponential_core is not None:
        candidates = tuple(solve_support_system(matrix, params))
        if len(candidates) == 1:
            survivors: frozenset[int] | None = candidates[0].support
            path_dependent = False
        else:
            survivors = None
            path_dependent = True
        if "homogeneous" in report.classes:
            reason = "homogeneous"
        elif "strongly-connected" in report.classes:
            reason = "strongly-connected"
        else:
            reason = "circular-chain"
        return RegimePrediction(
            regime="exponential",
            reason=reason,
            survivors=survivors,
            candidates=candidates,
            initial_condition_dependent=path_dependent,
        )

    if not adj.any():
        return RegimePrediction(
            regime="stagnating",
            reason="no-spillovers",
            survivors=frozenset(range(n)),
            candidates=(),
            initial_condition_dependent=False,
        )

    chained = (adj @ adj).any()
    return RegimePrediction(
        regime="polynomial" if chained else "linear",
        reason="one-way",
        survivors=None,
        candidates=(),
        initial_condition_dependent=False,
    )


def block_winner(
    matrix: SpilloverMatrix, params: EconomyParams, q0: QualityState
) -> frozenset[int]:
    """Predicted winning block for separated technology clusters.

    With no intra-technology spillovers, a uniform start hands victory to
    the block whose share-weighted submatrix grows fastest; when all
    spillovers are equal in size, a unique head-start technology drags its
    whole block to victory instead.
    """
    if np.any(np.diag(matrix.entries) != 0):
        raise PreconditionError(
            "block-winner analysis assumes no intra-technology spillovers"
        )
    if not matrix.nonnegative:
        raise PreconditionError("block-winner analysis requires a nonnegative matrix")
    if q0.n != matrix.n:
        raise PreconditionError("initial quality vector has the wrong length")
    report = classify(matrix)
    blocks = sorted(report.weak_components, key=sorted)
    if len(blocks) == 1:
        return blocks[0]

    f = matrix.entries
    nonzero = f[f != 0]
    equal_weights = nonzero.size > 0 and np.all(nonzero == nonzero.flat[0])
    top = np.flatnonzero(q0.q == q0.q.max())
    if equal_weights and top.size == 1:
        leader = int(top[0])
        for block in blocks:
            if leader in block:
                return block

    best_block = None
    best_rate = -np.inf
    for block in blocks:
        solved = _solve_on_support(f, block, params.nu, params.s_total)
        if solved is None:
            continue
        idx, f_sub, z = solved
        s = shares_from_productivities(f_sub @ z, params.nu)
        rate = float(
            np.linalg.eigvals(np.diag((s * params.s_total) ** params.nu) @ f_sub)
            .real.max()
        )
        if rate > best_rate:
            best_rate = rate
            best_block = block
    if best_block is None:
        raise PreconditionError("no block admits a growing allocation")
    return best_block


def _validate_chain(f: np.ndarray, clusters: list[list[int]]) -> None:
    n = f.shape[0]
    flat = [i for c in clusters for i in c]
    if sorted(flat) != list(range(n)):
        raise PreconditionError("clusters must partition the technology indices")
    if len(clusters) < 2:
        raise PreconditionError("a transition needs at least two clusters")
    from .structure import closure  # local import to keep module deps one-way

    for c in clusters:
        sub = f[np.ix_(c, c)] > 0
        if not closure(sub).all():
            raise PreconditionError(
                f"cluster {c} is not internally strongly connected"
            )
    for k in range(len(clusters) - 1):
        giver, receiver = clusters[k], clusters[k + 1]
        if not np.any(f[np.ix_(receiver, giver)] > 0):
            raise PreconditionError(
                f"no one-way spillover link from cluster {giver} to {receiver}"
            )
    if len(clusters) == 2:
        c1, c2 = clusters
        if np.any(f[np.ix_(c1, c2)] != 0):
            raise PreconditionError(
                "two-cluster transitions require strictly one-way spillovers "
                "(no feedback into the first cluster)"
            )


def construct_transition(
    matrix: SpilloverMatrix,
    params: EconomyParams,
    clusters: list[list[int]],
    q0: QualityState | None = None,
    horizon: float = 60.0,
    step: float = 1e-2,
    max_power: int = 8,
) -> TransitionDesign:
    """Find (phi1, phi2) staging a technology transition on a chained
    cluster structure: phi2 multiplies the last cluster's internal
    spillovers, phi1 is added to the first cluster's initial qualities.

    Success means the first cluster holds the majority scientist share at
    t = 0 while the last cluster ends holding all but 1e-3 of it.  For two
    clusters the link must be strictly one-way; longer chains are accepted
    with extra cross-links, the multi-block generalization.
    """
    f = matrix.entries
    clusters = [sorted(int(i) for i in c) for c in clusters]
    _validate_chain(f, clusters)
    if q0 is None:
        q0 = QualityState(0.0, np.ones(matrix.n))
    first, last = clusters[0], clusters[-1]

    best = None
    powers = [2.0**k for k in range(max_power + 1)]
    # the terminal share of the last cluster is set by the fixed point and
    # thus by phi2; per phi2 it suffices to try the smallest phi1 that
    # hands the first cluster the initial majority
    for phi2 in powers:
        scaled = f.copy()
        scaled[np.ix_(last, last)] *= phi2
        for phi1 in powers:
            q_start = q0.q.copy()
            q_start[first] += phi1
            p = scaled @ q_start + params.alpha
            if p.min() < 0:
                continue
            shares0 = shares_from_productivities(p, params.nu)
            if shares0[first].sum() <= 0.5:
                continue
            model = validate_model(
                SpilloverMatrix(scaled), params, QualityState(0.0, q_start)
            )
            traj = simulate(model, horizon, step=step)
            terminal = float(traj.shares[-1][last].sum())
            if best is None or terminal > best[2]:
                best = (phi1, phi2, terminal)
            if terminal > 1.0 - 1e-3:
                return TransitionDesign(
                    phi1=phi1, phi2=phi2, model=model, trajectory=traj
                )
            break
    raise TransitionSearchExhaustedError(
        f"no (phi1, phi2) pair up to 2^{max_power} produced a confirmed "
        "transition",
        best_candidate=best,
    )
