"""Graph-theoretic classification of a spillover matrix.

The adjacency matrix keeps the strict positive-edge definition
(a_ij = 1 iff F_ij > 0).  When negative entries are present they still
transmit influence, so reachability (closure, components, cores) is
computed over nonzero entries and the negative positions are reported
separately; the named structure classes are only granted when the matrix
is nonnegative or eventually nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SpilloverMatrix

DENSE_SPECTRUM_LIMIT = 16


@dataclass(frozen=True)
class StructureReport:
    adjacency: np.ndarray
    closure: np.ndarray
    classes: frozenset[str]
    cores: tuple[frozenset[int], ...]
    irreducible: bool
    weak_components: tuple[frozenset[int], ...]
    eventually_nonnegative: tuple[bool, int | None]
    dominant_eigenvalue: float
    spectrum: tuple[complex, ...] | None
    negative_edges: tuple[tuple[int, int], ...]
    self_loops: tuple[int, ...]


def adjacency(matrix: SpilloverMatrix) -> np.ndarray:
    """Boolean matrix with a_ij = 1 iff technology i receives a positive
    spillover from technology j."""
    return matrix.entries > 0


def closure(a: np.ndarray) -> np.ndarray:
    """Reachability closure: OR-accumulated boolean powers A^1 .. A^n.

    Entry (i, j) is true iff a directed path of length 1..n leads from j
    to i (following the receiver-row edge convention of `adjacency`).
    """
    a = np.asarray(a, dtype=bool)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"closure needs a square boolean matrix, got {a.shape}")
    reach = a.copy()
    power = a.copy()
    for _ in range(a.shape[0] - 1):
        power = (power @ a) > 0
        new = reach | power
        if np.array_equal(new, reach):
            break
        reach = new
    return reach


def topological_order(a: np.ndarray) -> list[int] | None:
    """Kahn topological sort of the digraph (edge j -> i iff a[i, j]);
    None when a cycle (including a self-loop) exists."""
    a = np.asarray(a, dtype=bool)
    n = a.shape[0]
    indeg = a.sum(axis=1)
    order: list[int] = []
    ready = [i for i in range(n) if indeg[i] == 0]
    indeg = indeg.copy()
    while ready:
        j = ready.pop()
        order.append(j)
        for i in np.flatnonzero(a[:, j]):
            indeg[i] -= 1
            if indeg[i] == 0:
                ready.append(int(i))
    return order if len(order) == n else None


def strongly_connected_components(reach: np.ndarray) -> list[frozenset[int]]:
    """SCCs from a reachability closure: i and j are equivalent iff each
    reaches the other (or i == j)."""
    n = reach.shape[0]
    seen: set[int] = set()
    comps = []
    mutual = reach & reach.T
    for i in range(n):
        if i in seen:
            continue
        comp = {i} | {int(j) for j in np.flatnonzero(mutual[i])}
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def weak_components(reach: np.ndarray) -> list[frozenset[int]]:
    """Connected components of the closure with edge direction ignored."""
    n = reach.shape[0]
    sym = reach | reach.T
    seen: set[int] = set()
    comps = []
    for i in range(n):
        if i in seen:
            continue
        comp = {i}
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in np.flatnonzero(sym[j]):
                k = int(k)
                if k not in comp:
                    comp.add(k)
                    frontier.append(k)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_eventually_nonnegative(
    matrix: SpilloverMatrix, k_max: int = 50, tol: float = 1e-9
) -> tuple[bool, int | None]:
    """Smallest k <= k_max with F^k >= -tol elementwise, if one exists.

    Powers are rescaled to unit max-norm after each multiplication, which
    preserves the sign pattern while preventing overflow; `tol` therefore
    applies on the max-norm-1 scale.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    f = matrix.entries
    power = f.copy()
    for k in range(1, k_max + 1):
        scale = np.abs(power).max()
        if scale > 0:
            power = power / scale
        if power.min() >= -tol:
            return True, k
        power = power @ f
    return False, None


def dominant_eigenvalue_power(
    matrix: SpilloverMatrix, tol: float = 1e-14, max_iter: int = 100_000
) -> float:
    """Rightmost eigenvalue estimate by power iteration on F + sigma*I,
    with sigma the maximum absolute row sum (keeps the shifted matrix
    nonnegative whenever F is, making its Perron root the target)."""
    f = matrix.entries
    sigma = float(np.abs(f).sum(axis=1).max())
    if sigma == 0.0:
        return 0.0
    b = f + sigma * np.eye(matrix.n)
    v = np.full(matrix.n, 1.0 / np.sqrt(matrix.n))
    lam = 0.0
    for _ in range(max_iter):
        w = b @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return -sigma
        v_new = w / norm
        lam_new = float(v_new @ (b @ v_new))
        if abs(lam_new - lam) < tol * max(1.0, abs(lam_new)):
            return lam_new - sigma
        v, lam = v_new, lam_new
    return lam - sigma


def _classes(
    matrix: SpilloverMatrix,
    reach: np.ndarray,
    weak: list[frozenset[int]],
    cores: list[frozenset[int]],
) -> frozenset[str]:
    f = matrix.entries
    n = matrix.n
    labels: set[str] = set()
    offdiag = ~np.eye(n, dtype=bool)
    if not np.any(reach & offdiag):
        labels.add("independent")
    if not cores:
        # acyclic including self-loops: permutation-triangularizable with
        # zero diagonal
        labels.add("one-way")
    if len(weak) >= 2:
        labels.add(f"separated({len(weak)})")
    if reach.all():
        labels.add("strongly-connected")
    first = f.flat[0]
    if first > 0 and np.all(f == first):
        labels.add("homogeneous")
    if not labels:
        labels.add("general")
    return frozenset(labels)


def classify(matrix: SpilloverMatrix) -> StructureReport:
    """Full structural report: adjacency, closure, Definition-style class
    labels, cores (cycles that can power exponential growth), reducibility,
    eventual nonnegativity, and spectrum."""
    f = matrix.entries
    n = matrix.n
    adj = adjacency(matrix)
    negative = tuple(
        (int(i), int(j)) for i, j in np.argwhere(f < 0)
    )
    influence = (f != 0) if negative else adj
    reach = closure(influence)
    weak = weak_components(reach)

    self_loops = tuple(int(i) for i in range(n) if f[i, i] > 0)
    sccs = strongly_connected_components(reach)
    cores = [c for c in sccs if len(c) >= 2]
    cores += [frozenset({i}) for i in self_loops]

    if matrix.nonnegative:
        evnn: tuple[bool, int | None] = (True, 1)
    else:
        evnn = is_eventually_nonnegative(matrix)

    if matrix.nonnegative or evnn[0]:
        classes = _classes(matrix, reach, weak, cores)
    else:
        # named spillover-structure labels only apply to (eventually)
        # nonnegative matrices
        classes = frozenset({"general"})

    if n == 1:
        irreducible = bool(reach[0, 0])
    else:
        irreducible = bool(reach.all())

    if n <= DENSE_SPECTRUM_LIMIT:
        eigs = np.linalg.eigvals(f)
        spectrum: tuple[complex, ...] | None = tuple(complex(e) for e in eigs)
        dominant = float(eigs.real.max())
    else:
        spectrum = None
        dominant = dominant_eigenvalue_power(matrix)

    return StructureReport(
        adjacency=adj,
        closure=reach,
        classes=classes,
        cores=tuple(cores),
        irreducible=irreducible,
        weak_components=tuple(weak),
        eventually_nonnegative=evnn,
        dominant_eigenvalue=dominant,
        spectrum=spectrum,
        negative_edges=negative,
        self_loops=self_loops,
    )
