"""Exact hypergraph discrepancy by exhaustive search.

Two independent solvers share the same contract (global minimum over all 2^n
colourings plus a witness):

* ``disc_exact`` walks the colourings in binary-reflected Gray order, keeping
  all m edge sums incremental: each step flips one vertex and touches only the
  edges containing it.  Vertex 0 is pinned to +1 (global sign symmetry halves
  the space).  To avoid an O(m) max-scan per state, the kernel counts the
  edges whose |sum| has reached the incumbent; the incumbent can only improve
  when that count hits zero, which is exactly when a rescans happens.  Ties
  between optimal witnesses go to the first state in Gray order.

* ``disc_branch_bound`` is a depth-first assignment search pruned by the
  per-edge bound |partial sum| - (unassigned vertices of the edge) > best.

Both stop early once the incumbent meets the parity lower bound (1 if any
edge has odd size, else 0).

For n above 21 the Gray search is statically split into 16 partitions fixed
by the values of vertices 1..4; partitions may run on a thread pool.  The
partition layout depends only on n -- never on the thread count -- so results
are identical for every ``threads`` value.  Ties across partitions go to the
lowest partition index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .hypergraph import Colouring, Hypergraph, colouring_discrepancy

__all__ = ["ExactResult", "SearchBudgetExceeded", "disc_exact", "disc_branch_bound"]

_PARTITION_FREE_LIMIT = 20  # max Gray-enumerated vars per kernel call
_PARTITION_VARS = 4         # vertices 1..4 preset when splitting


class SearchBudgetExceeded(RuntimeError):
    """Search ran out of its node budget; carries the best colouring found."""

    def __init__(self, message: str, disc_upper: int, witness: Colouring, nodes: int):
        super().__init__(message)
        self.disc_upper = disc_upper
        self.witness = witness
        self.nodes = nodes


@dataclass(frozen=True)
class ExactResult:
    """disc(H) with a witness colouring attaining it."""

    disc: int
    witness: Colouring
    nodes_explored: int


def _parity_lower_bound(h: Hypergraph) -> int:
    return 1 if any(row.bit_count() % 2 for row in h.rows) else 0


@njit(cache=True, nogil=True)
def _gray_scan(
    sums0: np.ndarray,
    col_ptr: np.ndarray,
    col_idx: np.ndarray,
    nfree: int,
    lower_bound: int,
    max_states: int,
):
    """Gray-order scan over 2^nfree sign patterns of the free vertices.

    Returns (best, best_state, states_visited, completed).  best_state is the
    Gray *counter* index k of the first state attaining best; state 0 is the
    all-plus start.
    """
    m = sums0.shape[0]
    sums = sums0.copy()
    best = 0
    for e in range(m):
        a = sums[e]
        if a < 0:
            a = -a
        if a > best:
            best = a
    best_k = np.int64(0)
    states = np.int64(1)
    if best <= lower_bound:
        return best, best_k, states, True
    over = 0
    for e in range(m):
        a = sums[e]
        if a < 0:
            a = -a
        if a >= best:
            over += 1
    sign = np.ones(nfree, dtype=np.int8)
    total = np.int64(1) << nfree
    k = np.int64(1)
    while k < total:
        if states >= max_states:
            return best, best_k, states, False
        f = 0
        kk = k
        while kk & 1 == 0:
            kk >>= 1
            f += 1
        s = sign[f]
        sign[f] = -s
        delta = -2 * s
        for ptr in range(col_ptr[f], col_ptr[f + 1]):
            e = col_idx[ptr]
            old = sums[e]
            new = old + delta
            sums[e] = new
            ao = old if old >= 0 else -old
            an = new if new >= 0 else -new
            if ao >= best:
                over -= 1
            if an >= best:
                over += 1
        states += 1
        if over == 0:
            nb = 0
            for e in range(m):
                a = sums[e]
                if a < 0:
                    a = -a
                if a > nb:
                    nb = a
            best = nb
            best_k = k
            if best <= lower_bound:
                return best, best_k, states, True
            for e in range(m):
                a = sums[e]
                if a < 0:
                    a = -a
                if a >= best:
                    over += 1
        k += 1
    return best, best_k, states, True


def _column_csr(h: Hypergraph, cols: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """CSR of edge indices per listed column."""
    dense = h.dense()
    ptr = np.zeros(len(cols) + 1, dtype=np.int64)
    chunks = []
    for t, j in enumerate(cols):
        edges = np.nonzero(dense[:, j])[0].astype(np.int64)
        chunks.append(edges)
        ptr[t + 1] = ptr[t] + edges.size
    idx = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return ptr, idx


def _start_sums(h: Hypergraph, minus_mask: int) -> np.ndarray:
    """Edge sums of the colouring that is -1 on minus_mask and +1 elsewhere."""
    return np.array(
        [row.bit_count() - 2 * (row & minus_mask).bit_count() for row in h.rows],
        dtype=np.int64,
    )


def _state_colouring(n: int, free: list[int], preset_minus: int, k: int) -> Colouring:
    """Colouring of Gray state k: vertex 0 and non-flipped vertices are +1."""
    vals = np.ones(n, dtype=np.int8)
    for j in range(n):
        if preset_minus >> j & 1:
            vals[j] = -1
    gray = k ^ (k >> 1)
    for f, j in enumerate(free):
        if gray >> f & 1:
            vals[j] = -1
    return Colouring(vals)


def disc_exact(
    h: Hypergraph,
    limit_n: int = 30,
    threads: int = 1,
    max_nodes: int | None = None,
) -> ExactResult:
    """Minimum discrepancy over all colourings, by Gray-code enumeration.

    Raises ValueError when n exceeds limit_n, and SearchBudgetExceeded when a
    max_nodes budget runs out before the scan completes.
    """
    if h.n > limit_n:
        raise ValueError(f"instance too large: n={h.n} exceeds limit_n={limit_n}")
    if h.m == 0:
        return ExactResult(0, Colouring.all_plus(h.n), 1)
    lower = _parity_lower_bound(h)
    budget = np.int64(max_nodes) if max_nodes is not None else np.int64(2**62)

    if h.n - 1 <= _PARTITION_FREE_LIMIT:
        part_vars: list[int] = []
    else:
        part_vars = list(range(1, 1 + _PARTITION_VARS))
    free = [j for j in range(1, h.n) if j not in part_vars]
    col_ptr, col_idx = _column_csr(h, free)

    tasks = []
    for pidx in range(1 << len(part_vars)):
        preset_minus = 0
        for b, j in enumerate(part_vars):
            if pidx >> b & 1:
                preset_minus |= 1 << j
        tasks.append((pidx, preset_minus))

    def run_partition(task):
        pidx, preset_minus = task
        sums0 = _start_sums(h, preset_minus)
        return pidx, preset_minus, _gray_scan(
            sums0, col_ptr, col_idx, len(free), lower, budget
        )

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_partition, tasks))
    else:
        results = [run_partition(t) for t in tasks]

    nodes = int(sum(r[2][2] for r in results))
    best_pidx, best_preset, (best, best_k, _, _) = min(
        results, key=lambda r: (int(r[2][0]), r[0])
    )
    if not all(r[2][3] for r in results):
        witness = _state_colouring(h.n, free, best_preset, int(best_k))
        raise SearchBudgetExceeded(
            f"node budget {max_nodes} exhausted", int(best), witness, nodes
        )
    witness = _state_colouring(h.n, free, best_preset, int(best_k))
    result = ExactResult(int(best), witness, nodes)
    assert colouring_discrepancy(h, result.witness) == result.disc
    return result


def disc_branch_bound(
    h: Hypergraph,
    upper_hint: int | None = None,
    max_nodes: int | None = None,
) -> ExactResult:
    """Depth-first exact search with per-edge pruning.

    Same contract as disc_exact; intended for somewhat larger n where the
    instance prunes well.  Vertex 0 is pinned to +1.
    """
    n, m = h.n, h.m
    if m == 0:
        return ExactResult(0, Colouring.all_plus(n), 1)
    dense = h.dense().astype(np.int64)
    # remaining[v][e] = vertices of edge e with index >= v
    remaining = np.zeros((n + 1, m), dtype=np.int64)
    for v in range(n - 1, -1, -1):
        remaining[v] = remaining[v + 1] + dense[v]
    lower = _parity_lower_bound(h)

    sizes = remaining[0]
    best = int(sizes.max())  # the all-plus colouring attains max edge size
    best_witness = np.ones(n, dtype=np.int8)
    if upper_hint is not None and upper_hint < best:
        best = upper_hint
        best_witness = None  # hint without witness; must be confirmed by search
    assign = np.ones(n, dtype=np.int8)
    partial = dense[0].copy()  # vertex 0 fixed to +1
    nodes = 1
    budget = max_nodes if max_nodes is not None else 2**62

    def recurse(v: int) -> None:
        nonlocal best, best_witness, nodes
        if best <= lower:
            return
        if nodes >= budget:
            return
        if v == n:
            worst = int(np.abs(partial).max())
            if worst < best:
                best = worst
                best_witness = assign.copy()
            return
        if int((np.abs(partial) - remaining[v]).max()) > best:
            return
        for sign in (1, -1):
            nodes += 1
            assign[v] = sign
            partial += sign * dense[v]
            recurse(v + 1)
            partial -= sign * dense[v]
        assign[v] = 1

    recurse(1)
    if nodes >= budget:
        witness = Colouring(best_witness if best_witness is not None else np.ones(n, np.int8))
        raise SearchBudgetExceeded(f"node budget {max_nodes} exhausted", best, witness, nodes)
    if best_witness is None:
        # hint was wrong (below the true optimum); rerun without it
        return disc_branch_bound(h, None, max_nodes)
    result = ExactResult(best, Colouring(best_witness), nodes)
    assert colouring_discrepancy(h, result.witness) == result.disc
    return result
