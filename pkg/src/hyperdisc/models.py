"""Seeded generators for the two random hypergraph models, plus column
histories of the edge-dependent model.

Edge-independent model, kind="ind":  every incidence bit A[i][j] is an
independent Bernoulli(p).  Draw order is part of the contract: a single
Philox stream ``stream(seed)`` yields m*n uniform doubles in row-major
(i, j) order and the bit is set iff u < p.

Edge-dependent model, kind="dep":  every vertex (column) independently joins
a uniform d-subset of the m edges.  Column j uses its own substream
``stream(seed, j)``, columns processed in ascending j.  The subset is chosen
by a partial Fisher-Yates shuffle of [0..m): one batched call
``integers(low=[0,1,..,d-1], high=m)`` supplies the d swap targets, then
``idx[t] <-> idx[r_t]`` for t = 0..d-1 and the subset is ``idx[:d]``.  This
gives an exactly uniform d-subset with no rejection loop, and the draw order
is pinned so regression fixtures stay stable.

Column histories: for a d-regular-column incidence matrix, B[i][k] counts the
ones of column k at rows >= i (so B[0][k] = d and B[m][k] = 0), and
P[i][k] = B[i][k]/(m-i) is the conditional probability, given the first i
rows, that row i of column k holds a one.  P is defined for i < m only; there
is no padded final row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .hypergraph import Hypergraph
from .seeding import check_seed, stream

__all__ = ["ModelParams", "ColumnHistory", "generate", "column_history", "history_event_Q"]

KINDS = ("ind", "dep")


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one random instance: the model kind plus its knob.

    kind="ind" needs p in [0, 1]; kind="dep" needs 1 <= d <= m.
    """

    n: int
    m: int
    kind: str
    p: float | None = None
    d: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "ind":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("edge-independent model needs p in [0, 1]")
            if self.d is not None:
                raise ValueError("d is not a parameter of the edge-independent model")
        else:
            if self.d is None or not 1 <= self.d <= self.m:
                raise ValueError("edge-dependent model needs 1 <= d <= m")
            if self.p is not None:
                raise ValueError("p is not a parameter of the edge-dependent model")
        check_seed(self.seed)

    @property
    def density(self) -> float:
        """Per-entry one-probability: p, or d/m for the edge-dependent model."""
        return self.p if self.kind == "ind" else self.d / self.m


@njit(cache=True, nogil=True)
def _partial_fisher_yates(m: int, targets: np.ndarray) -> np.ndarray:
    idx = np.arange(m, dtype=np.int64)
    for t in range(targets.shape[0]):
        r = targets[t]
        tmp = idx[t]
        idx[t] = idx[r]
        idx[r] = tmp
    return idx[: targets.shape[0]]


def generate(params: ModelParams) -> Hypergraph:
    """Draw one instance; a pure function of params (seed included)."""
    n, m = params.n, params.m
    if params.kind == "ind":
        gen = stream(params.seed)
        dense = (gen.random((m, n)) < params.p).astype(np.uint8)
        return Hypergraph.from_dense(dense)
    d = params.d
    dense = np.zeros((m, n), dtype=np.uint8)
    lows = np.arange(d, dtype=np.int64)
    for j in range(n):
        gen = stream(params.seed, j)
        targets = gen.integers(lows, m)
        chosen = _partial_fisher_yates(m, targets)
        dense[chosen, j] = 1
    return Hypergraph.from_dense(dense)


@dataclass(frozen=True, eq=False)
class ColumnHistory:
    """Suffix one-counts B ((m+1) x n) and conditional probabilities P (m x n)."""

    B: np.ndarray
    P: np.ndarray

    @property
    def m(self) -> int:
        return self.P.shape[0]

    @property
    def n(self) -> int:
        return self.P.shape[1]


def column_history(h: Hypergraph, d: int) -> ColumnHistory:
    """Reveal the incidence matrix row by row and track what remains below.

    Requires every column to hold exactly d ones (the edge-dependent
    invariant); raises otherwise.
    """
    dense = h.dense().astype(np.int64)
    colsums = dense.sum(axis=0)
    bad = np.nonzero(colsums != d)[0]
    if bad.size:
        raise ValueError(
            f"column {int(bad[0])} has {int(colsums[bad[0]])} ones, expected d={d}"
        )
    m, n = h.m, h.n
    above = np.zeros((m + 1, n), dtype=np.int64)
    np.cumsum(dense, axis=0, out=above[1:])
    B = d - above
    denom = (m - np.arange(m)).astype(np.float64)
    P = B[:m] / denom[:, None]
    B.setflags(write=False)
    P.setflags(write=False)
    return ColumnHistory(B=B, P=P)


def history_event_Q(hist: ColumnHistory, i: int, eps: float, c: float, p: float) -> bool:
    """True iff for every j <= i the revealed-row conditionals stay typical:
    their column sum is at least (1-eps)*p*n and no single entry exceeds
    (1+eps)*c.
    """
    if not 0 <= i < hist.m:
        raise IndexError(f"row index {i} outside [0, {hist.m})")
    rows = hist.P[: i + 1]
    n = hist.n
    sums_ok = bool(np.all(rows.sum(axis=1) >= (1.0 - eps) * p * n))
    caps_ok = bool(np.all(rows.max(axis=1) <= (1.0 + eps) * c))
    return sums_ok and caps_ok
