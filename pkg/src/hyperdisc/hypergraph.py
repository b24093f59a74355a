"""Hypergraphs as bit-packed incidence matrices, colourings, and discrepancy.

A hypergraph on n vertices with m edges is stored as m row bitmasks: bit j of
row i is set iff vertex j lies in edge i.  Rows are arbitrary-precision Python
integers, so every bitwise operation (AND with a colour mask, popcount) runs
over packed 64-bit words.  Duplicate rows are allowed: the edge list is a
multiset.

Edge sums for an integral colouring psi are computed as

    psi(e) = popcount(row & plus_mask) - popcount(row & minus_mask),

which is the dominant inner loop of everything downstream.  The discrepancy of
a colouring is max_e |psi(e)|; the discrepancy of the hypergraph is the
minimum of that over all 2^n sign choices (see `exact`).

Vertex subsets (active sets, frozen sets) are passed around as bitmasks of the
same shape as rows.

The on-disk text format ("HDG v1") is: first line ``n m``, then one line per
edge listing its vertex indices in ascending 0-based order (an empty line is
an empty edge).  Round-tripping through this format is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, TextIO

import numpy as np

__all__ = [
    "Hypergraph",
    "Colouring",
    "FractionalColouring",
    "mask_from_indices",
    "indices_from_mask",
    "full_mask",
    "edge_sum",
    "colouring_discrepancy",
    "degree_profile",
    "restrict",
    "restrict_with_map",
    "remove_small_edges",
    "read_hdg",
    "write_hdg",
    "parse_hdg",
    "format_hdg",
]

RANGE_TOL = 1e-9  # absolute tolerance on fractional values after arithmetic


def mask_from_indices(indices: Iterable[int]) -> int:
    """Pack an iterable of vertex indices into a bitmask."""
    mask = 0
    for j in indices:
        mask |= 1 << j
    return mask


def indices_from_mask(mask: int) -> list[int]:
    """Unpack a bitmask into its ascending list of set-bit positions."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def full_mask(n: int) -> int:
    """Bitmask with bits 0..n-1 set."""
    return (1 << n) - 1


def _pack_bitrows(dense: np.ndarray) -> tuple[int, ...]:
    """Pack a 0/1 matrix (one row per edge) into row bitmasks."""
    dense = np.ascontiguousarray(dense, dtype=np.uint8)
    packed = np.packbits(dense, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


@dataclass(frozen=True)
class Hypergraph:
    """Incidence-matrix hypergraph: ``rows[i]`` is the bitmask of edge i.

    Invariants: every row fits in n bits (no stray high bits) and n >= 1.
    The edge list is a multiset, so identical rows may repeat.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got n={self.n}")
        if not isinstance(self.rows, tuple):
            object.__setattr__(self, "rows", tuple(self.rows))
        mask = full_mask(self.n)
        for i, row in enumerate(self.rows):
            if row < 0 or row & ~mask:
                raise ValueError(f"row {i} has bits outside the {self.n}-vertex range")

    @property
    def m(self) -> int:
        return len(self.rows)

    def edge_size(self, i: int) -> int:
        return self.rows[i].bit_count()

    def edge_sizes(self) -> np.ndarray:
        return np.array([row.bit_count() for row in self.rows], dtype=np.int64)

    @cached_property
    def _dense(self) -> np.ndarray:
        """m x n uint8 incidence matrix (cached; rows stay authoritative)."""
        byte_width = (self.n + 7) // 8
        buf = np.frombuffer(
            b"".join(row.to_bytes(byte_width, "little") for row in self.rows),
            dtype=np.uint8,
        ).reshape(self.m, byte_width)
        bits = np.unpackbits(buf, axis=1, bitorder="little")[:, : self.n]
        bits.setflags(write=False)
        return bits

    def dense(self) -> np.ndarray:
        """Read-only m x n uint8 view of the incidence matrix."""
        return self._dense

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "Hypergraph":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("incidence matrix must be two-dimensional")
        return cls(n=dense.shape[1], rows=_pack_bitrows(dense))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        rows = []
        for edge in edges:
            row = 0
            for j in edge:
                if not 0 <= j < n:
                    raise ValueError(f"vertex index {j} outside [0, {n})")
                row |= 1 << j
            rows.append(row)
        return cls(n=n, rows=tuple(rows))

    def edges(self) -> list[list[int]]:
        return [indices_from_mask(row) for row in self.rows]


@dataclass(frozen=True, eq=False)
class Colouring:
    """A +/-1 assignment to the n vertices."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values)
        if not np.issubdtype(vals.dtype, np.integer):
            if not np.all(vals == np.rint(vals)):
                raise ValueError("colouring values must be integral")
        vals = vals.astype(np.int8)
        if vals.ndim != 1 or not np.all(np.abs(vals) == 1):
            raise ValueError("colouring values must be a 1-d array over {-1, +1}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def all_plus(cls, n: int) -> "Colouring":
        return cls(np.ones(n, dtype=np.int8))

    def flipped(self) -> "Colouring":
        return Colouring(-self.values)

    def masks(self) -> tuple[int, int]:
        """(plus_mask, minus_mask) bitmasks of the +1 and -1 vertices."""
        plus = _pack_bitrows((self.values > 0).reshape(1, -1))[0]
        minus = _pack_bitrows((self.values < 0).reshape(1, -1))[0]
        return plus, minus

    def to_string(self) -> str:
        return "".join("+" if v > 0 else "-" for v in self.values)

    @classmethod
    def from_string(cls, s: str) -> "Colouring":
        if not s or any(ch not in "+-" for ch in s):
            raise ValueError("colouring string must be nonempty over '+'/'-'")
        return cls(np.array([1 if ch == "+" else -1 for ch in s], dtype=np.int8))


@dataclass(frozen=True, eq=False)
class FractionalColouring:
    """A vertex assignment with values in [-1, 1].

    Values may drift past the cube by floating-point noise during random-walk
    arithmetic; anything within RANGE_TOL of the boundary is clamped, anything
    further out is rejected.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64).copy()
        if vals.ndim != 1:
            raise ValueError("fractional colouring must be a 1-d array")
        if np.any(np.abs(vals) > 1.0 + RANGE_TOL):
            worst = float(np.max(np.abs(vals)))
            raise ValueError(f"fractional value {worst} outside [-1, 1] beyond tolerance")
        np.clip(vals, -1.0, 1.0, out=vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def zeros(cls, n: int) -> "FractionalColouring":
        return cls(np.zeros(n, dtype=np.float64))


def _check_length(h: Hypergraph, values: np.ndarray) -> None:
    if len(values) != h.n:
        raise ValueError(f"colouring length {len(values)} != vertex count {h.n}")


def edge_sum(h: Hypergraph, psi: Colouring | FractionalColouring, i: int) -> float | int:
    """Sum of psi over the vertices of edge i.

    Exact integer for an integral colouring (two popcounts); float dot product
    on the unpacked row otherwise.
    """
    if not 0 <= i < h.m:
        raise IndexError(f"edge index {i} outside [0, {h.m})")
    _check_length(h, psi.values)
    if isinstance(psi, Colouring):
        plus, minus = psi.masks()
        row = h.rows[i]
        return (row & plus).bit_count() - (row & minus).bit_count()
    return float(h.dense()[i].astype(np.float64) @ psi.values)


def colouring_discrepancy(h: Hypergraph, psi: Colouring) -> int:
    """max_e |psi(e)|; zero when the edge multiset is empty."""
    _check_length(h, psi.values)
    plus, minus = psi.masks()
    worst = 0
    for row in h.rows:
        s = (row & plus).bit_count() - (row & minus).bit_count()
        if s < 0:
            s = -s
        if s > worst:
            worst = s
    return worst


def degree_profile(h: Hypergraph) -> np.ndarray:
    """Per-vertex degrees, i.e. column popcounts of the incidence matrix."""
    if h.m == 0:
        return np.zeros(h.n, dtype=np.int64)
    return h.dense().sum(axis=0, dtype=np.int64)


def restrict_with_map(h: Hypergraph, active: int) -> tuple[Hypergraph, tuple[int, ...]]:
    """Restrict every edge to the active vertex set.

    Active vertices are re-indexed by ascending original index; the returned
    tuple maps new index -> original index so partial colourings computed on
    the restriction can be written back.
    """
    if active < 0 or active & ~full_mask(h.n):
        raise ValueError("active mask has bits outside the vertex range")
    keep = indices_from_mask(active)
    if not keep:
        return Hypergraph(n=h.n, rows=tuple(0 for _ in h.rows)), ()
    sub = h.dense()[:, keep] if h.m else np.zeros((0, len(keep)), dtype=np.uint8)
    return Hypergraph(n=len(keep), rows=_pack_bitrows(sub)), tuple(keep)


def restrict(h: Hypergraph, active: int) -> Hypergraph:
    """Like restrict_with_map, discarding the index map.

    An empty active set keeps the vertex count at n with m empty edges, so the
    result is still a valid hypergraph rather than a zero-vertex object.
    """
    restricted, kept = restrict_with_map(h, active)
    if not kept and active == 0:
        return Hypergraph(n=h.n, rows=tuple(0 for _ in h.rows))
    return restricted


def remove_small_edges(h: Hypergraph, threshold: float) -> Hypergraph:
    """Keep exactly the edges with more than `threshold` vertices, in order."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    return Hypergraph(n=h.n, rows=tuple(r for r in h.rows if r.bit_count() > threshold))


# ---------------------------------------------------------------------------
# HDG v1 text format

def format_hdg(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.m}"]
    for row in h.rows:
        lines.append(" ".join(str(j) for j in indices_from_mask(row)))
    return "\n".join(lines) + "\n"


def parse_hdg(text: str) -> Hypergraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("empty HDG document")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"malformed HDG header: {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        row = 0
        prev = -1
        for tok in line.split():
            j = int(tok)
            if not 0 <= j < n:
                raise ValueError(f"line {lineno}: vertex {j} outside [0, {n})")
            if j <= prev:
                raise ValueError(f"line {lineno}: indices must be strictly ascending")
            row |= 1 << j
            prev = j
        rows.append(row)
    return Hypergraph(n=n, rows=tuple(rows))


def write_hdg(h: Hypergraph, f: TextIO | str) -> None:
    if isinstance(f, str):
        with open(f, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_hdg(h))
    else:
        f.write(format_hdg(h))


def read_hdg(f: TextIO | str) -> Hypergraph:
    if isinstance(f, str):
        with open(f, "r", encoding="utf-8") as fh:
            return parse_hdg(fh.read())
    return parse_hdg(f.read())
