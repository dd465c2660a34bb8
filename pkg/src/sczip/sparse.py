"""Non-cumulative CSR packing and the unified symbol stream.

The row array stores per-row nonzero counts instead of cumulative offsets,
which keeps its symbol range bounded by K; the prefix sum is deferred to
decode. "Nonzero" refers to the original float being nonzero, not to the
quantized symbol, so values of 0 may legitimately appear in the value array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptStream, InvalidInput
from .tensor import QuantizedMatrix


@dataclass(frozen=True)
class SparseCSR:
    """Value / column-index / row-count triplet for an N x K quantized matrix."""

    values: np.ndarray  # uint32 symbols at nonzero positions, row-major
    col_idx: np.ndarray  # uint32 column of each nonzero, < K
    row_counts: np.ndarray  # uint32 length N, direct (non-cumulative) counts

    def __post_init__(self):
        for name in ("values", "col_idx", "row_counts"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.uint32).ravel()
            object.__setattr__(self, name, arr)
        if self.values.size != self.col_idx.size:
            raise InvalidInput("values and col_idx must have equal length")

    @property
    def nnz(self) -> int:
        return self.values.size

    @property
    def n_rows(self) -> int:
        return self.row_counts.size


@dataclass(frozen=True)
class ConcatStream:
    """Single symbol vector D = values + col_idx + row_counts."""

    data: np.ndarray  # uint32, length 2*nnz + n_rows
    nnz: int
    n_rows: int

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.uint32).ravel()
        if data.size != 2 * self.nnz + self.n_rows:
            raise CorruptStream(
                f"stream length {data.size} != 2*{self.nnz} + {self.n_rows}"
            )
        object.__setattr__(self, "data", data)

    def __len__(self) -> int:
        return self.data.size


def csr_encode(q: QuantizedMatrix) -> SparseCSR:
    """Pack the positions whose original value was nonzero; single O(N*K) pass."""
    keep = (~q.zero_mask).reshape(q.n_rows, q.n_cols)
    rows, cols = np.nonzero(keep)  # row-major order
    values = q.data.reshape(q.n_rows, q.n_cols)[rows, cols]
    row_counts = keep.sum(axis=1, dtype=np.uint32)
    return SparseCSR(values.astype(np.uint32), cols.astype(np.uint32), row_counts)


def csr_decode(s: SparseCSR, n_rows: int, n_cols: int) -> QuantizedMatrix:
    """Exact inverse of csr_encode; runs the deferred prefix sum over row counts."""
    if s.row_counts.size != n_rows:
        raise CorruptStream(f"row_counts length {s.row_counts.size} != N {n_rows}")
    if int(s.row_counts.sum()) != s.nnz:
        raise CorruptStream(
            f"sum(row_counts) {int(s.row_counts.sum())} != nnz {s.nnz}"
        )
    if np.any(s.row_counts > n_cols):
        raise CorruptStream("a row count exceeds the column count")
    if s.nnz and int(s.col_idx.max()) >= n_cols:
        raise CorruptStream(f"column index >= K {n_cols}")
    rows = np.repeat(np.arange(n_rows), s.row_counts)
    # Column indices must strictly increase within each row.
    if s.nnz:
        same_row = rows[1:] == rows[:-1]
        if np.any(same_row & (s.col_idx[1:] <= s.col_idx[:-1])):
            raise CorruptStream("column indices not strictly increasing in a row")
    flat = rows * n_cols + s.col_idx
    data = np.zeros(n_rows * n_cols, dtype=np.uint32)
    data[flat] = s.values
    zero_mask = np.ones(n_rows * n_cols, dtype=bool)
    zero_mask[flat] = False
    return QuantizedMatrix(n_rows, n_cols, data, zero_mask)


def concat(s: SparseCSR) -> ConcatStream:
    """D = v + c + r, length 2*nnz + N."""
    data = np.concatenate([s.values, s.col_idx, s.row_counts])
    return ConcatStream(data, s.nnz, s.n_rows)


def split(d: ConcatStream) -> SparseCSR:
    """Recover the CSR segments from (nnz, N) alone."""
    if d.data.size != 2 * d.nnz + d.n_rows:
        raise CorruptStream("stream length inconsistent with nnz and n_rows")
    v = d.data[: d.nnz]
    c = d.data[d.nnz : 2 * d.nnz]
    r = d.data[2 * d.nnz :]
    return SparseCSR(v, c, r)
