"""Synthetic activation generation and the sweep/benchmark harness."""

from __future__ import annotations

import csv
import os
import statistics
import tempfile
import time
from dataclasses import dataclass, fields

import numpy as np

from . import channel, container, optimizer
from .errors import InvalidInput, SczipError
from .tensor import FeatureTensor

KINDS = ("relu-laplace", "uniform", "constant")

CSV_COLUMNS = [
    "tensor_id",
    "Q",
    "N",
    "K",
    "nnz",
    "entropy_bits",
    "header_bytes",
    "payload_bytes",
    "total_bytes",
    "enc_ms",
    "enc_ms_std",
    "dec_ms",
    "dec_ms_std",
    "t_comm_s",
    "max_abs_err",
]


@dataclass
class BenchRecord:
    """One measured (tensor, Q, N) pipeline configuration."""

    tensor_id: str
    Q: int
    N: int
    K: int
    nnz: int
    entropy_bits: float
    header_bytes: int
    payload_bytes: int
    total_bytes: int
    enc_ms: float
    enc_ms_std: float
    dec_ms: float
    dec_ms_std: float
    t_comm_s: float
    max_abs_err: float


def gen_synthetic(
    kind: str, dims, sparsity: float = 0.0, seed: int = 0
) -> FeatureTensor:
    """Deterministic stand-in activations.

    relu-laplace: zero with probability `sparsity`, Laplace-magnitude
    otherwise (zero-inflated, heavy-tailed, like post-ReLU feature maps).
    uniform: dense values in [0, 1). constant: all ones.
    """
    if kind not in KINDS:
        raise InvalidInput(f"unknown kind {kind!r}; choose from {KINDS}")
    if not 0.0 <= sparsity <= 1.0:
        raise InvalidInput(f"sparsity must be in [0, 1], got {sparsity}")
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    if kind == "constant":
        data = np.ones(total, dtype=np.float32)
    elif kind == "uniform":
        data = rng.random(total, dtype=np.float32)
        if sparsity > 0:
            data[rng.random(total) < sparsity] = 0.0
    else:
        data = np.abs(rng.laplace(0.0, 1.0, total)).astype(np.float32)
        data[rng.random(total) < sparsity] = 0.0
    return FeatureTensor(dims, data)


def _time_ms(fn, repetitions: int, warmup: int = 2) -> tuple[float, float]:
    """Median and standard deviation of fn() wall time, in milliseconds."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - start) * 1e3)
    std = statistics.pstdev(samples) if len(samples) > 1 else 0.0
    return statistics.median(samples), std


def measure(
    t: FeatureTensor,
    q_bits: int,
    n_rows: int | None,
    tensor_id: str = "tensor",
    repetitions: int = 20,
    link: channel.ChannelParams | None = None,
) -> BenchRecord:
    """Compress once for sizes/error, then time encode and decode."""
    c = container.compress(t, q_bits, n_rows)
    rebuilt = container.decompress(c)
    breakdown = optimizer.cost(t, c.n_rows, q_bits)
    enc_ms, enc_std = _time_ms(
        lambda: container.compress(t, q_bits, c.n_rows), repetitions
    )
    dec_ms, dec_std = _time_ms(lambda: container.decompress(c), repetitions)
    link = link or channel.ChannelParams()
    return BenchRecord(
        tensor_id=tensor_id,
        Q=q_bits,
        N=c.n_rows,
        K=c.n_cols,
        nnz=c.nnz,
        entropy_bits=breakdown.entropy_bits,
        header_bytes=c.header_bytes,
        payload_bytes=c.payload_bytes,
        total_bytes=c.total_bytes,
        enc_ms=enc_ms,
        enc_ms_std=enc_std,
        dec_ms=dec_ms,
        dec_ms_std=dec_std,
        t_comm_s=channel.comm_latency(8 * c.payload_bytes, link),
        max_abs_err=float(np.abs(rebuilt.data - t.data).max()),
    )


def run_sweep(
    t: FeatureTensor,
    q_list,
    n_policy="optimizer",
    tensor_id: str = "tensor",
    repetitions: int = 20,
    csv_path=None,
    link: channel.ChannelParams | None = None,
) -> list[BenchRecord]:
    """One record per (Q, N); failures are skipped row-wise, not fatal.

    n_policy: "optimizer" (early-stopped search), "exhaustive", or an explicit
    list of row counts to sweep at each Q.
    """
    records = []
    for q in q_list:
        if n_policy == "optimizer":
            n_values = [optimizer.search(t, q)[0]]
        elif n_policy == "exhaustive":
            n_values = [optimizer.exhaustive_search(t, q)[0]]
        else:
            n_values = list(n_policy)
        for n in n_values:
            try:
                records.append(
                    measure(t, q, n, tensor_id, repetitions, link)
                )
            except SczipError:
                continue
    if csv_path is not None:
        write_csv(records, csv_path)
    return records


def write_csv(records: list[BenchRecord], path) -> None:
    """Atomic CSV emission: write to a temp file, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".csv.tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            for r in records:
                w.writerow([getattr(r, fld.name) for fld in fields(BenchRecord)])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
