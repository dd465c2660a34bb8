"""Reshape-dimension selection: cost model, early-stopped search, and oracle.

The cost of a candidate row count N is the proxy l_D * H(p(N)) in bits
(the stream length times the empirical entropy of its symbols), optionally
plus weighted measured encode/decode times. The search walks divisors of T
in descending order under the constraints N > K and K <= 2^Q, stopping the
first time the cost rises.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

from . import rans, sparse, tensor
from .tensor import FeatureTensor


@dataclass(frozen=True)
class CostProfile:
    """Weights and measured times entering the total-cost formula."""

    alpha_enc: float = 0.0
    alpha_dec: float = 0.0
    t_enc: float = 0.0
    t_dec: float = 0.0


@dataclass(frozen=True)
class CostBreakdown:
    n_rows: int
    n_cols: int
    nnz: int
    stream_len: int
    entropy_bits: float  # bits per symbol of the unified stream
    t_tot: float  # alpha_enc*t_enc + alpha_dec*t_dec + stream_len*entropy_bits


@dataclass
class SearchReport:
    """Trace of one reshape search."""

    candidates: list[CostBreakdown] = field(default_factory=list)
    chosen: int = 0
    early_stopped: bool = False
    wall_time: float = 0.0


def divisors(total: int) -> list[int]:
    """All divisors of `total`, ascending."""
    if total < 1:
        raise ValueError(f"need a positive integer, got {total}")
    small, large = [], []
    d = 1
    while d * d <= total:
        if total % d == 0:
            small.append(d)
            if d != total // d:
                large.append(total // d)
        d += 1
    return small + large[::-1]


def candidate_bounds(total: int, q_bits: int) -> tuple[int, int]:
    """Feasible row-count interval from N > K and K <= 2^Q."""
    n_min = max(math.isqrt(total) + 1, -(-total // (1 << q_bits)))
    return n_min, total


def candidate_rows(total: int, q_bits: int) -> list[int]:
    """Feasible divisors of `total`, descending (search order)."""
    n_min, n_max = candidate_bounds(total, q_bits)
    return [d for d in reversed(divisors(total)) if n_min <= d <= n_max]


class _CostEvaluator:
    """Quantizes once, then prices any divisor reshape of the same tensor."""

    def __init__(self, t: FeatureTensor, q_bits: int, profile: CostProfile):
        self.total = t.size
        self.profile = profile
        params = tensor.params_for(t, q_bits)
        self.data, self.zero_mask = tensor.quantize(t, params)

    def cost(self, n_rows: int) -> CostBreakdown:
        q = tensor.reshape(self.data, self.zero_mask, n_rows)
        s = sparse.csr_encode(q)
        d = sparse.concat(s)
        alphabet = int(d.data.max()) + 1 if d.data.size else 1
        counts = rans.build_counts(d, alphabet)
        h = rans.entropy(counts)
        p = self.profile
        t_tot = p.alpha_enc * p.t_enc + p.alpha_dec * p.t_dec + len(d) * h
        return CostBreakdown(q.n_rows, q.n_cols, s.nnz, len(d), h, t_tot)


def cost(
    t: FeatureTensor,
    n_rows: int,
    q_bits: int,
    profile: CostProfile = CostProfile(),
) -> CostBreakdown:
    """Price a single reshape via the quantize -> CSR -> entropy proxy."""
    return _CostEvaluator(t, q_bits, profile).cost(n_rows)


def search(
    t: FeatureTensor,
    q_bits: int,
    profile: CostProfile = CostProfile(),
) -> tuple[int, SearchReport]:
    """Early-stopped descending scan over feasible divisors.

    Stops permanently at the first cost increase. When no divisor meets the
    constraints (only possible for a 1-element tensor) falls back to N = T,
    the single-column reshape, instead of failing.
    """
    started = time.perf_counter()
    report = SearchReport()
    evaluator = _CostEvaluator(t, q_bits, profile)
    candidates = candidate_rows(t.size, q_bits)
    if not candidates:
        candidates = [t.size]
    best_cost = math.inf
    prev_cost = math.inf
    chosen = candidates[0]
    for n in candidates:
        c = evaluator.cost(n)
        report.candidates.append(c)
        if c.t_tot < best_cost:
            best_cost = c.t_tot
            chosen = n
        if c.t_tot > prev_cost:
            report.early_stopped = True
            break
        prev_cost = c.t_tot
    report.chosen = chosen
    report.wall_time = time.perf_counter() - started
    return chosen, report


def exhaustive_search(
    t: FeatureTensor,
    q_bits: int,
    profile: CostProfile = CostProfile(),
) -> tuple[int, SearchReport]:
    """Evaluate every feasible divisor; the oracle for the early-stopped search."""
    started = time.perf_counter()
    report = SearchReport()
    evaluator = _CostEvaluator(t, q_bits, profile)
    candidates = candidate_rows(t.size, q_bits)
    if not candidates:
        candidates = [t.size]
    best_cost = math.inf
    chosen = candidates[0]
    for n in candidates:
        c = evaluator.cost(n)
        report.candidates.append(c)
        if c.t_tot < best_cost:
            best_cost = c.t_tot
            chosen = n
    report.chosen = chosen
    report.wall_time = time.perf_counter() - started
    return chosen, report


def write_report_csv(report: SearchReport, path) -> None:
    """One line per evaluated candidate: N, K, nnz, entropy, cost, chosen flag."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["N", "K", "nnz", "entropy_bits_per_symbol", "t_tot_bits", "chosen"])
        for c in report.candidates:
            w.writerow(
                [
                    c.n_rows,
                    c.n_cols,
                    c.nnz,
                    f"{c.entropy_bits:.6f}",
                    f"{c.t_tot:.3f}",
                    int(c.n_rows == report.chosen),
                ]
            )
