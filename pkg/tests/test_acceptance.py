"""Acceptance suite: one test per release criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every tolerance is fixed here, not configurable.
"""

import time

import numpy as np
import pytest

from sczip import bench, channel, container, optimizer, rans, sparse, tensor


def report(name: str, ok: bool, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def pipeline_stream(t, q_bits, n_rows):
    """Front half of the pipeline: the unified symbol stream for one config."""
    params = tensor.params_for(t, q_bits)
    q = tensor.quantize_reshape(t, params, n_rows)
    return sparse.concat(sparse.csr_encode(q))


def random_case(rng, min_total=60, max_total=600):
    """A random (tensor, Q, N) pipeline configuration with N a divisor of T."""
    while True:
        total = int(rng.integers(min_total, max_total))
        divs = optimizer.divisors(total)
        if len(divs) >= 4:
            break
    q_bits = int(rng.integers(2, 9))
    n_rows = int(divs[rng.integers(1, len(divs))])
    sparsity = float(rng.uniform(0.2, 0.95))
    t = bench.gen_synthetic(
        "relu-laplace", [total], sparsity, int(rng.integers(0, 2**31))
    )
    return t, q_bits, n_rows


def test_lossless_entropy_coding_round_trip():
    """1000 randomized (tensor, Q, N) cases decode bit-exactly in < 60 s."""
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    for _ in range(1000):
        t, q_bits, n_rows = random_case(rng)
        d = pipeline_stream(t, q_bits, n_rows)
        alphabet = int(d.data.max()) + 1 if d.data.size else 1
        table = rans.normalize_frequencies(
            rans.build_counts(d, alphabet), rans.DEFAULT_PRECISION
        )
        out = rans.decode(rans.encode(d, table), table, len(d))
        assert np.array_equal(out, d.data)
    elapsed = time.perf_counter() - start
    report(
        "lossless rANS round trip (1000 cases)",
        elapsed < 60.0,
        f"{elapsed:.1f}s",
    )


def test_quantization_fidelity():
    """Reconstruction error <= scale for nonzeros, exact 0.0 at zeros."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for q_bits in range(2, 9):
        for trial in range(20):
            t, _, n_rows = random_case(rng)
            p = tensor.params_for(t, q_bits)
            c = container.compress(t, q_bits, n_rows)
            out = container.decompress(c)
            nonzero = t.data != 0
            if nonzero.any():
                err = float(np.abs(out.data - t.data)[nonzero].max())
                worst = max(worst, err / p.scale)
                assert err <= p.scale + 1e-6
            assert np.all(out.data[~nonzero] == 0.0)
    report("quantization fidelity (Q=2..8)", True, f"worst err/scale {worst:.3f}")


def test_entropy_envelope():
    """Payload bits within [l*H - 32, l*(H + 0.12) + 64] on >= 99% of cases."""
    rng = np.random.default_rng(13)
    hits = 0
    cases = 0
    while cases < 100:
        t, q_bits, n_rows = random_case(rng, 600, 4000)
        d = pipeline_stream(t, q_bits, n_rows)
        if len(d) < 1000:
            continue
        cases += 1
        alphabet = int(d.data.max()) + 1
        counts = rans.build_counts(d, alphabet)
        h = rans.entropy(counts)
        table = rans.normalize_frequencies(counts, 14)
        bits = rans.encode(d, table).payload_bits
        if len(d) * h - 32 <= bits <= len(d) * (h + 0.12) + 64:
            hits += 1
    report("entropy envelope (n=14, l_D >= 1000)", hits >= 99, f"{hits}/100 in band")


def test_reshape_trend_reproduction():
    """Entropy and total size strictly decrease over N in {784,...,14336}."""
    start = time.perf_counter()
    t = bench.gen_synthetic("relu-laplace", [128, 28, 28], 0.9, 42)
    entropies, sizes = [], []
    for n in (784, 1792, 6272, 14336):
        c = container.compress(t, 4, n_rows=n)
        entropies.append(optimizer.cost(t, n, 4).entropy_bits)
        sizes.append(c.total_bytes)
    elapsed = time.perf_counter() - start
    ok = (
        all(a > b for a, b in zip(entropies, entropies[1:]))
        and all(a > b for a, b in zip(sizes, sizes[1:]))
        and elapsed < 10.0
    )
    report(
        "reshape trend (entropy and size strictly decreasing)",
        ok,
        f"H {entropies[0]:.3f}->{entropies[-1]:.3f} bits, "
        f"{sizes[0]}->{sizes[-1]} bytes, {elapsed:.1f}s",
    )


def test_search_near_optimality():
    """Early-stopped search within 3% of the exhaustive optimum on >= 95% of
    100 tensors, evaluating <= 50% of the candidates on average."""
    dims_pool = [
        [120, 28, 30], [96, 30, 28], [72, 40, 28], [60, 48, 30],
        [90, 32, 28], [84, 40, 24], [112, 30, 24], [64, 45, 28],
        [80, 36, 28], [108, 30, 25], [126, 32, 20], [100, 36, 21],
    ]
    start = time.perf_counter()
    within = 0
    eval_fracs = []
    for i in range(100):
        dims = dims_pool[i % len(dims_pool)]
        sparsity = 0.85 + 0.09 * (i % 7) / 6
        q_bits = [3, 4, 5, 6][i % 4]
        t = bench.gen_synthetic("relu-laplace", dims, sparsity, 1000 + i)
        approx_n, approx_rep = optimizer.search(t, q_bits)
        exact_n, exact_rep = optimizer.exhaustive_search(t, q_bits)
        costs = {c.n_rows: c.t_tot for c in exact_rep.candidates}
        best = costs[exact_n]
        if best == 0 or costs[approx_n] <= 1.03 * best:
            within += 1
        eval_fracs.append(len(approx_rep.candidates) / len(exact_rep.candidates))
    elapsed = time.perf_counter() - start
    mean_frac = float(np.mean(eval_fracs))
    ok = within >= 95 and mean_frac <= 0.5 and elapsed < 300.0
    report(
        "search near-optimality (100 tensors)",
        ok,
        f"{within}/100 within 3%, mean eval fraction {mean_frac:.2f}, "
        f"{elapsed:.1f}s",
    )


def test_compression_ratio_vs_dense_baseline():
    """A 90%-sparse 401 KB tensor at Q=4 compresses below 25% of raw."""
    t = bench.gen_synthetic("relu-laplace", [128, 28, 28], 0.9, 42)
    raw_bytes = 4 * t.size  # 401,408 bytes of float32
    c = container.compress(t, 4)
    ratio = c.total_bytes / raw_bytes
    report(
        "compression vs dense baseline (Q=4, 90% sparse)",
        ratio <= 0.25,
        f"{c.total_bytes} / {raw_bytes} bytes = {ratio:.1%}",
    )


def test_channel_latency_ratios():
    """Latency ratio between two containers equals their payload-bit ratio."""
    t_small = bench.gen_synthetic("relu-laplace", [16, 16, 4], 0.9, 3)
    t_large = bench.gen_synthetic("uniform", [16, 16, 4], 0.0, 3)
    bits_a = 8 * container.compress(t_small, 4).payload_bytes
    bits_b = 8 * container.compress(t_large, 8).payload_bytes
    worst = 0.0
    for link in (
        channel.ChannelParams(),
        channel.ChannelParams.from_db(bandwidth_hz=1e6, snr_db=3.0),
        channel.ChannelParams(5e7, 100.0, 2.0, 0.01),
    ):
        ratio = channel.comm_latency(bits_a, link) / channel.comm_latency(
            bits_b, link
        )
        rel = abs(ratio - bits_a / bits_b) / (bits_a / bits_b)
        worst = max(worst, rel)
    report("channel latency ratios track payload bits", worst <= 1e-9,
           f"worst rel err {worst:.2e}")


def test_throughput_informational(tmp_path):
    """Informational: coding time of a 100,352-symbol stream (never gates)."""
    rng = np.random.default_rng(5)
    d = rng.integers(0, 128, 100352).astype(np.uint32)
    table = rans.normalize_frequencies(
        rans.build_counts(d, 128), rans.DEFAULT_PRECISION
    )
    start = time.perf_counter()
    b = rans.encode(d, table)
    enc_ms = (time.perf_counter() - start) * 1e3
    start = time.perf_counter()
    out = rans.decode(b, table, d.size)
    dec_ms = (time.perf_counter() - start) * 1e3
    assert np.array_equal(out, d)
    t = bench.gen_synthetic("relu-laplace", [128, 28, 28], 0.9, 42)
    records = bench.run_sweep(
        t, [4], tensor_id="throughput", repetitions=3,
        csv_path=tmp_path / "throughput.csv",
    )
    report(
        "throughput (informational)",
        True,
        f"raw stream enc {enc_ms:.1f} ms, dec {dec_ms:.1f} ms; "
        f"pipeline enc {records[0].enc_ms:.1f} ms, dec {records[0].dec_ms:.1f} ms",
    )
