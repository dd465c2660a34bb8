"""Reshape-dimension search and the modeled link latency it saves."""

from sczip import bench, channel, container, optimizer

t = bench.gen_synthetic("relu-laplace", [128, 28, 28], sparsity=0.9, seed=42)

# Exhaustive scan over feasible divisors vs. the early-stopped search.
exact_n, exact_rep = optimizer.exhaustive_search(t, q_bits=4)
approx_n, approx_rep = optimizer.search(t, q_bits=4)
print(f"{'N':>8} {'K':>4} {'entropy':>8} {'cost(bits)':>12}")
for c in exact_rep.candidates:
    mark = " <- optimum" if c.n_rows == exact_n else ""
    print(f"{c.n_rows:>8} {c.n_cols:>4} {c.entropy_bits:>8.3f} {c.t_tot:>12.0f}{mark}")
print(
    f"\nexhaustive evaluated {len(exact_rep.candidates)} candidates, "
    f"early-stopped search only {len(approx_rep.candidates)} "
    f"(chose N={approx_n}, optimum N={exact_n})"
)

# Payload size drives the modeled transmission time on an outage link.
link = channel.ChannelParams()  # 10 MHz, 10 dB, eps=1e-3
dense_bits = 8 * 4 * t.size
ours_bits = 8 * container.compress(t, 4, approx_n).payload_bytes
t_dense = channel.comm_latency(dense_bits, link)
t_ours = channel.comm_latency(ours_bits, link)
print(f"\nrate {channel.outage_rate(link):,.0f} bit/s at the default channel")
print(f"dense transfer {t_dense:8.2f} s   compressed {t_ours:8.2f} s   "
      f"speedup {t_dense / t_ours:.2f}x")
