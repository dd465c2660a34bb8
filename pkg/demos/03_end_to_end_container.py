"""Compress a synthetic activation tensor to a .scz container and back."""

import numpy as np

from sczip import bench, container, tensor

t = bench.gen_synthetic("relu-laplace", [128, 28, 28], sparsity=0.9, seed=42)
raw_bytes = 4 * t.size
print(f"tensor 128x28x28, {raw_bytes} raw bytes, "
      f"{(t.data == 0).mean():.0%} zeros")

for q_bits in (2, 4, 6, 8):
    c = container.compress(t, q_bits)
    out = container.decompress(c)
    err = np.abs(out.data - t.data).max()
    print(
        f"Q={q_bits}: N={c.n_rows:>6} K={c.n_cols:>3} "
        f"header {c.header_bytes:>4} B + payload {c.payload_bytes:>6} B "
        f"= {c.total_bytes / raw_bytes:6.2%} of raw, max err {err:.4f}"
    )

# The container is self-describing: bytes in, tensor out.
c = container.compress(t, 4)
raw = container.to_bytes(c)
restored = container.decompress(container.from_bytes(raw))
print(f"\nserialized container: {len(raw)} bytes; "
      f"zeros exact: {bool(np.all(restored.data[t.data == 0] == 0))}")
