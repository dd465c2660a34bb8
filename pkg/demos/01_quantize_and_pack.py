"""Walk through the front half of the pipeline on a tiny tensor.

Shows how a float feature map becomes integer symbols: per-tensor affine
quantization, the matrix reshape, and the non-cumulative CSR packing.
"""

import numpy as np

from sczip import sparse, tensor

# A 4x6 "activation" with plenty of exact zeros, like a post-ReLU map.
rng = np.random.default_rng(0)
values = np.maximum(rng.normal(0.4, 1.0, 24), 0.0).astype(np.float32)
t = tensor.FeatureTensor((4, 6), values)
print("original:")
print(t.data.reshape(4, 6))

params = tensor.params_for(t, q_bits=4)
print(f"\nscale={params.scale:.4f}  zero_point={params.zero_point}  Q=4")

q = tensor.quantize_reshape(t, params, n_rows=8)  # view as 8x3
print(f"\nquantized, reshaped to {q.n_rows}x{q.n_cols}:")
print(q.data.reshape(8, 3))

s = sparse.csr_encode(q)
print(f"\nCSR: nnz={s.nnz}")
print("values     ", s.values)
print("col_idx    ", s.col_idx)
print("row_counts ", s.row_counts, "(direct counts, max bounded by K)")

d = sparse.concat(s)
print(f"\nunified stream, length 2*{s.nnz} + {s.n_rows} = {len(d)}:")
print(d.data)

# And back: reconstruction error never exceeds the scale.
back = tensor.dequantize(sparse.csr_decode(sparse.split(d), 8, 3), params, t.dims)
err = np.abs(back.data - t.data)
print(f"\nmax reconstruction error {err.max():.4f} (scale {params.scale:.4f})")
print("zeros restored exactly:", bool(np.all(back.data[t.data == 0] == 0)))
