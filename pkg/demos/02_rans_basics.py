"""rANS coding step by step: frequency table, state transforms, round trip."""

import numpy as np

from sczip import rans

message = [5, 3, 2, 1, 0, 2, 1, 2]
counts = rans.build_counts(message, alphabet_size=6)
print("counts:", counts)
print(f"entropy: {rans.entropy(counts):.4f} bits/symbol")
print(f"expected size: {rans.expected_size(counts):.2f} bits")
print(f"ratio vs flat coding: {rans.compression_ratio(counts, 6):.3f}")

table = rans.normalize_frequencies(counts, precision=4)
print("\nnormalized to 2^4:", table.freqs, " cdf:", table.cdf)

# One encode step by hand: freq 6, cumulative 10 at precision 4.
state, emitted = rans.encode_step(1 << 23, freq=6, cum=10, precision=4)
print(f"\none step from state 2^23 -> {state} (emitted {emitted})")
state, symbol = rans.decode_step(state, rans.FrequencyTable.from_freqs([10, 6], 4))
print(f"inverted: symbol {symbol}, state back to {state} (= 2^23)")

# Whole-stream round trip at the default precision.
table = rans.normalize_frequencies(counts, rans.DEFAULT_PRECISION)
bits = rans.encode(message, table)
print(f"\nencoded {len(message)} symbols into {len(bits.data)} bytes")
decoded = rans.decode(bits, table, len(message))
print("decoded:", decoded.tolist(), " lossless:", decoded.tolist() == message)

# Skewed streams compress harder than flat ones.
rng = np.random.default_rng(1)
flat = rng.integers(0, 16, 5000)
skew = rng.choice(16, 5000, p=np.array([0.7] + [0.3 / 15] * 15))
for name, d in [("flat", flat), ("skewed", skew)]:
    c = np.bincount(d, minlength=16)
    t = rans.normalize_frequencies(c, rans.DEFAULT_PRECISION)
    nbytes = len(rans.encode(d, t).data)
    print(f"{name:>7}: H={rans.entropy(c):.3f} bits -> {nbytes} bytes")
