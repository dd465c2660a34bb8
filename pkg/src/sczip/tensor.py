"""Feature tensors, asymmetric integer quantization, and the matrix reshape.

A feature tensor is a flat float32 array plus its logical dims. Quantization
maps it onto the integer grid [0, 2^Q - 1] with a per-tensor scale and
zero-point; positions that were exactly 0.0 in the original tensor are
tracked in a separate mask so they can be restored bit-exactly after decode.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import InvalidContainer, InvalidInput, NonDivisible

RTF_MAGIC = b"RTF1"


def _round_half_away(x: np.ndarray) -> np.ndarray:
    # np.round ties to even; the coder needs half-away-from-zero so that
    # golden files are stable across platforms.
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _round_half_away_scalar(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class FeatureTensor:
    """Raw floating-point intermediate feature with shape metadata."""

    dims: tuple[int, ...]
    data: np.ndarray  # flat float32, length prod(dims)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidInput(f"dims must be positive integers, got {dims}")
        data = np.ascontiguousarray(self.data, dtype=np.float32).ravel()
        if data.size != math.prod(dims):
            raise InvalidInput(
                f"data length {data.size} != product of dims {math.prod(dims)}"
            )
        if not np.all(np.isfinite(data)):
            raise InvalidInput("tensor contains NaN or Inf")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @property
    def size(self) -> int:
        return self.data.size


@dataclass(frozen=True)
class QuantParams:
    """Scale/zero-point pair for Q-bit asymmetric integer quantization."""

    q_bits: int
    scale: float
    zero_point: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if not 2 <= self.q_bits <= 8:
            raise InvalidInput(f"q_bits must be in [2, 8], got {self.q_bits}")
        if not self.scale > 0:
            raise InvalidInput(f"scale must be positive, got {self.scale}")
        if not 0 <= self.zero_point <= (1 << self.q_bits) - 1:
            raise InvalidInput(f"zero_point {self.zero_point} out of range")

    @property
    def q_max(self) -> int:
        return (1 << self.q_bits) - 1


@dataclass(frozen=True)
class QuantizedMatrix:
    """Quantized tensor viewed as an N x K matrix, row-major over the flat data."""

    n_rows: int
    n_cols: int
    data: np.ndarray  # flat uint32 symbols, length N*K
    zero_mask: np.ndarray  # bool, True where the ORIGINAL value was exactly 0.0

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.uint32).ravel()
        mask = np.ascontiguousarray(self.zero_mask, dtype=bool).ravel()
        if data.size != self.n_rows * self.n_cols:
            raise InvalidInput("data length does not match n_rows * n_cols")
        if mask.size != data.size:
            raise InvalidInput("zero_mask length does not match data length")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "zero_mask", mask)


def compute_params(x_min: float, x_max: float, q_bits: int) -> QuantParams:
    """Derive (scale, zero_point) mapping [x_min, x_max] onto [0, 2^Q - 1]."""
    if not (math.isfinite(x_min) and math.isfinite(x_max)):
        raise InvalidInput("x_min and x_max must be finite")
    if x_min > x_max:
        raise InvalidInput(f"x_min {x_min} > x_max {x_max}")
    if not 2 <= int(q_bits) <= 8:
        raise InvalidInput(f"q_bits must be in [2, 8], got {q_bits}")
    q_max = (1 << q_bits) - 1
    # The zero-point must land on the grid, so the representable range always
    # covers 0; otherwise a strictly positive (or negative) range would clamp
    # z and lose up to |x_min| of accuracy.
    lo = min(x_min, 0.0)
    hi = max(x_max, 0.0)
    if hi == lo:
        scale = 1.0  # all-zero tensor
        z = 0
    else:
        scale = (hi - lo) / q_max
        z = _round_half_away_scalar(-lo / scale)
    z = min(max(z, 0), q_max)
    return QuantParams(int(q_bits), scale, z, float(x_min), float(x_max))


def params_for(t: FeatureTensor, q_bits: int) -> QuantParams:
    """Quantization parameters from the tensor's own value range."""
    return compute_params(float(t.data.min()), float(t.data.max()), q_bits)


def quantize(t: FeatureTensor, p: QuantParams) -> tuple[np.ndarray, np.ndarray]:
    """Map tensor values to symbols in [0, 2^Q - 1]; also mark original zeros.

    Out-of-range values are clamped; clamping is also needed because rounding
    of the zero-point can push round(x/s + z) one past the grid.
    """
    x = t.data.astype(np.float64)
    q = _round_half_away(x / p.scale + p.zero_point)
    q = np.clip(q, 0, p.q_max).astype(np.uint32)
    zero_mask = t.data == 0.0
    return q, zero_mask


def dequantize(
    q: QuantizedMatrix, p: QuantParams, dims: tuple[int, ...] | None
) -> FeatureTensor:
    """Invert quantization; masked positions come back as exact 0.0."""
    if dims is None:
        raise InvalidContainer("original dims required to restore the tensor")
    dims = tuple(int(d) for d in dims)
    if math.prod(dims) != q.data.size:
        raise InvalidContainer(
            f"dims {dims} do not match element count {q.data.size}"
        )
    x = (q.data.astype(np.float64) - p.zero_point) * p.scale
    x[q.zero_mask] = 0.0
    return FeatureTensor(dims, x.astype(np.float32))


def matrix_dims(total: int, n_rows: int) -> tuple[int, int]:
    """Validated (N, K) for reshaping a length-`total` tensor to N rows."""
    if n_rows < 1 or total % n_rows != 0:
        raise NonDivisible(f"{n_rows} does not divide element count {total}")
    return n_rows, total // n_rows


def reshape(
    data: np.ndarray, zero_mask: np.ndarray, n_rows: int
) -> QuantizedMatrix:
    """View flat quantized data as an N x K matrix, preserving element order."""
    n, k = matrix_dims(int(np.asarray(data).size), n_rows)
    return QuantizedMatrix(n, k, data, zero_mask)


def quantize_reshape(
    t: FeatureTensor, p: QuantParams, n_rows: int
) -> QuantizedMatrix:
    """Quantize and attach the N x K matrix view in one step."""
    n, k = matrix_dims(t.size, n_rows)
    data, mask = quantize(t, p)
    return QuantizedMatrix(n, k, data, mask)


# --- RTF file format: "RTF1", u8 dim count, u32 dims, f32 data, little-endian ---


def write_rtf(t: FeatureTensor, path) -> None:
    with open(path, "wb") as f:
        f.write(RTF_MAGIC)
        f.write(struct.pack("<B", len(t.dims)))
        f.write(struct.pack(f"<{len(t.dims)}I", *t.dims))
        f.write(t.data.astype("<f4").tobytes())


def read_rtf(path) -> FeatureTensor:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 5 or raw[:4] != RTF_MAGIC:
        raise InvalidInput(f"{path}: not an RTF tensor file")
    d = raw[4]
    head = 5 + 4 * d
    if len(raw) < head:
        raise InvalidInput(f"{path}: truncated RTF header")
    dims = struct.unpack(f"<{d}I", raw[5:head])
    total = math.prod(dims)
    if len(raw) != head + 4 * total:
        raise InvalidInput(f"{path}: RTF payload length mismatch")
    data = np.frombuffer(raw, dtype="<f4", count=total, offset=head)
    return FeatureTensor(dims, data.copy())
