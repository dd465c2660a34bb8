"""Self-describing compressed container and the end-to-end pipeline.

Header layout (all little-endian):
    magic "SCZ1" | version u8 | q_bits u8 | precision u8 | dim_count u8 |
    dims u32 x dim_count | T u64 | N u32 | K u32 | nnz u64 | scale f64 |
    zero_point i64 | alphabet_size u32 | freqs u16 x alphabet_size |
    payload_byte_len u64
followed by the rANS payload. The header alone suffices to decode; nothing
else crosses the link.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import optimizer, rans, sparse, tensor
from .errors import CorruptStream, InvalidContainer, InvalidInput, UnsupportedVersion
from .rans import Bitstream, FrequencyTable
from .sparse import ConcatStream
from .tensor import FeatureTensor, QuantParams

MAGIC = b"SCZ1"
VERSION = 1
# Frequencies travel as u16, so in-band tables top out at precision 15.
MAX_CONTAINER_PRECISION = 15


@dataclass(frozen=True)
class Container:
    """Header fields plus the entropy-coded payload."""

    q_bits: int
    precision: int
    dims: tuple[int, ...]
    n_rows: int
    n_cols: int
    nnz: int
    scale: float
    zero_point: int
    freqs: np.ndarray  # normalized table, sum == 2**precision
    payload: bytes
    version: int = VERSION

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    @property
    def stream_len(self) -> int:
        return 2 * self.nnz + self.n_rows

    @property
    def alphabet_size(self) -> int:
        return int(np.asarray(self.freqs).size)

    @property
    def header_bytes(self) -> int:
        return 4 + 4 + 4 * len(self.dims) + 8 + 4 + 4 + 8 + 8 + 8 + 4 + 2 * self.alphabet_size + 8

    @property
    def payload_bytes(self) -> int:
        return len(self.payload)

    @property
    def total_bytes(self) -> int:
        return self.header_bytes + self.payload_bytes


def compress(
    t: FeatureTensor,
    q_bits: int,
    n_rows: int | None = None,
    precision: int = rans.DEFAULT_PRECISION,
) -> Container:
    """Quantize, sparsify, and entropy-code a tensor into a container."""
    if not rans.MIN_PRECISION <= precision <= MAX_CONTAINER_PRECISION:
        raise InvalidInput(
            f"container precision must be in [{rans.MIN_PRECISION}, "
            f"{MAX_CONTAINER_PRECISION}]"
        )
    params = tensor.params_for(t, q_bits)
    if n_rows is None:
        n_rows, _ = optimizer.search(t, q_bits)
    q = tensor.quantize_reshape(t, params, n_rows)
    s = sparse.csr_encode(q)
    d = sparse.concat(s)
    alphabet = int(d.data.max()) + 1 if d.data.size else 1
    counts = rans.build_counts(d, alphabet)
    table = rans.normalize_frequencies(counts, precision)
    payload = rans.encode(d, table)
    return Container(
        q_bits=params.q_bits,
        precision=precision,
        dims=t.dims,
        n_rows=q.n_rows,
        n_cols=q.n_cols,
        nnz=s.nnz,
        scale=params.scale,
        zero_point=params.zero_point,
        freqs=table.freqs,
        payload=payload.data,
    )


def decompress(c: Container) -> FeatureTensor:
    """Invert the pipeline; original zeros come back as exact 0.0."""
    if c.version != VERSION:
        raise UnsupportedVersion(f"container version {c.version} unsupported")
    if c.n_rows * c.n_cols != c.total:
        raise InvalidContainer("N * K does not match the product of dims")
    table = FrequencyTable.from_freqs(c.freqs, c.precision)
    symbols = rans.decode(Bitstream(c.payload), table, c.stream_len)
    d = ConcatStream(symbols, c.nnz, c.n_rows)
    s = sparse.split(d)
    q = sparse.csr_decode(s, c.n_rows, c.n_cols)
    params = QuantParams(c.q_bits, c.scale, c.zero_point, 0.0, 0.0)
    return tensor.dequantize(q, params, c.dims)


def to_bytes(c: Container) -> bytes:
    header = bytearray()
    header += MAGIC
    header += struct.pack("<BBBB", c.version, c.q_bits, c.precision, len(c.dims))
    header += struct.pack(f"<{len(c.dims)}I", *c.dims)
    header += struct.pack("<QIIQ", c.total, c.n_rows, c.n_cols, c.nnz)
    header += struct.pack("<dq", c.scale, c.zero_point)
    header += struct.pack("<I", c.alphabet_size)
    header += np.asarray(c.freqs, dtype="<u2").tobytes()
    header += struct.pack("<Q", len(c.payload))
    return bytes(header) + c.payload


def from_bytes(raw: bytes) -> Container:
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise InvalidContainer("bad magic bytes")
    version, q_bits, precision, dim_count = struct.unpack_from("<BBBB", raw, 4)
    if version != VERSION:
        raise UnsupportedVersion(f"container version {version} unsupported")
    pos = 8
    try:
        dims = struct.unpack_from(f"<{dim_count}I", raw, pos)
        pos += 4 * dim_count
        total, n_rows, n_cols, nnz = struct.unpack_from("<QIIQ", raw, pos)
        pos += 24
        scale, zero_point = struct.unpack_from("<dq", raw, pos)
        pos += 16
        (alphabet_size,) = struct.unpack_from("<I", raw, pos)
        pos += 4
        freqs = np.frombuffer(raw, dtype="<u2", count=alphabet_size, offset=pos)
        pos += 2 * alphabet_size
        (payload_len,) = struct.unpack_from("<Q", raw, pos)
        pos += 8
    except struct.error as exc:
        raise InvalidContainer(f"truncated header: {exc}") from None
    if total != math.prod(dims):
        raise InvalidContainer("T does not match the product of dims")
    if n_rows * n_cols != total:
        raise InvalidContainer("N * K does not match T")
    if int(freqs.astype(np.int64).sum()) != 1 << precision:
        raise InvalidContainer("frequency table does not sum to 2^precision")
    payload = raw[pos : pos + payload_len]
    if len(payload) != payload_len or pos + payload_len != len(raw):
        raise CorruptStream("payload length does not match the header")
    return Container(
        q_bits=q_bits,
        precision=precision,
        dims=tuple(int(d) for d in dims),
        n_rows=n_rows,
        n_cols=n_cols,
        nnz=nnz,
        scale=scale,
        zero_point=zero_point,
        freqs=freqs.astype(np.int64),
        payload=payload,
        version=version,
    )


def write_container(c: Container, path) -> None:
    with open(path, "wb") as f:
        f.write(to_bytes(c))


def read_container(path) -> Container:
    with open(path, "rb") as f:
        return from_bytes(f.read())
