"""Range-ANS entropy coder with static frequency tables.

Parameterization: 32-bit state, lower bound L = 2^23, byte-wise
renormalization, table precision n in [8, 16] (default 14). Symbols are
encoded in reverse so the decoder consumes the bitstream strictly forward.
The emitted bytes are laid out as: 4-byte little-endian initial decoder
state, then renormalization bytes in decoder consumption order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetOverflow,
    CorruptStream,
    InvalidInput,
    NormalizeError,
    PrecisionTooSmall,
    UncodableSymbol,
)
from .sparse import ConcatStream

STATE_LOW = 1 << 23  # lower bound of the renormalization interval
DEFAULT_PRECISION = 14
MIN_PRECISION = 8  # codec default range; tables themselves allow any n >= 1
MAX_PRECISION = 16


@dataclass(frozen=True)
class FrequencyTable:
    """Normalized symbol frequencies summing to 2^precision, plus the CDF."""

    alphabet_size: int
    raw_counts: np.ndarray
    freqs: np.ndarray  # normalized, sum == 2**precision
    cdf: np.ndarray  # length alphabet_size + 1, cdf[0] == 0
    precision: int

    def __post_init__(self):
        object.__setattr__(
            self, "raw_counts", np.asarray(self.raw_counts, dtype=np.int64)
        )
        object.__setattr__(self, "freqs", np.asarray(self.freqs, dtype=np.int64))
        object.__setattr__(self, "cdf", np.asarray(self.cdf, dtype=np.int64))

    @classmethod
    def from_freqs(cls, freqs, precision: int) -> "FrequencyTable":
        """Rebuild a table from already-normalized frequencies (wire form)."""
        freqs = np.asarray(freqs, dtype=np.int64)
        if int(freqs.sum()) != 1 << precision:
            raise CorruptStream("frequencies do not sum to 2^precision")
        cdf = np.concatenate(([0], np.cumsum(freqs)))
        return cls(freqs.size, freqs.copy(), freqs, cdf, precision)


@dataclass(frozen=True)
class Bitstream:
    """Encoded payload ordered for strictly forward decoder consumption."""

    data: bytes

    @property
    def payload_bits(self) -> int:
        return 8 * len(self.data)


def _as_symbols(d) -> np.ndarray:
    if isinstance(d, ConcatStream):
        return d.data
    return np.ascontiguousarray(d, dtype=np.uint32).ravel()


def build_counts(d, alphabet_size: int) -> np.ndarray:
    """Tally symbol occurrences over the whole stream."""
    symbols = _as_symbols(d)
    if alphabet_size < 1:
        raise InvalidInput(f"alphabet_size must be >= 1, got {alphabet_size}")
    if symbols.size and int(symbols.max()) >= alphabet_size:
        raise AlphabetOverflow(
            f"symbol {int(symbols.max())} >= alphabet size {alphabet_size}"
        )
    return np.bincount(symbols, minlength=alphabet_size).astype(np.int64)


def normalize_frequencies(counts, precision: int) -> FrequencyTable:
    """Scale counts to sum exactly 2^precision (largest-remainder method).

    Every symbol with a nonzero count keeps a frequency of at least 1.
    Deficits and surpluses are settled against the largest entries, ties
    broken by lower symbol index.
    """
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total <= 0:
        raise NormalizeError("cannot normalize all-zero counts")
    if not 1 <= precision <= MAX_PRECISION:
        raise InvalidInput(f"precision must be in [1, {MAX_PRECISION}]")
    target = 1 << precision
    present = counts > 0
    n_present = int(present.sum())
    if n_present > target:
        raise PrecisionTooSmall(
            f"{n_present} distinct symbols exceed 2^{precision} slots"
        )
    ideal = counts.astype(np.float64) * (target / total)
    freqs = np.floor(ideal).astype(np.int64)
    remainder = ideal - freqs
    deficit = target - int(freqs.sum())
    if deficit > 0:
        # Hand the leftover slots to the largest remainders (lower index wins ties).
        order = np.lexsort((np.arange(counts.size), -remainder))
        take = order[:deficit]
        freqs[take] += 1
    # Floor-and-round can leave a present symbol at zero; it must stay codable.
    starved = present & (freqs == 0)
    freqs[starved] = 1
    surplus = int(freqs.sum()) - target
    while surplus > 0:
        # Shave the largest entries that can afford it (must stay >= 1).
        idx = int(np.argmax(freqs))
        room = int(freqs[idx]) - 1
        cut = min(room, surplus)
        if cut <= 0:
            raise PrecisionTooSmall("cannot satisfy minimum frequencies")
        freqs[idx] -= cut
        surplus -= cut
    cdf = np.concatenate(([0], np.cumsum(freqs)))
    return FrequencyTable(counts.size, counts, freqs, cdf, precision)


def encode_step(
    state: int, freq: int, cum: int, precision: int
) -> tuple[int, list[int]]:
    """One symbol push: renormalize by bytes, then apply the state transform."""
    emitted = []
    bound = ((STATE_LOW >> precision) << 8) * freq
    while state >= bound:
        emitted.append(state & 0xFF)
        state >>= 8
    state = (state // freq << precision) + cum + state % freq
    return state, emitted


def decode_step(state: int, t: FrequencyTable) -> tuple[int, int]:
    """Identify the symbol from the state's low bits and pop it (no refill)."""
    slot = state & ((1 << t.precision) - 1)
    sym = int(np.searchsorted(t.cdf, slot, side="right")) - 1
    state = int(t.freqs[sym]) * (state >> t.precision) + slot - int(t.cdf[sym])
    return state, sym


def encode(d, t: FrequencyTable, *, check_state: bool = False) -> Bitstream:
    """Entropy-code the stream; symbols are pushed in reverse order."""
    symbols = _as_symbols(d)
    if symbols.size and int(symbols.max()) >= t.alphabet_size:
        raise AlphabetOverflow(
            f"symbol {int(symbols.max())} >= alphabet size {t.alphabet_size}"
        )
    freqs = t.freqs.tolist()
    cdf = t.cdf.tolist()
    precision = t.precision
    shift = STATE_LOW >> precision
    state = STATE_LOW
    emitted = bytearray()
    for x in symbols[::-1].tolist():
        f = freqs[x]
        if f == 0:
            raise UncodableSymbol(f"symbol {x} has zero normalized frequency")
        bound = (shift << 8) * f
        while state >= bound:
            emitted.append(state & 0xFF)
            state >>= 8
        state = (state // f << precision) + cdf[x] + state % f
        if check_state:
            assert STATE_LOW <= state < 1 << 32
    out = state.to_bytes(4, "little") + bytes(reversed(emitted))
    return Bitstream(bytes(out))


def decode(
    b: Bitstream, t: FrequencyTable, count: int, *, check_state: bool = False
) -> np.ndarray:
    """Recover `count` symbols in forward order; verifies the final state."""
    data = b.data
    if len(data) < 4:
        raise CorruptStream("bitstream shorter than the 4 state bytes")
    state = int.from_bytes(data[:4], "little")
    pos = 4
    mask = (1 << t.precision) - 1
    freqs = t.freqs.tolist()
    cdf = t.cdf.tolist()
    n = len(data)
    out = np.empty(count, dtype=np.uint32)
    find = np.searchsorted
    cdf_arr = t.cdf
    for i in range(count):
        slot = state & mask
        sym = int(find(cdf_arr, slot, side="right")) - 1
        state = freqs[sym] * (state >> t.precision) + slot - cdf[sym]
        while state < STATE_LOW:
            if pos >= n:
                raise CorruptStream("bitstream exhausted mid-decode")
            state = (state << 8) | data[pos]
            pos += 1
        if check_state:
            assert STATE_LOW <= state < 1 << 32
        out[i] = sym
    if state != STATE_LOW or pos != n:
        raise CorruptStream("final state check failed")
    return out


def entropy(counts) -> float:
    """Shannon entropy in bits per symbol of the empirical distribution."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise InvalidInput("entropy of an empty distribution")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def expected_size(counts) -> float:
    """Expected compressed size in bits: total symbols times entropy."""
    counts = np.asarray(counts, dtype=np.float64)
    return float(counts.sum()) * entropy(counts)


def compression_ratio(counts, alphabet_size: int) -> float:
    """Expected bits relative to the flat log2(alphabet) encoding."""
    if alphabet_size < 2:
        raise InvalidInput("compression ratio needs an alphabet of at least 2")
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise InvalidInput("empty distribution")
    return entropy(counts) / float(np.log2(alphabet_size))
