"""sczip: split-computing feature compression.

Quantize a float feature tensor to low-bit integers, pack its nonzeros in a
non-cumulative CSR layout, entropy-code the unified symbol stream with rANS,
and pick the reshape dimension that minimizes the coded size. Also ships an
outage-channel latency model and a benchmark harness.
"""

from . import bench, channel, cli, container, optimizer, rans, sparse, tensor
from .bench import BenchRecord, gen_synthetic, run_sweep
from .channel import ChannelParams, comm_latency, outage_rate
from .container import Container, compress, decompress, read_container, write_container
from .errors import (
    AlphabetOverflow,
    CorruptStream,
    InvalidContainer,
    InvalidInput,
    NoFeasibleReshape,
    NonDivisible,
    NormalizeError,
    PrecisionTooSmall,
    SczipError,
    UncodableSymbol,
    UnsupportedVersion,
)
from .optimizer import CostProfile, SearchReport, exhaustive_search, search
from .rans import Bitstream, FrequencyTable, build_counts, decode, encode, entropy
from .sparse import ConcatStream, SparseCSR, concat, csr_decode, csr_encode, split
from .tensor import (
    FeatureTensor,
    QuantizedMatrix,
    QuantParams,
    compute_params,
    dequantize,
    quantize,
    read_rtf,
    write_rtf,
)

__version__ = "0.1.0"
