"""Outage-constrained Rayleigh-fading link model.

Converts a payload size into a modeled transmission time via the largest
rate whose outage probability stays below epsilon:
    R = W * log2(1 + snr * sigma_h^2 * (-ln(1 - eps)))
Only latency *ratios* between payloads are meaningful for comparisons;
absolute times depend entirely on the chosen channel parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput

DEFAULT_EPS = 0.001
DEFAULT_BANDWIDTH_HZ = 10e6
DEFAULT_SNR_DB = 10.0
DEFAULT_FADING_VAR = 1.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    """Bandwidth, mean SNR (linear), fading variance, and outage probability."""

    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    mean_snr: float = db_to_linear(DEFAULT_SNR_DB)
    fading_var: float = DEFAULT_FADING_VAR
    outage_prob: float = DEFAULT_EPS

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise InvalidInput(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if self.mean_snr <= 0:
            raise InvalidInput(f"mean SNR must be positive, got {self.mean_snr}")
        if self.fading_var <= 0:
            raise InvalidInput(f"fading variance must be positive, got {self.fading_var}")
        if not 0 < self.outage_prob < 1:
            raise InvalidInput(f"outage probability must be in (0, 1), got {self.outage_prob}")

    @classmethod
    def from_db(
        cls,
        bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ,
        snr_db: float = DEFAULT_SNR_DB,
        fading_var: float = DEFAULT_FADING_VAR,
        outage_prob: float = DEFAULT_EPS,
    ) -> "ChannelParams":
        """Build params with the SNR given in dB."""
        return cls(bandwidth_hz, db_to_linear(snr_db), fading_var, outage_prob)


def outage_rate(p: ChannelParams) -> float:
    """Epsilon-outage rate in bits per second."""
    margin = -math.log(1.0 - p.outage_prob)
    return p.bandwidth_hz * math.log2(1.0 + p.mean_snr * p.fading_var * margin)


def comm_latency(payload_bits: int, p: ChannelParams) -> float:
    """Modeled transmission time in seconds for a payload of the given size."""
    if payload_bits < 0:
        raise InvalidInput(f"payload_bits must be >= 0, got {payload_bits}")
    return payload_bits / outage_rate(p)
