"""Radio link budget and the per-hop delay model.

A hop's delay is the file-transfer time plus the straight-line propagation
time; every hop except the one that delivers to the route target additionally
pays a fixed decode-and-forward processing delay. All computation uses SI
linear units; dB and dBm appear only at the configuration boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .geo import SPEED_OF_LIGHT, EcefPoint, chord_distance

RATE_MODE_SHANNON = "shannon"
RATE_MODE_FIXED = "fixed"


class NodeKind(enum.Enum):
    GROUND_BS = "ground_bs"
    AIRCRAFT = "aircraft"
    SATELLITE = "satellite"


class LinkInfeasibleError(ValueError):
    """A link cannot carry traffic (zero rate)."""


@dataclass(frozen=True)
class Node:
    """A radio-equipped entity: ground base station, aircraft or satellite.

    Gains are linear; transmit power is watts; height is meters above the
    surface and drives the visibility check independently of the position.
    """

    id: str
    kind: NodeKind
    position: EcefPoint
    height: float
    tx_power: float
    tx_gain: float
    rx_gain: float

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        if self.tx_power <= 0:
            raise ValueError(f"node {self.id!r}: tx_power must be positive")
        if self.tx_gain <= 0 or self.rx_gain <= 0:
            raise ValueError(f"node {self.id!r}: antenna gains must be positive")
        if self.height < 0:
            raise ValueError(f"node {self.id!r}: height must be non-negative")


@dataclass(frozen=True)
class RadioProfile:
    """Per-kind radio defaults used when scenarios construct nodes."""

    tx_power_w: float
    tx_gain: float
    rx_gain: float
    height_m: float


@dataclass(frozen=True)
class LinkParams:
    """Shared radio constants for one scenario.

    Args:
        carrier_freq_hz: carrier frequency.
        bandwidth_hz: bandwidth allocated per link.
        noise_power_w: receiver noise power (linear watts).
        path_loss_exp: path-loss exponent; 2 is free space.
        snr_threshold: minimum receive SNR (linear) for a usable link.
        df_delay_s: decode-and-forward processing delay per intermediate node.
        file_size_bits: size of the file whose transfer is being timed.
        rate_mode: "shannon" for bandwidth * log2(1 + snr), "fixed" for a
            constant transfer rate taken from fixed_rate_bps.
    """

    carrier_freq_hz: float
    bandwidth_hz: float
    noise_power_w: float
    path_loss_exp: float = 2.0
    snr_threshold: float = 1.0
    df_delay_s: float = 0.020
    file_size_bits: float = 9000.0
    rate_mode: str = RATE_MODE_SHANNON
    fixed_rate_bps: float | None = None

    def __post_init__(self):
        for name in ("carrier_freq_hz", "bandwidth_hz", "noise_power_w", "df_delay_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.snr_threshold < 0:
            raise ValueError("snr_threshold must be non-negative")
        if self.path_loss_exp < 1:
            raise ValueError("path_loss_exp must be at least 1")
        if self.file_size_bits < 0:
            raise ValueError("file_size_bits must be non-negative")
        if self.rate_mode not in (RATE_MODE_SHANNON, RATE_MODE_FIXED):
            raise ValueError(f"unknown rate_mode {self.rate_mode!r}")
        if self.rate_mode == RATE_MODE_FIXED:
            if self.fixed_rate_bps is None or self.fixed_rate_bps <= 0:
                raise ValueError("fixed rate mode requires a positive fixed_rate_bps")


@dataclass(frozen=True)
class LinkBudget:
    """Evaluated budget of a directed link."""

    distance_m: float
    snr: float
    rate_bps: float
    d_tr: float
    d_pr: float


def path_loss(d: float, p: LinkParams) -> float:
    """Power gain (c / (4 pi d f))^alpha of a line-of-sight link of length d.

    Strictly decreasing in d; undefined (singular) at d = 0.
    """
    if d <= 0:
        raise ValueError("path loss is undefined at zero distance")
    return (SPEED_OF_LIGHT / (4.0 * math.pi * d * p.carrier_freq_hz)) ** p.path_loss_exp


def snr_at_distance(
    d: float, tx_power: float, tx_gain: float, rx_gain: float, p: LinkParams
) -> float:
    """Receive SNR (linear) over a link of length d with explicit radio terms."""
    return tx_power * tx_gain * rx_gain * path_loss(d, p) / p.noise_power_w


def snr(tx: Node, rx: Node, p: LinkParams) -> float:
    """Receive signal-to-noise ratio (linear) of the directed link tx -> rx."""
    d = chord_distance(tx.position, rx.position)
    if d <= 0:
        raise ValueError(f"nodes {tx.id!r} and {rx.id!r} are co-located")
    return snr_at_distance(d, tx.tx_power, tx.tx_gain, rx.rx_gain, p)


def capacity(snr_linear: float, p: LinkParams) -> float:
    """Link rate in bit/s: Shannon rate, or the configured constant."""
    if snr_linear < 0:
        raise ValueError("SNR must be non-negative")
    if p.rate_mode == RATE_MODE_FIXED:
        return float(p.fixed_rate_bps)
    return p.bandwidth_hz * math.log2(1.0 + snr_linear)


def transmission_delay(bits: float, rate_bps: float) -> float:
    """Seconds to push `bits` through a link at `rate_bps`."""
    if rate_bps <= 0:
        raise LinkInfeasibleError("link rate is zero; transfer impossible")
    return bits / rate_bps


def propagation_delay(d: float) -> float:
    """Light travel time over d meters; symmetric in the endpoints."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    return d / SPEED_OF_LIGHT


def link_budget(tx: Node, rx: Node, p: LinkParams) -> LinkBudget:
    """Evaluate distance, SNR, rate and both delay components for tx -> rx."""
    d = chord_distance(tx.position, rx.position)
    s = snr(tx, rx, p)
    rate = capacity(s, p)
    return LinkBudget(
        distance_m=d,
        snr=s,
        rate_bps=rate,
        d_tr=transmission_delay(p.file_size_bits, rate),
        d_pr=propagation_delay(d),
    )


def link_delay(tx: Node, rx: Node, p: LinkParams, rx_is_target: bool) -> float:
    """Total delay of one hop.

    Transfer plus propagation delay, plus the decode-and-forward delay unless
    the receiver is the route target (the target does not relay onward).
    """
    b = link_budget(tx, rx, p)
    base = b.d_tr + b.d_pr
    if rx_is_target:
        return base
    return base + p.df_delay_s


# --- dB / dBm boundary conversions -----------------------------------------


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0:
        raise ValueError("only positive quantities have a dB value")
    return 10.0 * math.log10(value)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError("only positive powers have a dBm value")
    return 10.0 * math.log10(watts) + 30.0
