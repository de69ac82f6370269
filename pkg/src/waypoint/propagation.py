"""Radio propagation: received power over distance, and synthetic scans.

The forward model, in the dB domain:

    P_r[dBm] = P_t + G_t + G_r + 10 * n * log10(lambda / (4 pi d))

i.e. transmit power attenuated by the (lambda / 4 pi d) factor raised to the
path-loss coefficient ``n``. Inverting for distance:

    d = (lambda / 4 pi) * 10 ** ((P_t + G_t + G_r - P_r) / (10 n))

All arithmetic stays in the dB domain for numerical stability; conversion to
linear milliwatts is provided only as a utility.
"""

from __future__ import annotations

import hashlib
import logging
import math
import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Sequence

from .errors import DomainError
from .geo import Bssid, RssiDbm
from .radiomap import Scan, ScanReading

log = logging.getLogger(__name__)

#: Simulated device-to-transmitter distances are clamped here to avoid the
#: near-field blowup of the far-field model.
MIN_SIMULATED_DISTANCE_M = 0.1

_SCAN_EPOCH = datetime(2020, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class PropagationParams:
    """Parameters of the propagation model.

    Defaults model a 2.4 GHz access point (wavelength 0.125 m) transmitting
    at 20 dBm through unity-gain antennas in a cluttered indoor space
    (n = 3). These defaults are configuration, not measured values.
    """

    pt_dbm: float = 20.0
    gt_db: float = 0.0
    gr_db: float = 0.0
    wavelength_m: float = 0.125
    n: float = 3.0

    def __post_init__(self) -> None:
        for name in ("pt_dbm", "gt_db", "gr_db", "wavelength_m", "n"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"propagation parameter {name} must be finite")
        if self.wavelength_m <= 0:
            raise DomainError(f"wavelength_m must be positive, got {self.wavelength_m}")
        if self.n <= 0:
            raise DomainError(f"path loss coefficient n must be positive, got {self.n}")
        if not 2.0 <= self.n <= 6.0:
            log.warning("path loss coefficient n=%s outside the typical [2, 6] range", self.n)


@dataclass(frozen=True)
class PlacedTransmitter:
    """An access point placed in the simulator's planar frame.

    One access point exposes several radios; all share the same position and
    propagation parameters, mirroring multi-radio hardware.
    """

    ap_name: str
    position: tuple[float, float]
    radios: tuple[Bssid, ...]
    params: PropagationParams

    def __post_init__(self) -> None:
        if not self.radios:
            raise DomainError(f"transmitter {self.ap_name!r} has no radios")
        if len(set(self.radios)) != len(self.radios):
            raise DomainError(f"transmitter {self.ap_name!r} has duplicate radios")


@dataclass(frozen=True)
class NoiseModel:
    """Additive Gaussian noise, in dB, on each simulated reading.

    The seed pins the whole noise stream: readings are drawn from substreams
    keyed by (seed, scan_index, bssid), so repeated simulations are
    bit-identical and radios are independent of each other.
    """

    sigma_db: float = 0.0
    seed: int = 42

    def __post_init__(self) -> None:
        if not math.isfinite(self.sigma_db) or self.sigma_db < 0:
            raise DomainError(f"sigma_db must be >= 0, got {self.sigma_db}")


def received_power_dbm(params: PropagationParams, distance_m: float) -> RssiDbm:
    """Received power in dBm at the given distance. Strictly decreasing in d.

    Raises:
        DomainError: non-positive or non-finite distance.
    """
    if not math.isfinite(distance_m) or distance_m <= 0:
        raise DomainError(f"distance must be positive and finite, got {distance_m!r}")
    path_db = 10.0 * params.n * math.log10(params.wavelength_m / (4.0 * math.pi * distance_m))
    return params.pt_dbm + params.gt_db + params.gr_db + path_db


def distance_from_power(params: PropagationParams, rssi: RssiDbm) -> float:
    """Distance in meters implied by a received power; exact inverse of
    :func:`received_power_dbm`.

    Raises:
        DomainError: non-finite input.
    """
    if not math.isfinite(rssi):
        raise DomainError(f"rssi must be finite, got {rssi!r}")
    budget_db = params.pt_dbm + params.gt_db + params.gr_db - rssi
    return (params.wavelength_m / (4.0 * math.pi)) * 10.0 ** (budget_db / (10.0 * params.n))


def dbm_to_milliwatts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def milliwatts_to_dbm(mw: float) -> float:
    if mw <= 0:
        raise DomainError(f"power must be positive, got {mw!r}")
    return 10.0 * math.log10(mw)


def stream_seed(label: str, seed: int) -> int:
    """Derive a label-scoped RNG seed.

    Distinct labels give disjoint noise streams even for equal integer seeds;
    this is how training, evaluation and live-service scans are kept from
    ever sharing a draw.
    """
    digest = hashlib.sha256(f"{label}:{seed}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _noise_db(noise: NoiseModel, scan_index: int, bssid: Bssid) -> float:
    if noise.sigma_db == 0.0:
        return 0.0
    # Random(str) seeds deterministically (sha512 of the text), so the stream
    # depends only on the (seed, scan_index, bssid) key.
    rng = random.Random(f"{noise.seed}:{scan_index}:{bssid.text}")
    return rng.gauss(0.0, noise.sigma_db)


def synth_scan(
    transmitters: Sequence[PlacedTransmitter],
    device_pos: tuple[float, float],
    noise: NoiseModel,
    scan_index: int,
) -> Scan:
    """Synthesize one scan at a planar device position.

    Emits one reading per radio of every transmitter: the model power at the
    geometric distance plus one Gaussian draw from that radio's noise
    substream. Identical arguments always yield an identical scan.

    Raises:
        DomainError: empty transmitter list.
    """
    if not transmitters:
        raise DomainError("cannot synthesize a scan with no transmitters")
    dx, dy = device_pos
    readings: list[ScanReading] = []
    for tx in transmitters:
        distance = math.hypot(dx - tx.position[0], dy - tx.position[1])
        if distance < MIN_SIMULATED_DISTANCE_M:
            log.info(
                "device at %r is %.3g m from %s; clamping to %.1f m",
                device_pos, distance, tx.ap_name, MIN_SIMULATED_DISTANCE_M,
            )
            distance = MIN_SIMULATED_DISTANCE_M
        level = received_power_dbm(tx.params, distance)
        for bssid in tx.radios:
            readings.append(
                ScanReading(
                    bssid=bssid,
                    ssid=tx.ap_name,
                    rssi=level + _noise_db(noise, scan_index, bssid),
                )
            )
    return Scan(
        timestamp=_SCAN_EPOCH + timedelta(seconds=scan_index),
        readings=tuple(readings),
    )
