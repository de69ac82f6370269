"""Shared primitives: geodetic points, radio identifiers, signal levels."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ParseError

# Mean Earth radius; at building scale the ellipsoid correction is <0.5%.
EARTH_RADIUS_M = 6_371_000.0

# Received signal strength in dBm. Plain floats everywhere; the ingest range
# below is enforced only where raw readings enter the system.
RssiDbm = float

RSSI_INGEST_MIN: RssiDbm = -120.0
RSSI_INGEST_MAX: RssiDbm = 0.0

_BSSID_RE = re.compile(r"^[0-9a-f]{2}(:[0-9a-f]{2}){5}$")


@dataclass(frozen=True, order=True)
class Bssid:
    """Canonical radio hardware identifier.

    Six two-hex-digit octets, colon separated, lowercase -- exactly 17
    characters. Build instances through :func:`parse_bssid`.
    """

    text: str

    def __str__(self) -> str:
        return self.text


def parse_bssid(text: str) -> Bssid:
    """Parse and canonicalize a hardware identifier.

    Raises:
        ParseError: wrong octet count or non-hex characters, naming the
            offending input.
    """
    canonical = str(text).strip().lower()
    if not _BSSID_RE.match(canonical):
        raise ParseError(f"malformed bssid {text!r}: expected six ':'-separated hex octets")
    return Bssid(canonical)


def validate_rssi_dbm(value: float) -> RssiDbm:
    """Check a raw signal reading against the accepted ingest range."""
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"rssi must be finite, got {value!r}")
    if not RSSI_INGEST_MIN <= v <= RSSI_INGEST_MAX:
        raise DomainError(
            f"rssi {v} dBm outside accepted range [{RSSI_INGEST_MIN}, {RSSI_INGEST_MAX}]"
        )
    return v


@dataclass(frozen=True)
class GeoPoint:
    """A geocoded building location.

    Floors are semantic labels, not altitudes; vertical movement is modeled
    by graph edges, never by geodesy.
    """

    lat: float
    lon: float
    floor: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise DomainError(f"latitude {self.lat!r} outside [-90, 90]")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise DomainError(f"longitude {self.lon!r} outside [-180, 180]")
        if not isinstance(self.floor, int) or isinstance(self.floor, bool):
            raise DomainError(f"floor must be an integer, got {self.floor!r}")


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on a spherical Earth.

    Floors are ignored: this is the horizontal distance only. Non-negative,
    symmetric, and exactly zero for identical coordinates.
    """
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))
