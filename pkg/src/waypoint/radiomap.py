"""Offline training: scan-log ingestion, radio consolidation, radio maps.

A radio map is the product of the training phase: one fingerprint per
surveyed location, each fingerprint mapping access-point ids to the mean
signal level observed there. Several physical radios (BSSIDs) may belong to
one access point; their readings are averaged together, and per-location
values are additionally averaged over repeated scans, because individual
radios show large scan-to-scan spread while the consolidated means are
stable enough to disambiguate locations.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Mapping

from .errors import DocumentError, DomainError, IngestError, ParseError
from .geo import Bssid, GeoPoint, RssiDbm, parse_bssid, validate_rssi_dbm

log = logging.getLogger(__name__)

#: Weak radios are noise, not disambiguation signal; entries below this level
#: are dropped from fingerprints. 15 dB above an assumed -100 dBm noise floor.
DEFAULT_FLOOR_DBM: RssiDbm = -85.0

RADIO_MAP_VERSION = 1

SCAN_LOG_COLUMNS = ("timestamp", "location_id", "lat", "lon", "floor", "ssid", "bssid", "rssi_dbm")


@dataclass(frozen=True)
class ScanReading:
    """One radio observed during one sweep."""

    bssid: Bssid
    ssid: str
    rssi: RssiDbm


@dataclass(frozen=True)
class Scan:
    """One Wi-Fi sweep: at most one reading per radio."""

    timestamp: datetime
    readings: tuple[ScanReading, ...]

    def __post_init__(self) -> None:
        seen: set[Bssid] = set()
        for r in self.readings:
            if r.bssid in seen:
                raise DomainError(f"duplicate reading for {r.bssid} in one scan")
            seen.add(r.bssid)


@dataclass(frozen=True)
class ApRegistry:
    """Maps radios to the access point they belong to.

    `radios` maps each BSSID to an access-point id; `ssids` maps access-point
    ids to their network name. Radios missing from the registry are treated
    as singleton access points named by their canonical BSSID text, so a
    registry is optional.
    """

    radios: Mapping[Bssid, str]
    ssids: Mapping[str, str]

    @classmethod
    def empty(cls) -> "ApRegistry":
        return cls(radios={}, ssids={})

    @classmethod
    def from_training(cls, training: "TrainingSet") -> "ApRegistry":
        """Derive a registry from scan data: radios sharing an SSID form one AP."""
        radios: dict[Bssid, str] = {}
        ssids: dict[str, str] = {}
        for loc in training.locations.values():
            for scan in loc.scans:
                for r in scan.readings:
                    ap_id = r.ssid if r.ssid else r.bssid.text
                    if r.bssid not in radios:
                        radios[r.bssid] = ap_id
                        ssids.setdefault(ap_id, r.ssid)
                    elif radios[r.bssid] != ap_id:
                        log.debug("radio %s seen with conflicting ssid %r; keeping %r",
                                  r.bssid, r.ssid, radios[r.bssid])
        return cls(radios=radios, ssids=ssids)

    def ap_for(self, bssid: Bssid) -> str | None:
        return self.radios.get(bssid)

    def with_radios(self, extra: Mapping[Bssid, tuple[str, str]]) -> "ApRegistry":
        """Return a copy extended with `{bssid: (ap_id, ssid)}` entries."""
        if not extra:
            return self
        radios = dict(self.radios)
        ssids = dict(self.ssids)
        for bssid, (ap_id, ssid) in extra.items():
            radios.setdefault(bssid, ap_id)
            ssids.setdefault(ap_id, ssid)
        return ApRegistry(radios=radios, ssids=ssids)


@dataclass(frozen=True)
class TrainingLocation:
    location_id: str
    point: GeoPoint
    scans: tuple[Scan, ...]

    def __post_init__(self) -> None:
        if not self.scans:
            raise DomainError(f"location {self.location_id!r} has no scans")


@dataclass(frozen=True)
class TrainingSet:
    """Everything recorded during the survey, grouped per location."""

    locations: Mapping[str, TrainingLocation]


@dataclass(frozen=True)
class RejectedRow:
    row_number: int
    reason: str


@dataclass(frozen=True)
class IngestResult:
    training: TrainingSet
    rejected: tuple[RejectedRow, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class Fingerprint:
    """The per-location training product: access point -> mean dBm."""

    location_id: str
    point: GeoPoint
    signature: Mapping[str, RssiDbm]

    def __post_init__(self) -> None:
        if not self.signature:
            raise DomainError(f"fingerprint {self.location_id!r} has an empty signature")


@dataclass(frozen=True)
class RadioMap:
    fingerprints: tuple[Fingerprint, ...]
    registry: ApRegistry
    floor_dbm: RssiDbm

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for fp in self.fingerprints:
            if fp.location_id in seen:
                raise DomainError(f"duplicate fingerprint location {fp.location_id!r}")
            seen.add(fp.location_id)
            for ap_id in fp.signature:
                if ap_id not in self.ssids:
                    raise DomainError(
                        f"fingerprint {fp.location_id!r} references unregistered ap {ap_id!r}"
                    )

    @property
    def ssids(self) -> Mapping[str, str]:
        return self.registry.ssids

    def __len__(self) -> int:
        return len(self.fingerprints)


def _mean(values: list[float]) -> float:
    # fsum is exactly rounded, which makes every averaging step in this
    # module independent of reading/scan order.
    return math.fsum(values) / len(values)


def ingest_scan_log(rows: Iterable[Mapping[str, str]]) -> IngestResult:
    """Turn tabular scan-log records into a training set.

    Rows follow the scan-log CSV columns (`SCAN_LOG_COLUMNS`). Rows are
    grouped by location and timestamp; duplicate (timestamp, bssid) readings
    are averaged in dBm. Malformed rows are collected into the rejection
    report instead of aborting the ingest.

    Raises:
        IngestError: no valid rows at all, or two rows give one location
            different geocodes.
    """
    geocodes: dict[str, GeoPoint] = {}
    # location_id -> timestamp -> bssid -> (ssid, [rssi...])
    pending: dict[str, dict[datetime, dict[Bssid, tuple[str, list[float]]]]] = {}
    rejected: list[RejectedRow] = []

    for row_number, row in enumerate(rows, start=1):
        try:
            location_id = str(row["location_id"]).strip()
            if not location_id:
                raise ValueError("empty location_id")
            timestamp = datetime.fromisoformat(str(row["timestamp"]).strip())
            point = GeoPoint(
                lat=float(row["lat"]), lon=float(row["lon"]), floor=int(row["floor"])
            )
            bssid = parse_bssid(row["bssid"])
            rssi = validate_rssi_dbm(float(row["rssi_dbm"]))
            ssid = str(row.get("ssid", "")).strip()
        except KeyError as exc:
            rejected.append(RejectedRow(row_number, f"missing column {exc.args[0]!r}"))
            continue
        except (ValueError, TypeError, DomainError, ParseError) as exc:
            rejected.append(RejectedRow(row_number, str(exc)))
            continue

        known = geocodes.get(location_id)
        if known is None:
            geocodes[location_id] = point
        elif known != point:
            raise IngestError(
                f"inconsistent geocode for location {location_id!r}: "
                f"row {row_number} gives {point}, earlier rows gave {known}"
            )
        slot = pending.setdefault(location_id, {}).setdefault(timestamp, {})
        _, values = slot.setdefault(bssid, (ssid, []))
        values.append(rssi)

    if rejected:
        for r in rejected:
            log.warning("rejected scan-log row %d: %s", r.row_number, r.reason)
    if not pending:
        raise IngestError("scan log contains no valid rows")

    locations: dict[str, TrainingLocation] = {}
    for location_id in sorted(pending):
        scans = []
        for timestamp in sorted(pending[location_id]):
            readings = tuple(
                ScanReading(bssid=bssid, ssid=ssid, rssi=_mean(values))
                for bssid, (ssid, values) in sorted(pending[location_id][timestamp].items())
            )
            scans.append(Scan(timestamp=timestamp, readings=readings))
        locations[location_id] = TrainingLocation(
            location_id=location_id, point=geocodes[location_id], scans=tuple(scans)
        )
    return IngestResult(training=TrainingSet(locations=locations), rejected=tuple(rejected))


def group_radios(registry: ApRegistry, scan: Scan) -> dict[str, RssiDbm]:
    """Consolidate one scan into per-access-point mean dBm values.

    Readings whose radio is not in the registry form singleton access points
    keyed by the canonical BSSID text.
    """
    grouped: dict[str, list[float]] = {}
    for r in scan.readings:
        ap_id = registry.ap_for(r.bssid) or r.bssid.text
        grouped.setdefault(ap_id, []).append(r.rssi)
    return {ap_id: _mean(values) for ap_id, values in grouped.items()}


def apply_floor(signature: Mapping[str, RssiDbm], floor_dbm: RssiDbm) -> dict[str, RssiDbm]:
    """Drop signature entries below the reliability floor (boundary inclusive).

    May return an empty mapping; the caller decides whether that makes the
    location unusable. Idempotent.
    """
    return {ap_id: v for ap_id, v in signature.items() if v >= floor_dbm}


def build_radio_map(
    training: TrainingSet,
    registry: ApRegistry | None = None,
    floor_dbm: RssiDbm = DEFAULT_FLOOR_DBM,
) -> RadioMap:
    """Run the training phase over a survey.

    Per location: consolidate each scan per access point, average each access
    point over scans, then apply the reliability floor. Locations left with
    empty signatures are excluded (and logged).

    Raises:
        DomainError: empty training set, or every location filtered out.
    """
    if not training.locations:
        raise DomainError("training set is empty")
    registry = registry if registry is not None else ApRegistry.empty()

    singleton_radios: dict[Bssid, tuple[str, str]] = {}
    fingerprints: list[Fingerprint] = []
    excluded: list[str] = []
    for location_id in sorted(training.locations):
        loc = training.locations[location_id]
        per_ap: dict[str, list[float]] = {}
        for scan in loc.scans:
            for ap_id, value in group_radios(registry, scan).items():
                per_ap.setdefault(ap_id, []).append(value)
            for r in scan.readings:
                if registry.ap_for(r.bssid) is None:
                    singleton_radios.setdefault(r.bssid, (r.bssid.text, r.ssid))
        signature = apply_floor({ap: _mean(v) for ap, v in per_ap.items()}, floor_dbm)
        if not signature:
            excluded.append(location_id)
            continue
        fingerprints.append(
            Fingerprint(location_id=location_id, point=loc.point, signature=signature)
        )
    if excluded:
        log.warning("excluded %d location(s) with no usable signal: %s",
                    len(excluded), ", ".join(excluded))
    if not fingerprints:
        raise DomainError(
            f"radio map build failed: every location fell below the {floor_dbm} dBm floor"
        )
    return RadioMap(
        fingerprints=tuple(fingerprints),
        registry=registry.with_radios(singleton_radios),
        floor_dbm=floor_dbm,
    )


# ---------------------------------------------------------------------------
# Persistence. Versioned JSON document; see README for the full schema.

def radio_map_document(radio_map: RadioMap) -> dict:
    return {
        "version": RADIO_MAP_VERSION,
        "floor_dbm": radio_map.floor_dbm,
        "registry": {
            "radios": {b.text: ap_id for b, ap_id in sorted(radio_map.registry.radios.items())},
            "ssids": dict(sorted(radio_map.registry.ssids.items())),
        },
        "fingerprints": [
            {
                "location_id": fp.location_id,
                "lat": fp.point.lat,
                "lon": fp.point.lon,
                "floor": fp.point.floor,
                "signature": dict(sorted(fp.signature.items())),
            }
            for fp in radio_map.fingerprints
        ],
    }


def save_radio_map(radio_map: RadioMap, sink: IO[str]) -> None:
    json.dump(radio_map_document(radio_map), sink, indent=2, sort_keys=True)
    sink.write("\n")


def _document_field(doc: Mapping, key: str, path: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise DocumentError(f"{path}: missing field {key!r}")
    return doc[key]


def _check_version(doc: Mapping, expected: int, kind: str) -> None:
    version = _document_field(doc, "version", kind)
    if version != expected:
        raise DocumentError(
            f"unsupported {kind} version {version!r} (supported: {expected})"
        )


def load_radio_map(source: IO[str]) -> RadioMap:
    """Load a radio-map document.

    Raises:
        DocumentError: malformed JSON (with line/column), unsupported
            version, or missing/invalid fields (with their document path).
    """
    try:
        doc = json.load(source)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"invalid radio map document at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    _check_version(doc, RADIO_MAP_VERSION, "radio map")
    registry_doc = _document_field(doc, "registry", "radio map")
    try:
        radios = {
            parse_bssid(b): str(ap_id)
            for b, ap_id in _document_field(registry_doc, "radios", "registry").items()
        }
        ssids = {str(k): str(v) for k, v in _document_field(registry_doc, "ssids", "registry").items()}
    except (AttributeError, TypeError) as exc:
        raise DocumentError(f"registry: malformed mapping ({exc})") from exc
    registry = ApRegistry(radios=radios, ssids=ssids)

    fingerprints: list[Fingerprint] = []
    entries = _document_field(doc, "fingerprints", "radio map")
    if not isinstance(entries, list):
        raise DocumentError("radio map: 'fingerprints' must be a list")
    for i, entry in enumerate(entries):
        path = f"fingerprints[{i}]"
        try:
            point = GeoPoint(
                lat=float(_document_field(entry, "lat", path)),
                lon=float(_document_field(entry, "lon", path)),
                floor=int(_document_field(entry, "floor", path)),
            )
            signature = {
                str(ap): float(v)
                for ap, v in _document_field(entry, "signature", path).items()
            }
            fingerprints.append(
                Fingerprint(
                    location_id=str(_document_field(entry, "location_id", path)),
                    point=point,
                    signature=signature,
                )
            )
        except (TypeError, ValueError, AttributeError, DomainError) as exc:
            raise DocumentError(f"{path}: {exc}") from exc
    try:
        return RadioMap(
            fingerprints=tuple(fingerprints),
            registry=registry,
            floor_dbm=float(_document_field(doc, "floor_dbm", "radio map")),
        )
    except (TypeError, ValueError, DomainError) as exc:
        raise DocumentError(f"radio map: {exc}") from exc


def read_scan_log(path: str) -> IngestResult:
    """Ingest a scan-log CSV file from disk."""
    with open(path, newline="", encoding="utf-8") as fh:
        return ingest_scan_log(csv.DictReader(fh))


def read_single_scan(path: str) -> Scan:
    """Read one online scan from a CSV file.

    Only the `ssid`, `bssid` and `rssi_dbm` columns are required; location
    columns, if present, are ignored. Duplicate radios are averaged.
    Malformed rows are logged and skipped; an empty file yields an empty scan.
    """
    per_radio: dict[Bssid, tuple[str, list[float]]] = {}
    timestamp: datetime | None = None
    with open(path, newline="", encoding="utf-8") as fh:
        for row_number, row in enumerate(csv.DictReader(fh), start=1):
            try:
                bssid = parse_bssid(row["bssid"])
                rssi = validate_rssi_dbm(float(row["rssi_dbm"]))
                ssid = str(row.get("ssid", "")).strip()
                if timestamp is None and row.get("timestamp"):
                    timestamp = datetime.fromisoformat(str(row["timestamp"]).strip())
            except (KeyError, ValueError, TypeError, DomainError, ParseError) as exc:
                log.warning("skipped scan row %d: %s", row_number, exc)
                continue
            _, values = per_radio.setdefault(bssid, (ssid, []))
            values.append(rssi)
    readings = tuple(
        ScanReading(bssid=bssid, ssid=ssid, rssi=_mean(values))
        for bssid, (ssid, values) in sorted(per_radio.items())
    )
    return Scan(timestamp=timestamp or datetime(1970, 1, 1), readings=readings)
