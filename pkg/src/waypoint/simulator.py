"""Deterministic simulation: synthetic floors, training surveys, and
localization-error measurement for both matching methods.

Every output here is a pure function of (scenario, matcher config, seeds).
Noise streams are label-scoped ("training", "evaluation", "service",
"test-points"), so training scans, evaluation scans and live service scans
never share a random draw even when built from the same integer seed.

Planar scenario coordinates map to geodetic ones by an equirectangular
projection about the scenario anchor: one meter is 1/111194.93 degrees of
latitude, with longitude scaled by cos(anchor latitude). At building scale
this matches planar geometry to well below a millimeter and is trivially
invertible.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import IO, Mapping, Sequence

from .errors import DocumentError, DomainError, WaypointError
from .geo import EARTH_RADIUS_M, GeoPoint, parse_bssid
from .localization import MatcherConfig, locate, multilaterate
from .propagation import (
    NoiseModel,
    PlacedTransmitter,
    PropagationParams,
    stream_seed,
    synth_scan,
)
from .radiomap import (
    ApRegistry,
    RadioMap,
    TrainingLocation,
    TrainingSet,
    build_radio_map,
    group_radios,
    DEFAULT_FLOOR_DBM,
)

SCENARIO_VERSION = 1

METERS_PER_DEGREE_LAT = math.pi * EARTH_RADIUS_M / 180.0  # 111194.92664455873


def planar_to_geo(anchor: GeoPoint, x: float, y: float) -> GeoPoint:
    """Map planar scenario meters to a geodetic point about the anchor."""
    lat = anchor.lat + y / METERS_PER_DEGREE_LAT
    lon = anchor.lon + x / (METERS_PER_DEGREE_LAT * math.cos(math.radians(anchor.lat)))
    return GeoPoint(lat=lat, lon=lon, floor=anchor.floor)


def geo_to_planar(anchor: GeoPoint, point: GeoPoint) -> tuple[float, float]:
    """Inverse of :func:`planar_to_geo` (floor ignored)."""
    y = (point.lat - anchor.lat) * METERS_PER_DEGREE_LAT
    x = (point.lon - anchor.lon) * METERS_PER_DEGREE_LAT * math.cos(math.radians(anchor.lat))
    return (x, y)


def planar_error_m(anchor: GeoPoint, a: GeoPoint, b: GeoPoint) -> float:
    """Planar Euclidean separation, in meters, of two geodetic points.

    Computed directly from coordinate deltas in the anchor's tangent frame,
    so two identical points give exactly 0.0.
    """
    dy = (b.lat - a.lat) * METERS_PER_DEGREE_LAT
    dx = (b.lon - a.lon) * METERS_PER_DEGREE_LAT * math.cos(math.radians(anchor.lat))
    return math.hypot(dx, dy)


@dataclass(frozen=True)
class Scenario:
    """A simulated floor: extent, training grid, transmitters, noise."""

    extent: tuple[float, float]
    grid_m: float
    transmitters: tuple[PlacedTransmitter, ...]
    noise: NoiseModel
    scans_per_point: int = 5
    anchor: GeoPoint = GeoPoint(12.9346, 77.5358, 0)

    def __post_init__(self) -> None:
        width, height = self.extent
        if width <= 0 or height <= 0:
            raise DomainError(f"extent must be positive, got {self.extent}")
        if self.grid_m <= 0:
            raise DomainError(f"grid_m must be positive, got {self.grid_m}")
        if not self.transmitters:
            raise DomainError("scenario needs at least one transmitter")
        if self.scans_per_point < 1:
            raise DomainError(f"scans_per_point must be >= 1, got {self.scans_per_point}")
        radios = [b for tx in self.transmitters for b in tx.radios]
        if len(set(radios)) != len(radios):
            raise DomainError("transmitters share radio identifiers")

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.extent[0] and 0.0 <= y <= self.extent[1]


def default_scenario(
    seed: int = 42,
    sigma_db: float = 2.0,
    scans_per_point: int = 5,
    n: float = 3.0,
) -> Scenario:
    """The stock evaluation floor: 20 x 20 m, 1 m grid, one five-radio
    access point in each corner."""
    width = height = 20.0
    params = PropagationParams(n=n)
    corners = [(0.0, 0.0), (width, 0.0), (0.0, height), (width, height)]
    transmitters = tuple(
        PlacedTransmitter(
            ap_name=f"AP{i + 1}",
            position=pos,
            radios=tuple(
                parse_bssid(f"02:00:00:{i + 1:02x}:00:{j + 1:02x}") for j in range(5)
            ),
            params=params,
        )
        for i, pos in enumerate(corners)
    )
    return Scenario(
        extent=(width, height),
        grid_m=1.0,
        transmitters=transmitters,
        noise=NoiseModel(sigma_db=sigma_db, seed=seed),
        scans_per_point=scans_per_point,
    )


def scenario_registry(scenario: Scenario) -> ApRegistry:
    """Registry grouping every transmitter's radios under its AP name."""
    radios = {b: tx.ap_name for tx in scenario.transmitters for b in tx.radios}
    ssids = {tx.ap_name: tx.ap_name for tx in scenario.transmitters}
    return ApRegistry(radios=radios, ssids=ssids)


def _grid_coordinates(extent_m: float, grid_m: float) -> list[float]:
    count = int(math.floor(extent_m / grid_m + 1e-9)) + 1
    return [i * grid_m for i in range(count)]


def grid_points(scenario: Scenario) -> list[tuple[str, float, float]]:
    """Training grid as (location_id, x, y); ids sort in row-major order."""
    xs = _grid_coordinates(scenario.extent[0], scenario.grid_m)
    ys = _grid_coordinates(scenario.extent[1], scenario.grid_m)
    return [
        (f"p{ix:03d}_{iy:03d}", x, y)
        for ix, x in enumerate(xs)
        for iy, y in enumerate(ys)
    ]


def generate_training_set(scenario: Scenario) -> TrainingSet:
    """Survey the scenario: `scans_per_point` synthetic scans at every grid
    point, each scan drawn from the training noise stream."""
    noise = NoiseModel(
        sigma_db=scenario.noise.sigma_db,
        seed=stream_seed("training", scenario.noise.seed),
    )
    locations: dict[str, TrainingLocation] = {}
    for serial, (location_id, x, y) in enumerate(grid_points(scenario)):
        scans = tuple(
            synth_scan(
                scenario.transmitters,
                (x, y),
                noise,
                scan_index=serial * scenario.scans_per_point + k,
            )
            for k in range(scenario.scans_per_point)
        )
        locations[location_id] = TrainingLocation(
            location_id=location_id,
            point=planar_to_geo(scenario.anchor, x, y),
            scans=scans,
        )
    return TrainingSet(locations=locations)


def train_scenario_map(scenario: Scenario, floor_dbm: float = DEFAULT_FLOOR_DBM) -> RadioMap:
    """Full offline phase for a scenario: survey, consolidate, build."""
    return build_radio_map(
        generate_training_set(scenario), scenario_registry(scenario), floor_dbm
    )


def random_test_points(scenario: Scenario, seed: int, count: int) -> list[tuple[float, float]]:
    """Uniform test positions inside the extent, from the test-point stream."""
    rng = random.Random(stream_seed("test-points", seed))
    width, height = scenario.extent
    return [(rng.uniform(0.0, width), rng.uniform(0.0, height)) for _ in range(count)]


@dataclass(frozen=True)
class EvalPoint:
    index: int
    true_x: float
    true_y: float
    est_x: float | None = None
    est_y: float | None = None
    error_m: float | None = None
    miss: bool = False
    miss_reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "true": {"x": self.true_x, "y": self.true_y},
            "estimate": None if self.miss else {"x": self.est_x, "y": self.est_y},
            "error_m": self.error_m,
            "miss": self.miss,
            "miss_reason": self.miss_reason,
        }


def percentile_nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile: the smallest value with at least q% of the
    data at or below it. An order statistic, never an interpolation."""
    if not sorted_values:
        raise DomainError("percentile of an empty list")
    index = max(0, math.ceil(q / 100.0 * len(sorted_values)) - 1)
    return sorted_values[index]


@dataclass(frozen=True)
class EvalReport:
    """Per-point localization errors plus their aggregate order statistics."""

    method: str
    config: Mapping[str, object]
    points: tuple[EvalPoint, ...]
    misses: int
    mean_m: float | None
    median_m: float | None
    p95_m: float | None

    @classmethod
    def from_points(cls, method: str, config: Mapping[str, object],
                    points: Sequence[EvalPoint]) -> "EvalReport":
        errors = sorted(p.error_m for p in points if not p.miss)
        misses = sum(1 for p in points if p.miss)
        if errors:
            mean = math.fsum(errors) / len(errors)
            median = percentile_nearest_rank(errors, 50.0)
            p95 = percentile_nearest_rank(errors, 95.0)
        else:
            mean = median = p95 = None
        return cls(
            method=method,
            config=dict(config),
            points=tuple(points),
            misses=misses,
            mean_m=mean,
            median_m=median,
            p95_m=p95,
        )

    def errors(self) -> list[float]:
        return [p.error_m for p in self.points if not p.miss]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "config": dict(self.config),
            "count": len(self.points),
            "misses": self.misses,
            "mean_m": self.mean_m,
            "median_m": self.median_m,
            "p95_m": self.p95_m,
            "points": [p.to_dict() for p in self.points],
        }


def _matcher_echo(config: MatcherConfig) -> dict:
    return {
        "k": config.k,
        "missing_dbm": config.missing_dbm,
        "weighting": config.weighting,
        "floor_dbm": config.floor_dbm,
    }


def evaluate_localization(
    radio_map: RadioMap,
    scenario: Scenario,
    test_points: Sequence[tuple[float, float]],
    config: MatcherConfig,
    test_seed: int,
) -> EvalReport:
    """Measure fingerprint-localization error at the given planar points.

    Each point gets one scan from the evaluation noise stream (disjoint from
    the training stream by construction). Locate failures and cross-floor
    estimates count as misses, never as crashes.

    Raises:
        DomainError: a test point lies outside the scenario extent.
    """
    for x, y in test_points:
        if not scenario.contains(x, y):
            raise DomainError(f"test point ({x}, {y}) outside extent {scenario.extent}")
    noise = NoiseModel(
        sigma_db=scenario.noise.sigma_db, seed=stream_seed("evaluation", test_seed)
    )
    points: list[EvalPoint] = []
    for i, (x, y) in enumerate(test_points):
        scan = synth_scan(scenario.transmitters, (x, y), noise, scan_index=i)
        truth = planar_to_geo(scenario.anchor, x, y)
        try:
            estimate = locate(radio_map, scan, config)
        except WaypointError as exc:
            points.append(EvalPoint(index=i, true_x=x, true_y=y, miss=True,
                                    miss_reason=str(exc)))
            continue
        if estimate.point.floor != truth.floor:
            points.append(EvalPoint(index=i, true_x=x, true_y=y, miss=True,
                                    miss_reason="estimate on wrong floor"))
            continue
        est_x, est_y = geo_to_planar(scenario.anchor, estimate.point)
        points.append(
            EvalPoint(
                index=i,
                true_x=x,
                true_y=y,
                est_x=est_x,
                est_y=est_y,
                error_m=planar_error_m(scenario.anchor, truth, estimate.point),
            )
        )
    echo = dict(_matcher_echo(config))
    echo.update({"test_seed": test_seed, "noise_sigma_db": scenario.noise.sigma_db,
                 "noise_seed": scenario.noise.seed})
    return EvalReport.from_points("fingerprint", echo, points)


def evaluate_multilateration(
    scenario: Scenario,
    test_points: Sequence[tuple[float, float]],
    assumed_params: PropagationParams,
    test_seed: int,
) -> EvalReport:
    """Measure multilateration error with (possibly misspecified) assumed
    propagation parameters, over the same scans the fingerprint arm sees."""
    for x, y in test_points:
        if not scenario.contains(x, y):
            raise DomainError(f"test point ({x}, {y}) outside extent {scenario.extent}")
    registry = scenario_registry(scenario)
    beacons = {
        tx.ap_name: (tx.position, assumed_params) for tx in scenario.transmitters
    }
    noise = NoiseModel(
        sigma_db=scenario.noise.sigma_db, seed=stream_seed("evaluation", test_seed)
    )
    points: list[EvalPoint] = []
    for i, (x, y) in enumerate(test_points):
        scan = synth_scan(scenario.transmitters, (x, y), noise, scan_index=i)
        observed = group_radios(registry, scan)
        try:
            fix = multilaterate(beacons, observed, scenario.extent)
        except WaypointError as exc:
            points.append(EvalPoint(index=i, true_x=x, true_y=y, miss=True,
                                    miss_reason=str(exc)))
            continue
        points.append(
            EvalPoint(
                index=i,
                true_x=x,
                true_y=y,
                est_x=fix.x,
                est_y=fix.y,
                error_m=math.hypot(fix.x - x, fix.y - y),
            )
        )
    echo = {
        "assumed_n": assumed_params.n,
        "assumed_pt_dbm": assumed_params.pt_dbm,
        "test_seed": test_seed,
        "noise_sigma_db": scenario.noise.sigma_db,
        "noise_seed": scenario.noise.seed,
    }
    return EvalReport.from_points("multilateration", echo, points)


@dataclass(frozen=True)
class EvalSeeds:
    """Seeds for an evaluation run: test-point placement and test scans."""

    points: int = 42
    scans: int = 42

    @classmethod
    def from_int(cls, seed: int) -> "EvalSeeds":
        return cls(points=seed, scans=seed)


@dataclass(frozen=True)
class ComparisonReport:
    fingerprint: EvalReport
    multilateration: EvalReport

    def to_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint.to_dict(),
            "multilateration": self.multilateration.to_dict(),
        }


def compare_methods(
    scenario: Scenario,
    config: MatcherConfig,
    assumed_params: PropagationParams,
    seeds: EvalSeeds,
    n_points: int = 100,
) -> ComparisonReport:
    """Run both localization methods over one set of test points and scans.

    The fingerprint arm trains on the scenario and matches as usual; the
    multilateration arm inverts ``assumed_params`` (which may differ from the
    scenario's true parameters) into distances. Both see identical scans, so
    the comparison isolates the method, not the data.

    Raises:
        DomainError: fewer than 3 transmitters (multilateration needs 3).
    """
    if len(scenario.transmitters) < 3:
        raise DomainError(
            f"method comparison needs >= 3 transmitters, got {len(scenario.transmitters)}"
        )
    test_points = random_test_points(scenario, seeds.points, n_points)
    radio_map = train_scenario_map(scenario, config.floor_dbm)
    fingerprint = evaluate_localization(radio_map, scenario, test_points, config, seeds.scans)
    multilateration = evaluate_multilateration(scenario, test_points, assumed_params, seeds.scans)
    return ComparisonReport(fingerprint=fingerprint, multilateration=multilateration)


# ---------------------------------------------------------------------------
# Persistence.

def scenario_document(scenario: Scenario) -> dict:
    return {
        "version": SCENARIO_VERSION,
        "extent": {"width_m": scenario.extent[0], "height_m": scenario.extent[1]},
        "grid_m": scenario.grid_m,
        "scans_per_point": scenario.scans_per_point,
        "anchor": {
            "lat": scenario.anchor.lat,
            "lon": scenario.anchor.lon,
            "floor": scenario.anchor.floor,
        },
        "noise": {"sigma_db": scenario.noise.sigma_db, "seed": scenario.noise.seed},
        "transmitters": [
            {
                "ap_name": tx.ap_name,
                "x": tx.position[0],
                "y": tx.position[1],
                "radios": [b.text for b in tx.radios],
                "params": {
                    "pt_dbm": tx.params.pt_dbm,
                    "gt_db": tx.params.gt_db,
                    "gr_db": tx.params.gr_db,
                    "wavelength_m": tx.params.wavelength_m,
                    "n": tx.params.n,
                },
            }
            for tx in scenario.transmitters
        ],
    }


def save_scenario(scenario: Scenario, sink: IO[str]) -> None:
    json.dump(scenario_document(scenario), sink, indent=2, sort_keys=True)
    sink.write("\n")


def load_scenario(source: IO[str]) -> Scenario:
    """Load a scenario document.

    Raises:
        DocumentError: malformed JSON, unsupported version, bad fields.
    """
    try:
        doc = json.load(source)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"invalid scenario document at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise DocumentError("scenario document: missing field 'version'")
    if doc["version"] != SCENARIO_VERSION:
        raise DocumentError(
            f"unsupported scenario version {doc['version']!r} (supported: {SCENARIO_VERSION})"
        )
    try:
        transmitters = tuple(
            PlacedTransmitter(
                ap_name=str(tx["ap_name"]),
                position=(float(tx["x"]), float(tx["y"])),
                radios=tuple(parse_bssid(b) for b in tx["radios"]),
                params=PropagationParams(
                    pt_dbm=float(tx["params"]["pt_dbm"]),
                    gt_db=float(tx["params"]["gt_db"]),
                    gr_db=float(tx["params"]["gr_db"]),
                    wavelength_m=float(tx["params"]["wavelength_m"]),
                    n=float(tx["params"]["n"]),
                ),
            )
            for tx in doc["transmitters"]
        )
        return Scenario(
            extent=(float(doc["extent"]["width_m"]), float(doc["extent"]["height_m"])),
            grid_m=float(doc["grid_m"]),
            transmitters=transmitters,
            noise=NoiseModel(
                sigma_db=float(doc["noise"]["sigma_db"]), seed=int(doc["noise"]["seed"])
            ),
            scans_per_point=int(doc["scans_per_point"]),
            anchor=GeoPoint(
                lat=float(doc["anchor"]["lat"]),
                lon=float(doc["anchor"]["lon"]),
                floor=int(doc["anchor"]["floor"]),
            ),
        )
    except KeyError as exc:
        raise DocumentError(f"scenario document: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError, WaypointError) as exc:
        raise DocumentError(f"scenario document: {exc}") from exc
