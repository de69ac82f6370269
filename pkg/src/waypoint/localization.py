"""Online matching: nearest neighbor in signal space, and a
propagation-based multilateration baseline.

The fingerprint matcher compares the live scan's consolidated signature with
every trained fingerprint using Euclidean distance in dBm over the union of
access points, substituting a configurable level for access points absent on
one side. Multilateration instead inverts the propagation model into per-AP
distances and solves for the position by nonlinear least squares; it exists
as the comparison baseline, not a production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, InsufficientBeaconsError, NoUsableSignalError
from .geo import GeoPoint, RssiDbm
from .propagation import PropagationParams, distance_from_power
from .radiomap import DEFAULT_FLOOR_DBM, RadioMap, Scan, apply_floor, group_radios

#: Level assumed for an access point missing from one side of a comparison.
DEFAULT_MISSING_DBM: RssiDbm = -100.0

Weighting = Literal["uniform", "inverse-distance"]


@dataclass(frozen=True)
class MatcherConfig:
    k: int = 3
    missing_dbm: RssiDbm = DEFAULT_MISSING_DBM
    weighting: Weighting = "inverse-distance"
    floor_dbm: RssiDbm = DEFAULT_FLOOR_DBM

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if self.missing_dbm > self.floor_dbm:
            raise DomainError(
                f"missing_dbm ({self.missing_dbm}) must not exceed floor_dbm ({self.floor_dbm})"
            )
        if self.weighting not in ("uniform", "inverse-distance"):
            raise DomainError(f"unknown weighting {self.weighting!r}")


@dataclass(frozen=True)
class Neighbor:
    location_id: str
    signal_distance_db: float


@dataclass(frozen=True)
class LocationEstimate:
    point: GeoPoint
    neighbors: tuple[Neighbor, ...]
    method: Literal["fingerprint", "multilateration"]


def signal_distance(
    a: Mapping[str, RssiDbm],
    b: Mapping[str, RssiDbm],
    missing_dbm: RssiDbm = DEFAULT_MISSING_DBM,
) -> float:
    """Euclidean distance in dB between two signatures.

    Computed over the union of access points, substituting ``missing_dbm``
    for an access point absent from one side. Symmetric; zero iff the
    signatures agree over the union.

    Raises:
        DomainError: both signatures empty.
    """
    if not a and not b:
        raise DomainError("cannot compare two empty signatures")
    total = math.fsum(
        (a.get(ap, missing_dbm) - b.get(ap, missing_dbm)) ** 2
        for ap in a.keys() | b.keys()
    )
    return math.sqrt(total)


def locate(radio_map: RadioMap, scan: Scan, config: MatcherConfig = MatcherConfig()) -> LocationEstimate:
    """Match one online scan against the radio map.

    The scan is consolidated per access point and floored exactly like the
    training data, then ranked against every fingerprint by signal distance
    (ties broken by location id). With k = 1 the nearest fingerprint's point
    is returned verbatim; with k > 1 the estimate is the weighted lat/lon
    centroid of the selected neighbors on the nearest neighbor's floor.

    Raises:
        DomainError: empty radio map.
        NoUsableSignalError: nothing left of the scan after flooring.
    """
    if not radio_map.fingerprints:
        raise DomainError("radio map is empty")
    query = apply_floor(group_radios(radio_map.registry, scan), config.floor_dbm)
    if not query:
        raise NoUsableSignalError("no usable signal")

    ranked = sorted(
        ((signal_distance(query, fp.signature, config.missing_dbm), fp)
         for fp in radio_map.fingerprints),
        key=lambda pair: (pair[0], pair[1].location_id),
    )
    selected = ranked[: config.k]
    neighbors = tuple(Neighbor(fp.location_id, d) for d, fp in selected)
    nearest = selected[0][1]

    if len(selected) == 1 or config.k == 1:
        point = nearest.point
    else:
        floor = nearest.point.floor
        pool = [(d, fp) for d, fp in selected if fp.point.floor == floor]
        if config.weighting == "inverse-distance":
            weights = [1.0 / (d + 1e-6) for d, _ in pool]
        else:
            weights = [1.0] * len(pool)
        wsum = math.fsum(weights)
        lat = math.fsum(w * fp.point.lat for w, (_, fp) in zip(weights, pool)) / wsum
        lon = math.fsum(w * fp.point.lon for w, (_, fp) in zip(weights, pool)) / wsum
        point = GeoPoint(lat=lat, lon=lon, floor=floor)
    return LocationEstimate(point=point, neighbors=neighbors, method="fingerprint")


@dataclass(frozen=True)
class MultilaterationFix:
    """A planar position fix with its residual diagnostics.

    ``residual`` is the sum of squared range residuals (meters^2) at the fix;
    ``converged`` is False when the local solver failed and the best coarse
    grid candidate is returned instead.
    """

    x: float
    y: float
    residual: float
    converged: bool

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def multilaterate(
    beacons: Mapping[str, tuple[tuple[float, float], PropagationParams]],
    observed: Mapping[str, RssiDbm],
    frame: tuple[float, float],
    grid_m: float = 1.0,
) -> MultilaterationFix:
    """Estimate a planar position from per-access-point power readings.

    Each usable access point (present in both mappings, finite reading)
    contributes a range obtained by inverting the propagation model; the fix
    minimizes the sum of squared differences between geometric and inverted
    ranges. A coarse grid over ``frame`` (cell <= ``grid_m``) seeds a local
    least-squares refinement.

    Raises:
        InsufficientBeaconsError: fewer than 3 usable access points.
    """
    usable = sorted(
        ap for ap in set(beacons) & set(observed) if math.isfinite(observed[ap])
    )
    if len(usable) < 3:
        raise InsufficientBeaconsError(
            f"insufficient beacons: {len(usable)} usable, need at least 3"
        )
    positions = np.array([beacons[ap][0] for ap in usable], dtype=float)
    ranges = np.array(
        [distance_from_power(beacons[ap][1], observed[ap]) for ap in usable]
    )

    def residuals(p: np.ndarray) -> np.ndarray:
        return np.hypot(positions[:, 0] - p[0], positions[:, 1] - p[1]) - ranges

    def cost(p: np.ndarray) -> float:
        r = residuals(p)
        return float(r @ r)

    width, height = frame
    if width <= 0 or height <= 0 or grid_m <= 0:
        raise DomainError(f"invalid search frame {frame!r} / grid {grid_m!r}")
    xs = np.linspace(0.0, width, int(math.ceil(width / grid_m)) + 1)
    ys = np.linspace(0.0, height, int(math.ceil(height / grid_m)) + 1)
    gx, gy = np.meshgrid(xs, ys)
    cells = np.column_stack([gx.ravel(), gy.ravel()])
    dists = np.hypot(
        cells[:, None, 0] - positions[None, :, 0],
        cells[:, None, 1] - positions[None, :, 1],
    )
    grid_costs = ((dists - ranges[None, :]) ** 2).sum(axis=1)
    order = np.argsort(grid_costs, kind="stable")

    best_grid = cells[order[0]]
    best: tuple[float, np.ndarray] | None = None
    for idx in order[:5]:
        result = least_squares(
            residuals, cells[idx], method="lm", xtol=1e-12, ftol=1e-12, gtol=1e-12
        )
        if result.success:
            c = cost(result.x)
            if best is None or c < best[0]:
                best = (c, result.x)
    if best is not None and best[0] <= grid_costs[order[0]]:
        return MultilaterationFix(
            x=float(best[1][0]), y=float(best[1][1]), residual=best[0], converged=True
        )
    return MultilaterationFix(
        x=float(best_grid[0]),
        y=float(best_grid[1]),
        residual=float(grid_costs[order[0]]),
        converged=False,
    )
