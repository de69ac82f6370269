"""HTTP service exposing localization, routing and simulated scans.

The service holds immutable snapshots of the radio map, navigation graph and
optional scenario. All request handling is read-only; the only mutation is
an atomic snapshot swap triggered by SIGHUP (when the snapshot was loaded
from files), so no request ever observes a partially reloaded state.
"""

from __future__ import annotations

import asyncio
import itertools
import logging
import math
import signal
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request

from ..errors import NoUsableSignalError, UnknownNodeError, UnreachableError
from ..geo import parse_bssid
from ..localization import MatcherConfig, locate
from ..navgraph import NavGraph, load_graph, shortest_path
from ..payloads import estimate_payload, map_payload, route_payload, scan_payload
from ..propagation import NoiseModel, stream_seed, synth_scan
from ..radiomap import RadioMap, Scan, ScanReading, load_radio_map
from ..simulator import Scenario, load_scenario
from . import schemas

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Snapshot:
    """One immutable generation of served data."""

    radio_map: RadioMap
    graph: NavGraph
    scenario: Scenario | None
    config: MatcherConfig


@dataclass(frozen=True)
class SnapshotSources:
    map_path: Path
    graph_path: Path
    scenario_path: Path | None


class ServiceState:
    """Holds the current snapshot; replacement is a single attribute swap."""

    def __init__(self, snapshot: Snapshot, sources: SnapshotSources | None = None) -> None:
        self.snapshot = snapshot
        self.sources = sources
        self._scan_counter = itertools.count()
        self._counter_lock = threading.Lock()

    def next_scan_index(self) -> int:
        with self._counter_lock:
            return next(self._scan_counter)

    def reload(self) -> None:
        """Rebuild the snapshot from its source documents and swap it in."""
        if self.sources is None:
            log.warning("reload requested but the snapshot was not loaded from files")
            return
        self.snapshot = load_snapshot(
            self.sources.map_path,
            self.sources.graph_path,
            self.sources.scenario_path,
            self.snapshot.config,
        )
        log.info("snapshot reloaded from %s", self.sources.map_path)


def load_snapshot(
    map_path: str | Path,
    graph_path: str | Path,
    scenario_path: str | Path | None,
    config: MatcherConfig,
) -> Snapshot:
    with open(map_path, encoding="utf-8") as fh:
        radio_map = load_radio_map(fh)
    with open(graph_path, encoding="utf-8") as fh:
        graph = load_graph(fh)
    scenario = None
    if scenario_path is not None:
        with open(scenario_path, encoding="utf-8") as fh:
            scenario = load_scenario(fh)
    return Snapshot(radio_map=radio_map, graph=graph, scenario=scenario, config=config)


def _request_scan(body: schemas.LocateRequest) -> Scan:
    """Convert a locate request to a scan, averaging duplicate radios."""
    merged: dict[str, tuple[str, list[float]]] = {}
    for reading in body.readings:
        _, values = merged.setdefault(reading.bssid, (reading.ssid, []))
        values.append(reading.rssi_dbm)
    readings = tuple(
        ScanReading(bssid=parse_bssid(bssid), ssid=ssid, rssi=math.fsum(values) / len(values))
        for bssid, (ssid, values) in sorted(merged.items())
    )
    return Scan(
        timestamp=body.timestamp or datetime(1970, 1, 1, tzinfo=timezone.utc),
        readings=readings,
    )


def create_app(state: ServiceState) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if state.sources is not None:
            try:
                loop = asyncio.get_running_loop()
                loop.add_signal_handler(signal.SIGHUP, state.reload)
            except (NotImplementedError, RuntimeError, ValueError):
                log.debug("SIGHUP reload handler unavailable on this platform/thread")
        yield

    app = FastAPI(title="waypoint", version="0.1.0", lifespan=lifespan)
    app.state.service = state

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        log.info(
            "request method=%s path=%s status=%d duration_ms=%.1f",
            request.method, request.url.path, response.status_code,
            (time.monotonic() - started) * 1e3,
        )
        return response

    @app.post("/api/v1/locate", response_model=schemas.LocateResponse)
    def handle_locate(body: schemas.LocateRequest):
        snap = state.snapshot
        try:
            estimate = locate(snap.radio_map, _request_scan(body), snap.config)
        except NoUsableSignalError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        anchor = snap.scenario.anchor if snap.scenario is not None else None
        return estimate_payload(estimate, anchor)

    @app.get("/api/v1/route", response_model=schemas.RouteResponse)
    def handle_route(
        from_id: str = Query(alias="from"), to_id: str = Query(alias="to")
    ):
        snap = state.snapshot
        try:
            route = shortest_path(snap.graph, from_id, to_id)
        except UnknownNodeError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except UnreachableError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        anchor = snap.scenario.anchor if snap.scenario is not None else None
        return route_payload(route, snap.graph, anchor)

    @app.get("/api/v1/map", response_model=schemas.MapResponse)
    def handle_map():
        snap = state.snapshot
        return map_payload(snap.radio_map, snap.graph, snap.scenario)

    @app.post("/api/v1/sim/scan", response_model=schemas.SimScanResponse)
    def handle_sim_scan(body: schemas.SimScanRequest):
        snap = state.snapshot
        scenario = snap.scenario
        if scenario is None:
            raise HTTPException(status_code=409, detail="simulated mode is off")
        if not scenario.contains(body.x, body.y):
            raise HTTPException(
                status_code=422,
                detail=f"point ({body.x}, {body.y}) outside extent {scenario.extent}",
            )
        index = state.next_scan_index()
        noise = NoiseModel(
            sigma_db=scenario.noise.sigma_db,
            seed=stream_seed("service", scenario.noise.seed),
        )
        scan = synth_scan(scenario.transmitters, (body.x, body.y), noise, index)
        return scan_payload(scan, (body.x, body.y), index)

    return app
