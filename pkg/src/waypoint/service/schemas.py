"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from datetime import datetime
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from ..geo import RSSI_INGEST_MAX, RSSI_INGEST_MIN, parse_bssid
from ..errors import ParseError


class ReadingIn(BaseModel):
    bssid: str
    ssid: str = ""
    rssi_dbm: float = Field(ge=RSSI_INGEST_MIN, le=RSSI_INGEST_MAX)

    @field_validator("bssid")
    @classmethod
    def _canonical_bssid(cls, value: str) -> str:
        try:
            return parse_bssid(value).text
        except ParseError as exc:
            raise ValueError(str(exc)) from exc


class LocateRequest(BaseModel):
    readings: list[ReadingIn]
    timestamp: Optional[datetime] = None


class PointOut(BaseModel):
    lat: float
    lon: float
    floor: int
    x: Optional[float] = None
    y: Optional[float] = None


class NeighborOut(BaseModel):
    location_id: str
    signal_distance_db: float


class LocateResponse(BaseModel):
    point: PointOut
    method: str
    neighbors: list[NeighborOut]


class RouteNodeOut(PointOut):
    id: str
    kind: str


class RouteResponse(BaseModel):
    nodes: list[RouteNodeOut]
    total_m: float


class RadioMapMeta(BaseModel):
    floor_dbm: float
    fingerprints: int
    access_points: int


class GraphEdgeOut(BaseModel):
    a: str
    b: str
    weight_m: float


class GraphOut(BaseModel):
    nodes: list[RouteNodeOut]
    edges: list[GraphEdgeOut]


class FrameOut(BaseModel):
    width_m: float
    height_m: float


class TransmitterOut(BaseModel):
    ap_name: str
    x: float
    y: float


class ScenarioOut(BaseModel):
    extent: FrameOut
    grid_m: float
    transmitters: list[TransmitterOut]


class MapResponse(BaseModel):
    radio_map: RadioMapMeta
    graph: GraphOut
    frame: FrameOut
    simulated: bool
    scenario: Optional[ScenarioOut] = None


class SimScanRequest(BaseModel):
    x: float
    y: float


class ReadingOut(BaseModel):
    bssid: str
    ssid: str
    rssi_dbm: float


class XYOut(BaseModel):
    x: float
    y: float


class SimScanResponse(BaseModel):
    readings: list[ReadingOut]
    true_position: XYOut
    scan_index: int
