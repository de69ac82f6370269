"""Response-document builders shared by the CLI and the HTTP service.

Both surfaces must emit byte-for-byte the same structures for the same
results, so the dict shapes live here and nowhere else.
"""

from __future__ import annotations

from .geo import GeoPoint
from .localization import LocationEstimate
from .navgraph import NavGraph, Route
from .radiomap import RadioMap, Scan
from .simulator import Scenario, geo_to_planar


def _point_payload(point: GeoPoint, anchor: GeoPoint | None) -> dict:
    payload: dict = {"lat": point.lat, "lon": point.lon, "floor": point.floor}
    if anchor is not None:
        x, y = geo_to_planar(anchor, point)
        payload["x"] = x
        payload["y"] = y
    else:
        payload["x"] = None
        payload["y"] = None
    return payload


def estimate_payload(estimate: LocationEstimate, anchor: GeoPoint | None = None) -> dict:
    return {
        "point": _point_payload(estimate.point, anchor),
        "method": estimate.method,
        "neighbors": [
            {"location_id": n.location_id, "signal_distance_db": n.signal_distance_db}
            for n in estimate.neighbors
        ],
    }


def route_payload(route: Route, graph: NavGraph, anchor: GeoPoint | None = None) -> dict:
    nodes = []
    for node_id in route.nodes:
        node = graph.nodes[node_id]
        entry = {"id": node.id, "kind": node.kind}
        entry.update(_point_payload(node.point, anchor))
        nodes.append(entry)
    return {"nodes": nodes, "total_m": route.total_m}


def scan_payload(scan: Scan, true_position: tuple[float, float], scan_index: int) -> dict:
    return {
        "readings": [
            {"bssid": r.bssid.text, "ssid": r.ssid, "rssi_dbm": r.rssi}
            for r in scan.readings
        ],
        "true_position": {"x": true_position[0], "y": true_position[1]},
        "scan_index": scan_index,
    }


def _render_frame(graph: NavGraph, scenario: Scenario | None) -> tuple[GeoPoint, float, float]:
    """Pick an anchor and a frame large enough to render graph + scenario."""
    if scenario is not None:
        anchor = scenario.anchor
        width, height = scenario.extent
    else:
        lats = [n.point.lat for n in graph.nodes.values()]
        lons = [n.point.lon for n in graph.nodes.values()]
        floor = next(iter(graph.nodes.values())).point.floor if graph.nodes else 0
        anchor = GeoPoint(min(lats), min(lons), floor) if lats else GeoPoint(0.0, 0.0, 0)
        width = height = 1.0
    for node in graph.nodes.values():
        x, y = geo_to_planar(anchor, node.point)
        width = max(width, x)
        height = max(height, y)
    return anchor, width, height


def map_payload(radio_map: RadioMap, graph: NavGraph, scenario: Scenario | None) -> dict:
    anchor, width, height = _render_frame(graph, scenario)
    nodes = []
    for node in sorted(graph.nodes.values(), key=lambda n: n.id):
        entry = {"id": node.id, "kind": node.kind}
        entry.update(_point_payload(node.point, anchor))
        nodes.append(entry)
    payload: dict = {
        "radio_map": {
            "floor_dbm": radio_map.floor_dbm,
            "fingerprints": len(radio_map.fingerprints),
            "access_points": len(radio_map.ssids),
        },
        "graph": {
            "nodes": nodes,
            "edges": [{"a": a, "b": b, "weight_m": w} for a, b, w in sorted(graph.edges)],
        },
        "frame": {"width_m": width, "height_m": height},
        "simulated": scenario is not None,
        "scenario": None,
    }
    if scenario is not None:
        payload["scenario"] = {
            "extent": {"width_m": scenario.extent[0], "height_m": scenario.extent[1]},
            "grid_m": scenario.grid_m,
            "transmitters": [
                {"ap_name": tx.ap_name, "x": tx.position[0], "y": tx.position[1]}
                for tx in scenario.transmitters
            ],
        }
    return payload
