import concurrent.futures
import json

import pytest
from fastapi.testclient import TestClient

from waypoint.localization import MatcherConfig
from waypoint.navgraph import load_graph
from waypoint.radiomap import ApRegistry, build_radio_map, read_scan_log, save_radio_map
from waypoint.service import ServiceState, Snapshot, SnapshotSources, create_app, load_snapshot
from waypoint.simulator import default_scenario, train_scenario_map

TABLE_READINGS = [
    {"bssid": "00:23:04:89:24:08", "ssid": "PESITRB", "rssi_dbm": -62},
    {"bssid": "00:19:5b:b1:23:90", "ssid": "PESITRB", "rssi_dbm": -80},
    {"bssid": "00:23:04:89:1f:98", "ssid": "PESITRB", "rssi_dbm": -53},
    {"bssid": "00:23:04:89:67:e7", "ssid": "CISCO_LAB", "rssi_dbm": -85},
]


@pytest.fixture(scope="module")
def sample_map(sample_scans_path):
    result = read_scan_log(str(sample_scans_path))
    return build_radio_map(result.training, ApRegistry.from_training(result.training))


@pytest.fixture(scope="module")
def triangle(triangle_graph_path):
    with open(triangle_graph_path) as fh:
        return load_graph(fh)


@pytest.fixture()
def client(sample_map, triangle):
    snapshot = Snapshot(radio_map=sample_map, graph=triangle, scenario=None,
                        config=MatcherConfig(k=1))
    app = create_app(ServiceState(snapshot))
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def sim_client(triangle):
    scenario = default_scenario(seed=42, sigma_db=0.0, scans_per_point=1)
    radio_map = train_scenario_map(scenario)
    snapshot = Snapshot(radio_map=radio_map, graph=triangle, scenario=scenario,
                        config=MatcherConfig(k=1))
    app = create_app(ServiceState(snapshot))
    with TestClient(app) as c:
        yield c


class TestLocateEndpoint:
    def test_sample_readings_return_auditorium(self, client):
        resp = client.post("/api/v1/locate", json={"readings": TABLE_READINGS})
        assert resp.status_code == 200
        body = resp.json()
        assert body["method"] == "fingerprint"
        assert body["neighbors"][0] == {"location_id": "auditorium",
                                        "signal_distance_db": 0.0}
        assert body["point"]["lat"] == 12.93462
        assert body["point"]["lon"] == 77.53584
        assert body["point"]["floor"] == 0

    def test_empty_readings_is_422(self, client):
        resp = client.post("/api/v1/locate", json={"readings": []})
        assert resp.status_code == 422

    def test_weak_readings_no_usable_signal(self, client):
        resp = client.post("/api/v1/locate", json={
            "readings": [{"bssid": "0a:00:00:00:00:01", "ssid": "x", "rssi_dbm": -99}],
        })
        assert resp.status_code == 422
        assert "no usable signal" in resp.text

    def test_malformed_bssid_names_field(self, client):
        resp = client.post("/api/v1/locate", json={
            "readings": [{"bssid": "nope", "ssid": "x", "rssi_dbm": -60}],
        })
        assert resp.status_code == 422
        detail = resp.json()["detail"]
        assert any("bssid" in str(item.get("loc", [])) for item in detail)

    def test_out_of_range_rssi_rejected(self, client):
        resp = client.post("/api/v1/locate", json={
            "readings": [{"bssid": "0a:00:00:00:00:01", "ssid": "x", "rssi_dbm": 10}],
        })
        assert resp.status_code == 422

    def test_neighbors_sorted_ascending(self, sample_map, triangle):
        snapshot = Snapshot(radio_map=sample_map, graph=triangle, scenario=None,
                            config=MatcherConfig(k=2))
        app = create_app(ServiceState(snapshot))
        with TestClient(app) as c:
            resp = c.post("/api/v1/locate", json={"readings": TABLE_READINGS})
            distances = [n["signal_distance_db"] for n in resp.json()["neighbors"]]
            assert distances == sorted(distances)

    def test_duplicate_radios_merged(self, client):
        doubled = TABLE_READINGS + [dict(TABLE_READINGS[0])]
        resp = client.post("/api/v1/locate", json={"readings": doubled})
        assert resp.status_code == 200


class TestRouteEndpoint:
    def test_triangle_route(self, client):
        resp = client.get("/api/v1/route", params={"from": "A", "to": "C"})
        assert resp.status_code == 200
        body = resp.json()
        assert [n["id"] for n in body["nodes"]] == ["A", "B", "C"]
        assert body["total_m"] == 2.0

    def test_identity_route(self, client):
        resp = client.get("/api/v1/route", params={"from": "A", "to": "A"})
        assert resp.status_code == 200
        body = resp.json()
        assert [n["id"] for n in body["nodes"]] == ["A"]
        assert body["total_m"] == 0.0

    def test_unknown_node_404_names_id(self, client):
        resp = client.get("/api/v1/route", params={"from": "A", "to": "Z"})
        assert resp.status_code == 404
        assert "Z" in resp.json()["detail"]

    def test_unreachable_is_409(self, sample_map, tmp_path):
        doc = {
            "version": 1,
            "nodes": [
                {"id": "A", "lat": 0.0, "lon": 0.0, "floor": 0, "kind": "room"},
                {"id": "B", "lat": 0.0, "lon": 1e-5, "floor": 0, "kind": "room"},
                {"id": "island", "lat": 0.0, "lon": 9e-5, "floor": 0, "kind": "room"},
            ],
            "edges": [{"a": "A", "b": "B"}],
        }
        import io

        graph = load_graph(io.StringIO(json.dumps(doc)))
        snapshot = Snapshot(radio_map=sample_map, graph=graph, scenario=None,
                            config=MatcherConfig(k=1))
        app = create_app(ServiceState(snapshot))
        with TestClient(app) as c:
            resp = c.get("/api/v1/route", params={"from": "A", "to": "island"})
            assert resp.status_code == 409


class TestMapEndpoint:
    def test_metadata_and_graph(self, client):
        resp = client.get("/api/v1/map")
        assert resp.status_code == 200
        body = resp.json()
        assert body["radio_map"]["fingerprints"] == 2
        assert body["radio_map"]["floor_dbm"] == -85.0
        assert len(body["graph"]["nodes"]) == 3
        assert len(body["graph"]["edges"]) == 3
        assert body["simulated"] is False
        assert body["scenario"] is None
        assert body["frame"]["width_m"] > 0

    def test_simulated_mode_exposes_scenario(self, sim_client):
        body = sim_client.get("/api/v1/map").json()
        assert body["simulated"] is True
        assert body["scenario"]["extent"] == {"width_m": 20.0, "height_m": 20.0}
        assert len(body["scenario"]["transmitters"]) == 4


class TestSimScanEndpoint:
    def test_off_by_default(self, client):
        resp = client.post("/api/v1/sim/scan", json={"x": 1.0, "y": 1.0})
        assert resp.status_code == 409

    def test_reading_count_and_echo(self, sim_client):
        resp = sim_client.post("/api/v1/sim/scan", json={"x": 1.0, "y": 1.0})
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["readings"]) == 20  # 4 APs x 5 radios
        assert body["true_position"] == {"x": 1.0, "y": 1.0}

    def test_outside_extent_is_422(self, sim_client):
        resp = sim_client.post("/api/v1/sim/scan", json={"x": 25.0, "y": 1.0})
        assert resp.status_code == 422

    def test_zero_noise_scans_repeat_exactly(self, sim_client):
        a = sim_client.post("/api/v1/sim/scan", json={"x": 3.0, "y": 4.0}).json()
        b = sim_client.post("/api/v1/sim/scan", json={"x": 3.0, "y": 4.0}).json()
        assert a["readings"] == b["readings"]
        assert a["scan_index"] != b["scan_index"]

    def test_scan_feeds_locate_round_trip(self, sim_client):
        # Zero-noise scenario: a scan at a grid point relocates exactly there.
        scan = sim_client.post("/api/v1/sim/scan", json={"x": 5.0, "y": 7.0}).json()
        resp = sim_client.post("/api/v1/locate", json={"readings": scan["readings"]})
        assert resp.status_code == 200
        point = resp.json()["point"]
        assert point["x"] == pytest.approx(5.0, abs=1e-6)
        assert point["y"] == pytest.approx(7.0, abs=1e-6)


class TestConcurrencyAndReload:
    def test_concurrent_mixed_requests_match_serial(self, client):
        locate_body = {"readings": TABLE_READINGS}
        serial_locate = client.post("/api/v1/locate", json=locate_body).json()
        serial_route = client.get("/api/v1/route", params={"from": "A", "to": "C"}).json()

        def do(i):
            if i % 2 == 0:
                return ("locate", client.post("/api/v1/locate", json=locate_body).json())
            return ("route", client.get("/api/v1/route", params={"from": "A", "to": "C"}).json())

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(do, range(32)))
        for kind, body in results:
            assert body == (serial_locate if kind == "locate" else serial_route)

    def test_snapshot_reload_swaps_generation(self, tmp_path, sample_scans_path,
                                              triangle_graph_path, sample_map):
        map_path = tmp_path / "map.json"
        with open(map_path, "w") as fh:
            save_radio_map(sample_map, fh)
        sources = SnapshotSources(map_path=map_path, graph_path=triangle_graph_path,
                                  scenario_path=None)
        state = ServiceState(
            load_snapshot(map_path, triangle_graph_path, None, MatcherConfig(k=1)),
            sources,
        )
        app = create_app(state)
        with TestClient(app) as c:
            assert c.get("/api/v1/map").json()["radio_map"]["fingerprints"] == 2
            # retrain with a stricter floor that drops one location entirely
            result = read_scan_log(str(sample_scans_path))
            retrained = build_radio_map(
                result.training, ApRegistry.from_training(result.training), -80.0
            )
            with open(map_path, "w") as fh:
                save_radio_map(retrained, fh)
            state.reload()
            assert c.get("/api/v1/map").json()["radio_map"]["fingerprints"] == \
                len(retrained.fingerprints)
