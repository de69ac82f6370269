import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def sample_scans_path() -> pathlib.Path:
    return DATA_DIR / "sample_scans.csv"


@pytest.fixture(scope="session")
def triangle_graph_path() -> pathlib.Path:
    return DATA_DIR / "triangle_graph.json"


@pytest.fixture(scope="session")
def building_graph_path() -> pathlib.Path:
    return DATA_DIR / "building_graph.json"


@pytest.fixture(scope="session")
def default_scenario_path() -> pathlib.Path:
    return DATA_DIR / "default_scenario.json"
